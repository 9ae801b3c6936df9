"""Finitely presented graded rings, computed one degree at a time.

A :class:`Presentation` lists graded generators and homogeneous relations
with integer (or mod 2) coefficients. The degree-``d`` piece of the quotient
is the free module on the degree-``d`` monomials modulo all products
``monomial * relation`` that land in degree ``d``. Since relations are
homogeneous in a commutative polynomial ring, this span is the whole ideal in
that degree; no Groebner basis is needed.

Monomials commute strictly. Odd-degree generators would anticommute in a
graded-commutative ring, but in the rings built here every such discrepancy is
2-torsion that the relations already kill.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Sequence

from .exact_linalg import QuotientStructure, _f2_eliminate, quotient_structure

INTEGER = "integer"
MOD2 = "mod2"

Monomial = tuple  # exponent vector, one entry per generator


class MissingPieceError(LookupError):
    """A degree piece was requested without permission to build it."""


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"generator {self.name!r} must have positive degree")


@lru_cache(maxsize=None)
def _monomials(degrees: tuple[int, ...], d: int) -> tuple[Monomial, ...]:
    """All exponent vectors of total degree ``d``, lex-descending."""
    if not degrees:
        return ((),) if d == 0 else ()
    g, rest = degrees[0], degrees[1:]
    out = []
    for k in range(d // g, -1, -1):
        for tail in _monomials(rest, d - k * g):
            out.append((k,) + tail)
    return tuple(out)


class Presentation:
    """Generators and homogeneous relations of a graded commutative ring.

    Degree pieces are built lazily and cached; the cache is guarded so that
    concurrent readers see one piece per degree.
    """

    def __init__(
        self,
        generators: Sequence[GeneratorSpec],
        relations: Iterable[Mapping[Monomial, int]] = (),
        coefficient_mode: str = INTEGER,
        name: str = "",
        degree_bound: int | None = None,
        sq1: Mapping[str, Mapping[Monomial, int]] | None = None,
        notes: Sequence[str] = (),
    ):
        if coefficient_mode not in (INTEGER, MOD2):
            raise ValueError(f"unknown coefficient mode {coefficient_mode!r}")
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.generators = tuple(generators)
        self.coefficient_mode = coefficient_mode
        self.name = name
        self.degree_bound = degree_bound
        self.notes = tuple(notes)
        self._index = {n: i for i, n in enumerate(names)}
        self._degrees = tuple(g.degree for g in generators)
        rels = []
        for rel in relations:
            terms = self._clean(rel)
            if not terms:
                # empty sums read literally are the zero relation
                continue
            degs = {self.monomial_degree(mono) for mono in terms}
            if len(degs) != 1:
                raise ValueError(f"relation {terms} is not homogeneous")
            if degs.pop() < 1:
                raise ValueError("relations must have degree >= 1")
            rels.append(terms)
        self.relations: tuple[dict[Monomial, int], ...] = tuple(rels)
        self.sq1_images = None if sq1 is None else {
            k: self._clean(v) for k, v in sq1.items()
        }
        self._pieces: dict[int, GradedPiece] = {}
        self._lock = threading.Lock()

    # -- helpers -------------------------------------------------------
    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def generator_degrees(self) -> tuple[int, ...]:
        return self._degrees

    def index(self, name: str) -> int:
        return self._index[name]

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * g for e, g in zip(mono, self._degrees))

    def monomials(self, d: int) -> tuple[Monomial, ...]:
        return _monomials(self._degrees, d) if d >= 0 else ()

    def _clean(self, terms: Mapping[Monomial, int]) -> dict[Monomial, int]:
        out = {}
        for mono, c in terms.items():
            mono = tuple(mono)
            if len(mono) != self.ngens or min(mono, default=0) < 0:
                raise ValueError(f"bad monomial {mono}")
            c = int(c)
            if self.coefficient_mode == MOD2:
                c %= 2
            if c:
                out[mono] = c
        return out

    # -- element constructors -----------------------------------------
    def gen(self, name: str) -> "RingElement":
        mono = [0] * self.ngens
        mono[self._index[name]] = 1
        return RingElement(self, {tuple(mono): 1}, self._degrees[self._index[name]])

    def gens(self) -> tuple["RingElement", ...]:
        return tuple(self.gen(g.name) for g in self.generators)

    def one(self) -> "RingElement":
        return RingElement(self, {(0,) * self.ngens: 1}, 0)

    def zero(self, degree: int = 0) -> "RingElement":
        return RingElement(self, {}, degree)

    def element(self, terms: Mapping[Monomial, int], degree: int | None = None) -> "RingElement":
        terms = self._clean(terms)
        if degree is None:
            degree = self.monomial_degree(next(iter(terms))) if terms else 0
        return RingElement(self, terms, degree)

    def parse(self, text: str) -> "RingElement":
        """Parse a small expression such as ``"b^4 - 2*d^2"``."""
        env = {g.name: self.gen(g.name) for g in self.generators}
        env["one"] = self.one()
        try:
            val = eval(text.replace("^", "**"), {"__builtins__": {}}, env)
        except Exception as exc:  # noqa: BLE001
            raise ValueError(f"cannot parse {text!r}: {exc}") from None
        if isinstance(val, int):
            return self.one() * val
        return val

    def relation_elements(self) -> list["RingElement"]:
        return [self.element(r) for r in self.relations]

    # -- pieces ---------------------------------------------------------
    def piece(self, d: int, build: bool = True) -> "GradedPiece":
        p = self._pieces.get(d)
        if p is not None:
            return p
        if not build:
            raise MissingPieceError(f"degree {d} piece of {self.name or 'ring'} not built")
        with self._lock:
            p = self._pieces.get(d)
            if p is None:
                p = build_piece(self, d)
                self._pieces[d] = p
        return p

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "coefficient_mode": self.coefficient_mode,
            "generators": [{"name": g.name, "degree": g.degree} for g in self.generators],
            "relations": [
                [[c, list(mono)] for mono, c in sorted(r.items(), reverse=True)]
                for r in self.relations
            ],
            "degree_bound": self.degree_bound,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Presentation":
        gens = [GeneratorSpec(g["name"], g["degree"]) for g in data["generators"]]
        rels = [{tuple(mono): c for c, mono in r} for r in data["relations"]]
        return cls(
            gens,
            rels,
            coefficient_mode=data["coefficient_mode"],
            name=data.get("name", ""),
            degree_bound=data.get("degree_bound"),
            notes=data.get("notes", ()),
        )

    def __repr__(self):
        gens = ", ".join(f"{g.name}{g.degree}" for g in self.generators)
        return f"Presentation({self.name or '?'}: [{gens}], {len(self.relations)} relations, {self.coefficient_mode})"


class RingElement:
    """A homogeneous element, stored as ``{monomial: coefficient}``.

    Arithmetic is on the free polynomial ring; use :func:`reduce` or
    :func:`is_zero` to compare in the quotient.
    """

    __slots__ = ("presentation", "terms", "degree")

    def __init__(self, presentation: Presentation, terms: dict[Monomial, int], degree: int):
        self.presentation = presentation
        self.terms = terms
        self.degree = degree

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.presentation is not self.presentation:
                raise ValueError("elements belong to different presentations")
            return other
        if isinstance(other, int):
            return self.presentation.one() * other
        return NotImplemented

    def _combine(self, other: "RingElement", sign: int) -> "RingElement":
        if not other.terms:
            return self
        if not self.terms:
            return other if sign == 1 else -other
        if other.degree != self.degree:
            raise ValueError(f"cannot add degree {self.degree} and degree {other.degree}")
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + sign * c
        return self.presentation.element(out, self.degree)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self.presentation.element({m: -c for m, c in self.terms.items()}, self.degree)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.presentation.element({m: c * other for m, c in self.terms.items()}, self.degree)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.presentation.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        # equality in the free polynomial ring; see equal_elements for the quotient
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.presentation is other.presentation and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"RingElement({format_element(self)}, degree={self.degree})"

    def __str__(self):
        return format_element(self)


def format_element(e: RingElement) -> str:
    if not e.terms:
        return "0"
    names = [g.name for g in e.presentation.generators]
    parts = []
    for mono, c in sorted(e.terms.items(), reverse=True):
        factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, mono) if k]
        body = "*".join(factors)
        if not body:
            parts.append(str(c))
        elif c == 1:
            parts.append(body)
        elif c == -1:
            parts.append("-" + body)
        else:
            parts.append(f"{c}*{body}")
    return " + ".join(parts).replace("+ -", "- ")


def multiply(e1: RingElement, e2: RingElement) -> RingElement:
    """Product in the free commutative polynomial ring (no reduction)."""
    if e1.presentation is not e2.presentation:
        raise ValueError("elements belong to different presentations")
    out: dict[Monomial, int] = {}
    for m1, c1 in e1.terms.items():
        for m2, c2 in e2.terms.items():
            mono = tuple(x + y for x, y in zip(m1, m2))
            out[mono] = out.get(mono, 0) + c1 * c2
    return e1.presentation.element(out, e1.degree + e2.degree)


class Structure(NamedTuple):
    free_rank: int
    torsion: tuple[int, ...]

    def describe(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for t in self.torsion:
            parts.append(f"Z/{t}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GradedPiece:
    """One degree of the quotient ring.

    For integer presentations ``structure`` is a :class:`Structure`; for mod 2
    presentations it is the F2 dimension.
    """

    degree: int
    coefficient_mode: str
    basis_monomials: tuple[Monomial, ...]
    structure: Structure | int
    _index: dict = field(repr=False, compare=False)
    _quotient: QuotientStructure | None = field(default=None, repr=False, compare=False)
    _pivots: tuple[tuple[int, int], ...] = field(default=(), repr=False, compare=False)

    @property
    def rank(self) -> int:
        """Number of basis monomials (rank of the free module before relations)."""
        return len(self.basis_monomials)

    @property
    def f2_dimension(self) -> int:
        """Dimension of this piece tensored with F2."""
        if self.coefficient_mode == MOD2:
            return self.structure
        return self.structure.free_rank + sum(1 for t in self.structure.torsion if t % 2 == 0)

    def is_trivial(self) -> bool:
        if self.coefficient_mode == MOD2:
            return self.structure == 0
        return self.structure.free_rank == 0 and not self.structure.torsion

    def vector(self, e: RingElement) -> list[int]:
        vec = [0] * self.rank
        for mono, c in e.terms.items():
            vec[self._index[mono]] += c
        return vec

    def _f2_reduce(self, bits: int) -> int:
        for c, row in self._pivots:
            if (bits >> c) & 1:
                bits ^= row
        return bits

    def project(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates; all zero iff ``vec`` lies in the ideal."""
        if self.coefficient_mode == MOD2:
            bits = sum(1 << j for j, x in enumerate(vec) if x % 2)
            bits = self._f2_reduce(bits)
            pivset = {c for c, _ in self._pivots}
            return tuple((bits >> j) & 1 for j in range(self.rank) if j not in pivset)
        return self._quotient.project(vec)

    def representative(self, vec: Sequence[int]) -> list[int]:
        if self.coefficient_mode == MOD2:
            bits = sum(1 << j for j, x in enumerate(vec) if x % 2)
            bits = self._f2_reduce(bits)
            return [(bits >> j) & 1 for j in range(self.rank)]
        return self._quotient.representative(vec)

    def to_json_dict(self, names: Sequence[str] | None = None) -> dict:
        if self.coefficient_mode == MOD2:
            struct = {"f2_dimension": self.structure}
        else:
            struct = {"free_rank": self.structure.free_rank, "torsion": list(self.structure.torsion)}
        basis = [list(m) for m in self.basis_monomials]
        if names is not None:
            basis = [_mono_str(m, names) for m in self.basis_monomials]
        return {"degree": self.degree, "basis": basis, "structure": struct}


def _mono_str(mono: Monomial, names: Sequence[str]) -> str:
    s = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, mono) if k)
    return s or "1"


def relation_rows(p: Presentation, d: int) -> list[dict[Monomial, int]]:
    """Every product ``monomial * relation`` of degree ``d``."""
    rows = []
    for rel in p.relations:
        rd = p.monomial_degree(next(iter(rel)))
        if rd > d:
            continue
        for mu in p.monomials(d - rd):
            rows.append({tuple(x + y for x, y in zip(mu, m)): c for m, c in rel.items()})
    return rows


def build_piece(p: Presentation, d: int) -> GradedPiece:
    """Materialise the degree-``d`` piece of the quotient ring."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    basis = p.monomials(d)
    index = {m: i for i, m in enumerate(basis)}
    rows = relation_rows(p, d)
    if p.coefficient_mode == MOD2:
        packed = (sum(1 << index[m] for m, c in row.items() if c % 2) for row in rows)
        piv = _f2_eliminate(packed)
        return GradedPiece(
            degree=d,
            coefficient_mode=MOD2,
            basis_monomials=basis,
            structure=len(basis) - len(piv),
            _index=index,
            _pivots=tuple(sorted(piv.items())),
        )
    q = quotient_structure([{index[m]: c for m, c in row.items()} for row in rows], len(basis))
    return GradedPiece(
        degree=d,
        coefficient_mode=INTEGER,
        basis_monomials=basis,
        structure=Structure(q.free_rank, q.torsion),
        _index=index,
        _quotient=q,
    )


def reduce(e: RingElement, build: bool = True) -> tuple[int, ...]:
    """Canonical coordinates of ``e`` in its degree piece."""
    piece = e.presentation.piece(e.degree, build=build)
    return piece.project(piece.vector(e))


def normal_form(e: RingElement) -> RingElement:
    """Canonical representative of the class of ``e``."""
    piece = e.presentation.piece(e.degree)
    rep = piece.representative(piece.vector(e))
    return e.presentation.element(
        {m: c for m, c in zip(piece.basis_monomials, rep) if c}, e.degree
    )


def is_zero(e: RingElement) -> bool:
    if not e.terms:
        return True
    return not any(reduce(e))


def equal_elements(e1: RingElement, e2: RingElement) -> bool:
    if e1.presentation is not e2.presentation:
        raise ValueError("elements belong to different presentations")
    if e1.terms and e2.terms and e1.degree != e2.degree:
        raise ValueError(f"degree mismatch: {e1.degree} vs {e2.degree}")
    return is_zero(e1 - e2)


EXACT = "exact"
BOUND_REACHED = "bound_reached"


class HeightResult(NamedTuple):
    height: int
    status: str

    @property
    def nilindex(self) -> int:
        return self.height + 1


def height(x: RingElement, degree_bound: int | None = None) -> HeightResult:
    """Largest ``k`` with ``x**k`` nonzero in the quotient.

    Powers are taken up to ``degree_bound`` (defaulting to the presentation's
    bound). If every power within the bound survives the status is
    ``bound_reached`` and ``height`` is the last surviving exponent.
    """
    if x.degree < 1:
        raise ValueError("height is only defined here for positive-degree elements")
    p = x.presentation
    if degree_bound is None:
        degree_bound = p.degree_bound
    if degree_bound is None:
        raise ValueError("no degree bound given and the presentation carries none")
    power = p.one()
    k = 0
    while (k + 1) * x.degree <= degree_bound:
        power = normal_form(multiply(power, x))
        if not power.terms:
            return HeightResult(k, EXACT)
        k += 1
    return HeightResult(k, BOUND_REACHED)
