"""Cohomology rings of Grassmannians and of unordered pairs in projective space.

Three families are built here:

* ``H*(G_{r,2}; F2)`` on generators ``v`` (degree 1) and ``w`` (degree 2);
* ``H*(B(RP^{r-1}, 2); F2)``, the same with an extra degree-1 class ``u``;
* the integral ring ``H*(B(RP^m, 2); Z)`` on ``a2, b2, c3, d4`` and one top
  class ``e`` (degree ``2m-1`` for even ``m``, degree ``m`` for odd ``m``).

Index ranges "i, j >= 0 with i + 2j = n" are expanded literally; empty sums
give the zero relation and are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .graded_ring import (
    INTEGER,
    MOD2,
    GeneratorSpec,
    HeightResult,
    Presentation,
    RingElement,
    height,
    is_zero,
)


def binom_exact(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    return comb(n, k)


def binom_mod2(n: int, k: int) -> int:
    """``binom(n, k) mod 2`` by Lucas: odd iff ``k`` and ``n - k`` share no bits."""
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    if k > n:
        return 0
    return int((k & (n - k)) == 0)


def _pairs(total: int):
    """``(i, j)`` with ``i, j >= 0`` and ``i + 2j == total``."""
    if total < 0:
        return
    for j in range(total // 2 + 1):
        yield total - 2 * j, j


# -- mod 2 rings ---------------------------------------------------------

def _grassmann_relations(r: int, v: int, w: int, ngens: int) -> list[dict]:
    """The two binomial sums in ``v, w`` cutting out ``H*(G_{r,2})``."""
    rels = []
    for top in (r - 1, r):
        rel: dict[tuple, int] = {}
        for i in range(top // 2 + 1):
            c = binom_exact(top - i, i)
            mono = [0] * ngens
            mono[v] = top - 2 * i
            mono[w] = i
            rel[tuple(mono)] = c
        rels.append(rel)
    return rels


@dataclass(frozen=True)
class Mod2GrassmannRing:
    r: int
    presentation: Presentation


@dataclass(frozen=True)
class Mod2ConfigRing:
    r: int
    presentation: Presentation


def build_grassmann_mod2(r: int) -> Mod2GrassmannRing:
    if r < 2:
        raise ValueError("r must be at least 2")
    gens = [GeneratorSpec("v", 1), GeneratorSpec("w", 2)]
    p = Presentation(
        gens,
        _grassmann_relations(r, 0, 1, 2),
        coefficient_mode=MOD2,
        name=f"H*(G_{r},2; F2)",
        degree_bound=2 * (r - 1),
        sq1={"v": {(2, 0): 1}, "w": {(1, 1): 1}},
    )
    return Mod2GrassmannRing(r, p)


def build_unordered_config_mod2(r: int) -> Mod2ConfigRing:
    """``H*(B(RP^{r-1}, 2); F2)`` with the extra relation ``uv + u^2``."""
    if r < 2:
        raise ValueError("r must be at least 2")
    gens = [GeneratorSpec("u", 1), GeneratorSpec("v", 1), GeneratorSpec("w", 2)]
    rels = _grassmann_relations(r, 1, 2, 3)
    rels.append({(1, 1, 0): 1, (2, 0, 0): 1})
    p = Presentation(
        gens,
        rels,
        coefficient_mode=MOD2,
        name=f"H*(B(RP^{r - 1},2); F2)",
        degree_bound=2 * (r - 1),
        # u has degree 1, so Sq^1 u = u^2
        sq1={"u": {(2, 0, 0): 1}, "v": {(0, 2, 0): 1}, "w": {(0, 1, 1): 1}},
    )
    return Mod2ConfigRing(r, p)


def sq1(e: RingElement) -> RingElement:
    """First Steenrod square, extended from generators as a derivation."""
    p = e.presentation
    if p.coefficient_mode != MOD2 or p.sq1_images is None:
        raise ValueError("Sq^1 is only available on mod 2 presentations with declared generator images")
    images = [p.element(p.sq1_images[g.name], g.degree + 1) for g in p.generators]
    out: dict[tuple, int] = {}
    for mono, c in e.terms.items():
        for idx, k in enumerate(mono):
            if not k or not (k * c) % 2:
                continue
            # d(x^k) = k x^(k-1) dx
            rest = list(mono)
            rest[idx] -= 1
            for m2, c2 in images[idx].terms.items():
                key = tuple(x + y for x, y in zip(rest, m2))
                out[key] = out.get(key, 0) + k * c * c2
    return p.element(out, e.degree + 1)


def verify_sq1_ideal_invariance(r: int) -> bool:
    """``Sq^1`` maps each ideal generator into the ideal, for both mod 2 families."""
    for ring in (build_grassmann_mod2(r), build_unordered_config_mod2(r)):
        for rel in ring.presentation.relation_elements():
            if not is_zero(sq1(rel)):
                return False
    return True


# -- integral rings -------------------------------------------------------

GENS = ("a", "b", "c", "d", "e")


@dataclass(frozen=True)
class IntegralConfigRing:
    m: int
    t: int
    kappa: int | None
    l: int | None
    presentation: Presentation

    @property
    def parity(self) -> str:
        return "even" if self.m % 2 == 0 else "odd"


def _mono(a=0, b=0, c=0, d=0, e=0) -> tuple:
    return (a, b, c, d, e)


def _add(rel: dict, mono: tuple, coeff: int):
    if coeff:
        rel[mono] = rel.get(mono, 0) + coeff


def _sum_b(n: int, extra_d: int = 0) -> dict:
    """``sum binom(i+j, j) a^i b d^(j+extra_d)`` over ``i + 2j = n``."""
    rel: dict = {}
    for i, j in _pairs(n):
        _add(rel, _mono(a=i, b=1, d=j + extra_d), binom_exact(i + j, j))
    return rel


def _sum_a(n: int) -> dict:
    """``sum binom(i+j, j) a^(i+1) d^j`` over ``i + 2j = n``."""
    rel: dict = {}
    for i, j in _pairs(n):
        _add(rel, _mono(a=i + 1, d=j), binom_exact(i + j, j))
    return rel


def _sum_c(n: int) -> dict:
    """``sum binom(i+j, j) a^i c d^j`` over ``i + 2j = n``."""
    rel: dict = {}
    for i, j in _pairs(n):
        _add(rel, _mono(a=i, c=1, d=j), binom_exact(i + j, j))
    return rel


def _common_relations() -> list[dict]:
    return [
        {_mono(a=1): 2},
        {_mono(b=1): 2},
        {_mono(c=1): 2},
        {_mono(d=1): 4},
        {_mono(b=2): 1, _mono(a=1, b=1): -1},
        {_mono(c=2): 1, _mono(a=1, d=1): -1},
    ]


def _even_relations(t: int) -> list[dict]:
    rels = _common_relations()
    rels.append(_sum_c(t - 1))
    r5 = _sum_b(t)
    if t % 2 == 1:
        _add(r5, _mono(d=(t + 1) // 2), -2)
    rels.append(r5)
    rels.append(_sum_a(t))
    rels.append(_sum_c(t))
    r8 = _sum_b(t - 1, extra_d=1)
    if t % 2 == 0:
        _add(r8, _mono(d=(t + 2) // 2), -2)
    rels.append(r8)
    rels.append({_mono(d=t): 1})
    for k in range(5):
        mono = [0] * 5
        mono[k] += 1
        mono[4] += 1
        rels.append({tuple(mono): 1})
    return rels


def _odd_relations(t: int, include_ce: bool = True) -> list[dict]:
    kappa, l = t % 2, t // 2
    rels = _common_relations()
    r4 = _sum_b(t)
    if t % 2 == 1:
        _add(r4, _mono(d=(t + 1) // 2), -2)
    rels.append(r4)
    rels.append(_sum_a(t))
    rels.append(_sum_c(t))
    r7 = _sum_b(t + 1)
    if t % 2 == 0:
        _add(r7, _mono(d=(t + 2) // 2), -2)
    rels.append(r7)
    rels.append(_sum_a(t + 1))
    rels.append(_sum_c(t + 1))
    rels.append({_mono(d=t + 1): 1})
    # products with e
    rels.append({_mono(e=2): 1})
    for mu in ("a", "b"):
        rel = {_mono(**{mu: 1, "e": 1}): 1}
        _add(rel, _mono(b=kappa, c=1, d=l), -kappa)
        rels.append(rel)
    if include_ce:
        rel = {_mono(c=1, e=1): 1}
        if kappa == 1:
            _add(rel, _mono(b=1, d=l + 1), -1)
        else:
            _add(rel, _mono(d=l + 1), -2)
        rels.append(rel)
    rel = {_mono(d=1, e=1): 1}
    for i in range(1, l + 1):
        _add(rel, _mono(a=t - 2 * i, b=1, c=1, d=i), -binom_exact(t - i, i - 1))
    rels.append(rel)
    return rels


def build_integral(m: int, include_ce: bool = True) -> IntegralConfigRing:
    """Integral cohomology ring of ``B(RP^m, 2)``.

    ``include_ce=False`` drops the relation for ``c*e`` in the odd case; it is
    the one relation whose form for ``m = 5`` is not settled, so callers can
    check that conclusions survive without it.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    notes = []
    if m % 2 == 0:
        t = m // 2
        kappa = l = None
        rels = _even_relations(t)
        e_deg = 2 * m - 1
        notes.append("e is of infinite order unless a relation forces otherwise")
    else:
        t = (m - 1) // 2
        kappa, l = t % 2, t // 2
        rels = _odd_relations(t, include_ce=include_ce)
        e_deg = m
        if m == 5:
            notes.append(
                "relation c*e = 2*d^2 is unresolved for m=5"
                if include_ce else "relation for c*e omitted"
            )
    gens = [GeneratorSpec(n, g) for n, g in zip(GENS, (2, 2, 3, 4, e_deg))]
    p = Presentation(
        gens,
        rels,
        coefficient_mode=INTEGER,
        name=f"H*(B(RP^{m},2); Z)" + ("" if include_ce else " without ce"),
        degree_bound=2 * m,
        notes=notes,
    )
    return IntegralConfigRing(m, t, kappa, l, p)


def height_of_b(m: int, degree_bound: int | None = None, include_ce: bool = True) -> HeightResult:
    """Height of ``b`` in the integral ring; ``.nilindex`` is the least ``k`` with ``b^k = 0``."""
    ring = build_integral(m, include_ce=include_ce)
    return height(ring.presentation.gen("b"), degree_bound)


def height_of_v(r: int, degree_bound: int | None = None) -> HeightResult:
    ring = build_unordered_config_mod2(r)
    return height(ring.presentation.gen("v"), degree_bound)


def nilpotency_identities(m: int) -> list[tuple[str, bool]]:
    """The power identities behind the height of ``b``, checked in the ring.

    For ``m = 2^e + 1`` (``e >= 2``, so ``t = 2^(e-1)`` is even):
    ``a^(t-1) b d = 2 d^((t+2)/2)``, ``a^t b d = 0``,
    ``b^(2t) = a^(2t-1) b = 2 d^t != 0`` and ``b^(2t+1) = 0``.
    For ``m = 2^(e+1) - 1`` (``t = 2^e - 1``):
    ``b^(t+1) = 2 d^((t+1)/2)`` and ``b^(t+2) = 0``.
    Other ``m`` return an empty list.
    """
    from .graded_ring import equal_elements

    ring = build_integral(m)
    p, t = ring.presentation, ring.t
    a, b, c, d, e = p.gens()
    out = []
    if m % 2 and t >= 2 and t & (t - 1) == 0:
        out += [
            (f"a^{t - 1}*b*d == 2*d^{(t + 2) // 2}", equal_elements(a ** (t - 1) * b * d, 2 * d ** ((t + 2) // 2))),
            (f"a^{t}*b*d == 0", is_zero(a ** t * b * d)),
            (f"b^{2 * t} == a^{2 * t - 1}*b", equal_elements(b ** (2 * t), a ** (2 * t - 1) * b)),
            (f"b^{2 * t} == 2*d^{t}", equal_elements(b ** (2 * t), 2 * d ** t)),
            (f"2*d^{t} != 0", not is_zero(2 * d ** t)),
            (f"b^{2 * t + 1} == 0", is_zero(b ** (2 * t + 1))),
        ]
    if m % 2 and (t + 1) & t == 0:
        out += [
            (f"b^{t + 1} == 2*d^{(t + 1) // 2}", equal_elements(b ** (t + 1), 2 * d ** ((t + 1) // 2))),
            (f"b^{t + 1} == a^{t}*b", equal_elements(b ** (t + 1), a ** t * b)),
            (f"b^{t + 2} == 0", is_zero(b ** (t + 2))),
        ]
    return out
