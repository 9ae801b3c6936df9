"""Exact linear algebra over the integers and over the two-element field.

Integer matrices use Python ints throughout, so entries never overflow.
Rows of :class:`F2Matrix` are packed into single Python ints (bit ``j`` is
column ``j``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a = self.to_rows()
        bt = list(zip(*other.to_rows())) if other.rows else [() for _ in range(other.cols)]
        return IntMatrix.from_rows(
            [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a],
            other.cols,
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class SnfResult:
    """Smith form ``u @ a @ v == diag(d)`` with unimodular ``u`` and ``v``."""

    d: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix

    def diagonal_matrix(self) -> IntMatrix:
        rows, cols = self.u.rows, self.v.cols
        out = [[0] * cols for _ in range(rows)]
        for i, x in enumerate(self.d):
            out[i][i] = x
        return IntMatrix.from_rows(out, cols)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _snf_core(m: list[list[int]], ncols: int, track_u: bool, track_v: bool):
    """Diagonalise ``m`` in place.

    Returns ``(d, u, v, vinv)``; transforms are ``None`` when not tracked.
    ``vinv`` is the inverse of ``v``, maintained alongside it.
    """
    nrows = len(m)
    u = [[int(i == j) for j in range(nrows)] for i in range(nrows)] if track_u else None
    v = [[int(i == j) for j in range(ncols)] for i in range(ncols)] if track_v else None
    vinv = [[int(i == j) for j in range(ncols)] for i in range(ncols)] if track_v else None

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        if v is not None:
            for row in v:
                row[i], row[j] = row[j], row[i]
            vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        rs, rd = m[src], m[dst]
        for k in range(ncols):
            if rs[k]:
                rd[k] += q * rs[k]
        if u is not None:
            us, ud = u[src], u[dst]
            for k in range(nrows):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst, src, q):
        # col[dst] += q * col[src]; inverse: row[src] of vinv -= q * row[dst]
        for row in m:
            if row[src]:
                row[dst] += q * row[src]
        if v is not None:
            for row in v:
                if row[src]:
                    row[dst] += q * row[src]
            vd, vs = vinv[dst], vinv[src]
            for k in range(ncols):
                if vd[k]:
                    vs[k] -= q * vd[k]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        if u is not None:
            u[i] = [-x for x in u[i]]

    d = []
    size = min(nrows, ncols)
    for t in range(size):
        while True:
            # minimal nonzero |entry| in the trailing block
            best = None
            for i in range(t, nrows):
                row = m[i]
                for j in range(t, ncols):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                d.extend([0] * (size - t))
                return d, u, v, vinv
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = m[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // p))
                    if m[i][t]:
                        dirty = True
            for j in range(t + 1, ncols):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // p))
                    if m[t][j]:
                        dirty = True
            if dirty:
                continue
            # divisibility of the trailing block by the pivot
            bad = None
            for i in range(t + 1, nrows):
                row = m[i]
                for j in range(t + 1, ncols):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if m[t][t] < 0:
            negate_row(t)
        d.append(m[t][t])
    return d, u, v, vinv


def smith_normal_form(a: IntMatrix) -> SnfResult:
    """Smith normal form with both unimodular transforms.

    Pivots on the entry of least absolute value to keep entries small.
    """
    m = a.to_rows()
    d, u, v, _ = _snf_core(m, a.cols, True, True)
    return SnfResult(
        tuple(d),
        IntMatrix.from_rows(u, a.rows),
        IntMatrix.from_rows(v, a.cols),
    )


def _echelon_lattice(rows: Iterable[dict[int, int]]) -> list[dict[int, int]]:
    """Echelon basis of the Z-row-lattice spanned by sparse rows.

    Uses only unimodular row combinations, so the lattice is unchanged.
    """
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        row = {k: x for k, x in row.items() if x}
        while row:
            c = min(row)
            p = pivots.get(c)
            if p is None:
                if row[c] < 0:
                    row = {k: -x for k, x in row.items()}
                pivots[c] = row
                break
            a, b = p[c], row[c]
            if b % a == 0:
                q = b // a
                for k, x in p.items():
                    y = row.get(k, 0) - q * x
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
                continue
            g, s, t = _xgcd(a, b)
            ag, bg = a // g, b // g
            new_p: dict[int, int] = {}
            new_r: dict[int, int] = {}
            for k in set(p) | set(row):
                x, y = p.get(k, 0), row.get(k, 0)
                np_ = s * x + t * y
                nr = ag * y - bg * x
                if np_:
                    new_p[k] = np_
                if nr:
                    new_r[k] = nr
            pivots[c] = new_p
            row = new_r
    return [pivots[c] for c in sorted(pivots)]


@dataclass(frozen=True)
class QuotientStructure:
    """The abelian group ``Z^n / rowspan(relations)`` in Smith coordinates.

    Canonical coordinates list the free part first (exact integers), then one
    residue per torsion divisor.
    """

    ambient_rank: int
    free_rank: int
    torsion: tuple[int, ...]
    _divisors: tuple[int, ...] = field(repr=False)  # full diagonal, length ambient_rank
    _v: tuple[tuple[int, ...], ...] = field(repr=False)
    _vinv: tuple[tuple[int, ...], ...] = field(repr=False)

    def _smith_coords(self, vec: Sequence[int]) -> list[int]:
        n = self.ambient_rank
        y = [0] * n
        for i, x in enumerate(vec):
            if x:
                vi = self._v[i]
                for j in range(n):
                    if vi[j]:
                        y[j] += x * vi[j]
        return y

    def project(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.ambient_rank:
            raise ValueError("vector length does not match ambient rank")
        y = self._smith_coords(vec)
        free, tors = [], []
        for dj, yj in zip(self._divisors, y):
            if dj == 0:
                free.append(yj)
            elif dj > 1:
                tors.append(yj % dj)
        return tuple(free) + tuple(tors)

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.project(vec)

    def add_coords(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        f = self.free_rank
        out = [a + b for a, b in zip(x[:f], y[:f])]
        out += [(a + b) % t for a, b, t in zip(x[f:], y[f:], self.torsion)]
        return tuple(out)

    def representative(self, vec: Sequence[int]) -> list[int]:
        """A canonical vector congruent to ``vec`` modulo the relations."""
        y = self._smith_coords(vec)
        n = self.ambient_rank
        out = [0] * n
        for j, (dj, yj) in enumerate(zip(self._divisors, y)):
            if dj:
                yj %= dj
            if yj:
                row = self._vinv[j]
                for k in range(n):
                    if row[k]:
                        out[k] += yj * row[k]
        return out


def quotient_structure(relations: IntMatrix | Sequence[dict[int, int]], ambient_rank: int) -> QuotientStructure:
    """Structure of ``Z^ambient_rank`` modulo the row span of ``relations``.

    ``relations`` is either an :class:`IntMatrix` or a sequence of sparse
    rows ``{column: coefficient}``.
    """
    if isinstance(relations, IntMatrix):
        if relations.rows and relations.cols != ambient_rank:
            raise ValueError("relations must have ambient_rank columns")
        sparse = ({j: x for j, x in enumerate(r) if x} for r in relations.to_rows())
    else:
        sparse = iter(relations)
    basis = _echelon_lattice(sparse)
    dense = [[row.get(j, 0) for j in range(ambient_rank)] for row in basis]
    d, _, v, vinv = _snf_core(dense, ambient_rank, False, True)
    divisors = list(d) + [0] * (ambient_rank - len(d))
    return QuotientStructure(
        ambient_rank=ambient_rank,
        free_rank=sum(1 for x in divisors if x == 0),
        torsion=tuple(x for x in divisors if x > 1),
        _divisors=tuple(divisors),
        _v=tuple(tuple(r) for r in v),
        _vinv=tuple(tuple(r) for r in vinv),
    )


@dataclass(frozen=True)
class F2Matrix:
    """Bit-packed matrix over F2; ``data[i]`` holds row ``i``."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count mismatch")
        mask = ~((1 << self.cols) - 1)
        if any(r & mask or r < 0 for r in self.data):
            raise ValueError("bits set beyond the column range")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "F2Matrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        packed = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            packed.append(sum(1 << j for j, x in enumerate(r) if x % 2))
        return cls(len(packed), cols, tuple(packed))

    def to_rows(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]


def _f2_eliminate(rows: Iterable[int]) -> dict[int, int]:
    """Fully reduced pivot rows keyed by pivot column (lowest set bit)."""
    piv: dict[int, int] = {}
    for r in rows:
        for c, p in piv.items():
            if (r >> c) & 1:
                r ^= p
        if not r:
            continue
        c = (r & -r).bit_length() - 1
        for k in list(piv):
            if (piv[k] >> c) & 1:
                piv[k] ^= r
        piv[c] = r
    return piv


def f2_row_reduce(a: F2Matrix) -> tuple[int, F2Matrix, list[int]]:
    """Reduced row echelon form over F2: ``(rank, rref, pivot_cols)``."""
    piv = _f2_eliminate(a.data)
    cols = sorted(piv)
    return len(cols), F2Matrix(len(cols), a.cols, tuple(piv[c] for c in cols)), cols


def f2_reduce_vector(rref: F2Matrix, pivot_cols: Sequence[int], vec: int) -> int:
    """Reduce a packed vector against an RREF; zero iff it lies in the row space."""
    for c, r in zip(pivot_cols, rref.data):
        if (vec >> c) & 1:
            vec ^= r
    return vec
