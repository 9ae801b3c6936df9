"""Symmetric bilinear maps, the Hopf map they induce, and derived embeddings.

A :class:`BilinearMap` is a coefficient tensor ``a[k][i][j]`` of exact
rationals; ``mu(x, y)[k] = sum_ij a[k][i][j] x_i y_j``. Exact zero tests run
on integer-scaled inputs: ``mu`` is bilinear, so clearing denominators does
not change whether ``mu(x, y)`` vanishes.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

Vector = Sequence[Fraction]


class DiagonalSingularityError(ValueError):
    """``mu(x, x) = 0`` for a nonzero ``x``; the Hopf map is undefined there."""


class EmbeddingFailure(ValueError):
    """Two distinct points have the same image."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass(frozen=True)
class BilinearMap:
    r: int
    n: int
    coeffs: tuple  # coeffs[k][i][j], Fractions
    construction: str = "custom"
    _sparse: tuple = field(default=(), repr=False, compare=False)
    _scale: int = field(default=1, repr=False, compare=False)
    _dense: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.coeffs) != self.n or any(
            len(ck) != self.r or any(len(row) != self.r for row in ck) for ck in self.coeffs
        ):
            raise ValueError("coefficient tensor has the wrong shape")
        dens = [Fraction(x).denominator for ck in self.coeffs for row in ck for x in row]
        scale = math.lcm(*dens) if dens else 1
        sparse = tuple(
            (k, i, j, int(Fraction(x) * scale))
            for k, ck in enumerate(self.coeffs)
            for i, row in enumerate(ck)
            for j, x in enumerate(row)
            if x
        )
        object.__setattr__(self, "_sparse", sparse)
        object.__setattr__(self, "_scale", scale)
        dense = np.array(
            [[[float(x) for x in row] for row in ck] for ck in self.coeffs], dtype=float
        ).reshape(self.n, self.r, self.r)
        object.__setattr__(self, "_dense", dense)

    @classmethod
    def from_entries(cls, r: int, n: int, entries, construction: str = "custom") -> "BilinearMap":
        """Build from ``{(k, i, j): value}``; missing entries are zero."""
        t = [[[Fraction(0)] * r for _ in range(r)] for _ in range(n)]
        for (k, i, j), x in dict(entries).items():
            t[k][i][j] = Fraction(x)
        return cls(r, n, tuple(tuple(tuple(row) for row in ck) for ck in t), construction)

    def __call__(self, x: Vector, y: Vector) -> list[Fraction]:
        out = [Fraction(0)] * self.n
        for k, i, j, c in self._sparse:
            if x[i] and y[j]:
                out[k] += c * Fraction(x[i]) * Fraction(y[j])
        return [v / self._scale for v in out]

    def integer_image(self, x: Sequence[int], y: Sequence[int]) -> list[int]:
        """``scale * mu(x, y)`` for integer vectors; exact and fast."""
        out = [0] * self.n
        for k, i, j, c in self._sparse:
            xi, yj = x[i], y[j]
            if xi and yj:
                out[k] += c * xi * yj
        return out

    def is_symmetric(self) -> bool:
        return all(
            ck[i][j] == ck[j][i]
            for ck in self.coeffs
            for i in range(self.r)
            for j in range(i + 1, self.r)
        )

    def to_json_dict(self) -> dict:
        return {
            "construction": self.construction,
            "r": self.r,
            "n": self.n,
            "entries": [[k, i, j, str(self.coeffs[k][i][j])] for k, i, j, _ in self._sparse],
        }


def real_poly_mult(r: int) -> BilinearMap:
    """Coefficients of ``x(T) y(T)`` for real polynomials of degree ``< r``."""
    if r < 1:
        raise ValueError("r must be at least 1")
    entries = {(i + j, i, j): 1 for i in range(r) for j in range(r)}
    return BilinearMap.from_entries(r, 2 * r - 1, entries, "real")


def complex_poly_mult(r: int) -> BilinearMap:
    """Product of complex polynomials of degree ``< r/2``, written out in real coordinates.

    ``(x_0, ..., x_{r-1})`` is read as ``sum_j (x_{2j} + i x_{2j+1}) T^j``.
    """
    if r < 2 or r % 2:
        raise ValueError("r must be even and at least 2")
    h = r // 2
    entries: dict[tuple[int, int, int], int] = {}

    def put(key, val):
        entries[key] = entries.get(key, 0) + val

    for p in range(h):
        for q in range(h):
            s = p + q
            # (x + iy)(u + iv) = (xu - yv) + i(xv + yu)
            put((2 * s, 2 * p, 2 * q), 1)
            put((2 * s, 2 * p + 1, 2 * q + 1), -1)
            put((2 * s + 1, 2 * p, 2 * q + 1), 1)
            put((2 * s + 1, 2 * p + 1, 2 * q), 1)
    return BilinearMap.from_entries(r, 2 * r - 2, entries, "complex")


def _random_rational(rng: random.Random, bound: int = 20) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_rational_vector(rng: random.Random, r: int, nonzero: bool = True) -> list[Fraction]:
    while True:
        v = [_random_rational(rng) for _ in range(r)]
        if not nonzero or any(v):
            return v


def _clear_denominators(v: Sequence[Fraction]) -> list[int]:
    s = math.lcm(*(Fraction(x).denominator for x in v))
    return [int(Fraction(x) * s) for x in v]


def check_symmetric_bilinear(mu: BilinearMap, trials: int = 50, seed: int = 0) -> bool:
    """Exact tensor symmetry plus randomized bilinearity identities."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if not mu.is_symmetric():
        return False
    rng = random.Random(seed)
    for _ in range(trials):
        x, x2, y = (random_rational_vector(rng, mu.r, nonzero=False) for _ in range(3))
        alpha = _random_rational(rng)
        ax = [alpha * a + b for a, b in zip(x, x2)]
        lhs = mu(ax, y)
        rhs = [alpha * p + q for p, q in zip(mu(x, y), mu(x2, y))]
        if lhs != rhs:
            return False
        lhs = mu(y, ax)
        rhs = [alpha * p + q for p, q in zip(mu(y, x), mu(y, x2))]
        if lhs != rhs or mu(x, y) != mu(y, x):
            return False
    return True


def _grid_vectors(r: int):
    """Nonzero vectors with entries in {-1, 0, 1}, fewest nonzeros first."""
    for support in range(1, r + 1):
        for idx in itertools.combinations(range(r), support):
            for signs in itertools.product((1, -1), repeat=support):
                v = [0] * r
                for i, s in zip(idx, signs):
                    v[i] = s
                yield v


@dataclass(frozen=True)
class NonsingularityResult:
    result: str  # "no_zero_found" or "witness"
    samples: int
    seed: int
    witness: tuple | None = None

    @property
    def found(self) -> bool:
        return self.witness is not None


def nonsingularity_search(mu: BilinearMap, samples: int = 10_000, seed: int = 0) -> NonsingularityResult:
    """Look for ``x, y != 0`` with ``mu(x, y) = 0``.

    Low-height grid pairs come first (diagonal pairs ``(x, x)`` before the
    rest), then random exact-rational pairs.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    grid_budget = max(1, samples // 10)
    grid = list(itertools.islice(_grid_vectors(mu.r), math.isqrt(grid_budget) + 1))
    diagonal = ((x, x) for x in grid)
    off_diagonal = ((x, y) for x, y in itertools.product(grid, grid) if x is not y)
    n_grid = 0
    for x, y in itertools.islice(itertools.chain(diagonal, off_diagonal), min(grid_budget, samples)):
        n_grid += 1
        if not any(mu.integer_image(x, y)):
            return NonsingularityResult("witness", n_grid, seed, (tuple(x), tuple(y)))
    rng = random.Random(seed)
    for done in range(n_grid, samples):
        x = random_rational_vector(rng, mu.r)
        y = random_rational_vector(rng, mu.r)
        if not any(mu.integer_image(_clear_denominators(x), _clear_denominators(y))):
            return NonsingularityResult("witness", done + 1, seed, (tuple(x), tuple(y)))
    return NonsingularityResult("no_zero_found", samples, seed)


# -- projective points and the Hopf map --------------------------------------

@dataclass(frozen=True)
class ProjectivePoint:
    """A line in ``R^r``, stored with first nonzero coordinate equal to 1."""

    representative: tuple[Fraction, ...]

    def __init__(self, vector: Sequence):
        v = [Fraction(x) for x in vector]
        lead = next((x for x in v if x), None)
        if lead is None:
            raise ValueError("the zero vector does not define a projective point")
        object.__setattr__(self, "representative", tuple(x / lead for x in v))

    def __len__(self):
        return len(self.representative)


def hopf_direction(mu: BilinearMap, p: ProjectivePoint) -> tuple[Fraction, ...]:
    """``mu(x, x)`` scaled exactly so that its largest absolute entry is 1.

    This is the exact positive direction of the Hopf image.
    """
    q = mu(p.representative, p.representative)
    top = max(abs(c) for c in q)
    if top == 0:
        raise DiagonalSingularityError(f"mu(x, x) = 0 at {p.representative}")
    return tuple(c / top for c in q)


def hopf_embedding(mu: BilinearMap, p: ProjectivePoint | Sequence) -> np.ndarray:
    """``mu(x, x) / |mu(x, x)|`` as a float unit vector."""
    if not isinstance(p, ProjectivePoint):
        p = ProjectivePoint(p)
    q = np.array([float(c) for c in hopf_direction(mu, p)])
    return q / np.linalg.norm(q)


def hopf_embedding_float(mu: BilinearMap, x: Sequence[float]) -> np.ndarray:
    """Hopf map evaluated in floating point on any representative."""
    x = np.asarray(x, dtype=float)
    q = np.einsum("kij,i,j->k", mu._dense, x, x)
    nrm = np.linalg.norm(q)
    if nrm == 0:
        raise DiagonalSingularityError(f"mu(x, x) = 0 at {x}")
    return q / nrm


def missed_pole(mu: BilinearMap, samples: int = 2000, seed: int = 0) -> tuple[int, int]:
    """A point ``sign * e_j`` of the sphere that the Hopf image avoids.

    For the real product ``-e_0`` is never hit, since the constant
    coefficient of ``x(T)^2`` is ``x_0^2 >= 0``. For the complex product
    ``-e_2`` (real part of the ``T`` coefficient) is never hit: a square
    whose ``1`` and ``T^2`` parts vanish has ``z_0 = z_1 = 0``.
    Other maps fall back to a sampled search over ``+-e_j``, which is
    heuristic only.
    """
    if mu.construction == "real":
        return (0, -1)
    if mu.construction == "complex":
        if mu.r < 4:
            raise ValueError("the complex Hopf map is onto S^1 for r = 2; no pole is missed")
        return (2, -1)
    rng = random.Random(seed)
    best = None
    for j in range(mu.n):
        for sign in (-1, 1):
            closest = min(
                float(np.linalg.norm(
                    hopf_embedding(mu, ProjectivePoint(random_rational_vector(rng, mu.r)))
                    - sign * np.eye(mu.n)[j]
                ))
                for _ in range(max(1, samples // (2 * mu.n)))
            )
            if best is None or closest > best[0]:
                best = (closest, j, sign)
    if best[0] <= 0:
        raise ValueError("no coordinate pole is missed by the sampled image")
    return best[1], best[2]


def stereographic_reduce(mu: BilinearMap, pole: tuple[int, int] | None = None) -> Callable:
    """Compose the Hopf map with stereographic projection from a missed pole.

    Returns ``g`` sending a projective point (or any nonzero vector) to
    ``R^{n-1}``. Projection from ``sign * e_j`` is
    ``q -> (q without coordinate j) / (1 - sign * q_j)``; for the pole
    ``-e_0`` this is ``(q_1, ..., q_{n-1}) / (1 + q_0)``.
    """
    j, sign = missed_pole(mu) if pole is None else pole

    def g(p) -> np.ndarray:
        if isinstance(p, ProjectivePoint):
            q = hopf_embedding(mu, p)
        else:
            q = hopf_embedding_float(mu, p)
        denom = 1.0 - sign * q[j]
        if denom <= 0:
            raise EmbeddingFailure(f"image hits the projection pole at {p}")
        return np.delete(q, j) / denom

    g.pole = (j, sign)
    g.target_dimension = mu.n - 1
    return g


def embedding_to_antisymmetric(g: Callable) -> Callable:
    """``f(x, y) = (g(x) - g(y)) / |g(x) - g(y)|``, so ``f(y, x) = -f(x, y)``."""

    def f(x, y) -> np.ndarray:
        diff = np.asarray(g(x), dtype=float) - np.asarray(g(y), dtype=float)
        nrm = np.linalg.norm(diff)
        if nrm == 0:
            raise EmbeddingFailure("distinct points share an image", witness=(x, y))
        return diff / nrm

    return f


@dataclass(frozen=True)
class EmbeddingReport:
    construction: str
    r: int
    n: int
    target_dimension: int
    pole: tuple[int, int]
    sample_count: int
    seed: int
    min_image_separation: float
    mean_image_separation: float
    representative_residual: float
    antisymmetry_residual: float
    witnesses: tuple = ()

    @property
    def ok(self) -> bool:
        return self.min_image_separation > 0 and not self.witnesses

    def to_json_dict(self) -> dict:
        return {
            "construction": self.construction,
            "r": self.r,
            "n": self.n,
            "target_dimension": self.target_dimension,
            "pole": list(self.pole),
            "samples": self.sample_count,
            "seed": self.seed,
            "result": "ok" if self.ok else "embedding_failure",
            "witnesses": [[[str(c) for c in x], [str(c) for c in y]] for x, y in self.witnesses],
            "separation_stats": {
                "min": self.min_image_separation,
                "mean": self.mean_image_separation,
            },
            "representative_residual": self.representative_residual,
            "antisymmetry_residual": self.antisymmetry_residual,
        }


def sample_embedding(mu: BilinearMap, samples: int = 10_000, seed: int = 0) -> EmbeddingReport:
    """Sample the stereographic Hopf embedding and its antisymmetric map.

    Records the worst representative-independence residual, the worst
    ``|f(x,y) + f(y,x)|`` and the separation of images over distinct pairs.
    """
    rng = random.Random(seed)
    g = stereographic_reduce(mu)
    images: dict = {}

    def g_cached(p):
        if p not in images:
            images[p] = g(p)
        return images[p]

    f = embedding_to_antisymmetric(g_cached)
    rep_res = anti_res = 0.0
    seps = []
    witnesses = []
    for _ in range(samples):
        x = ProjectivePoint(random_rational_vector(rng, mu.r))
        y = ProjectivePoint(random_rational_vector(rng, mu.r))
        if x == y:
            continue
        lam = _random_rational(rng)
        while lam == 0:
            lam = _random_rational(rng)
        raw = [lam * c for c in x.representative]
        rep_res = max(rep_res, float(np.max(np.abs(
            hopf_embedding_float(mu, [float(c) for c in raw]) - hopf_embedding(mu, x)
        ))))
        gx, gy = g_cached(x), g_cached(y)
        sep = float(np.linalg.norm(gx - gy))
        seps.append(sep)
        if sep == 0:
            witnesses.append((x.representative, y.representative))
            continue
        anti_res = max(anti_res, float(np.linalg.norm(f(x, y) + f(y, x))))
    return EmbeddingReport(
        construction=mu.construction,
        r=mu.r,
        n=mu.n,
        target_dimension=mu.n - 1,
        pole=g.pole,
        sample_count=len(seps),
        seed=seed,
        min_image_separation=min(seps) if seps else 0.0,
        mean_image_separation=sum(seps) / len(seps) if seps else 0.0,
        representative_residual=rep_res,
        antisymmetry_residual=anti_res,
        witnesses=tuple(witnesses),
    )
