"""Bound chains for E(k), N(k) and the antisymmetric index I_as(RP^k).

* ``E(k)``: least dimension of a Euclidean space containing ``RP^k``.
* ``N(k)``: least ``n`` admitting a nonsingular symmetric bilinear map
  ``R^k x R^k -> R^n``.
* ``I_as(RP^k)``: least ``n`` with an equivariant map ``F(RP^k, 2) -> S^{n-1}``
  (swap on pairs, antipodal on the sphere). Values are the ambient ``n``,
  not the sphere dimension.

Each record says where its number comes from. ``cited`` facts are inputs
taken from the literature and are never reported as computed.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

from .bilinear import check_symmetric_bilinear, complex_poly_mult, real_poly_mult
from .graded_ring import EXACT
from .presentations import height_of_b

LOWER, UPPER, EXACT_KIND = "lower", "upper", "exact"

CITED = "cited"
CONSTRUCTIVE = "constructive"
DERIVED = "derived"
ENGINE_VERIFIED = "engine-verified"
FORMULA_ONLY = "formula-only"

# largest m whose integral ring is computed by default; m = 17 needs degree 34
ENGINE_MAX_M = 17


class ChainInconsistency(RuntimeError):
    """A lower bound exceeds an upper bound, or a squeeze does not close."""


@dataclass(frozen=True)
class BoundRecord:
    quantity: str  # "E", "N" or "I_as"
    k: int
    kind: str
    value: int
    provenance: str
    source: str
    witness: str = ""

    @property
    def label(self) -> str:
        if self.quantity == "I_as":
            return f"I_as(RP{self.k})"
        return f"{self.quantity}({self.k})"

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["label"] = self.label
        return d


def _n_upper(r: int) -> BoundRecord:
    """Smallest polynomial-product target for input dimension ``r``."""
    mu = complex_poly_mult(r) if r % 2 == 0 and r >= 2 else real_poly_mult(r)
    if not check_symmetric_bilinear(mu, trials=5):
        raise ChainInconsistency(f"{mu.construction} product for r={r} failed the bilinearity check")
    return BoundRecord(
        "N", r, UPPER, mu.n, CONSTRUCTIVE,
        f"{mu.construction} polynomial product is nonsingular symmetric bilinear",
        f"{mu.construction}_poly_mult({r}): R^{r} x R^{r} -> R^{mu.n}",
    )


def embedding_cap(k: int) -> int:
    """Upper bound on ``E(k)`` from the polynomial products: ``2k-1`` (k odd) or ``2k`` (k even)."""
    return 2 * k - 1 if k % 2 else 2 * k


def chain_for(k: int) -> list[BoundRecord]:
    """``k+2 <= E(k) <= N(k+1) - 1 <= cap`` and ``I_as(RP^k) <= E(k)``.

    When the two ends meet the squeeze emits exact records.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    n_up = _n_upper(k + 1)
    e_lo = BoundRecord(
        "E", k, LOWER, k + 2, CITED,
        f"Hopf: RP^{k} does not embed in R^{k + 1}",
    )
    e_up = BoundRecord(
        "E", k, UPPER, n_up.value - 1, DERIVED,
        "Hopf map of the product followed by stereographic projection",
        f"stereographic_reduce({n_up.witness.split(':')[0]})",
    )
    if e_up.value != embedding_cap(k):
        raise ChainInconsistency(f"E({k}) upper {e_up.value} differs from cap {embedding_cap(k)}")
    n_lo = BoundRecord(
        "N", k + 1, LOWER, e_lo.value + 1, DERIVED,
        "E(k) <= N(k+1) - 1",
    )
    i_up = BoundRecord(
        "I_as", k, UPPER, e_up.value, DERIVED,
        "difference quotient of an embedding is antisymmetric",
        "embedding_to_antisymmetric",
    )
    records = [e_lo, e_up, n_lo, n_up, i_up]
    if e_lo.value == e_up.value:
        records.append(BoundRecord(
            "E", k, EXACT_KIND, e_lo.value, DERIVED,
            f"squeeze {e_lo.value} <= E({k}) <= {e_up.value}",
        ))
        records.append(BoundRecord(
            "N", k + 1, EXACT_KIND, n_up.value, DERIVED,
            f"squeeze {n_lo.value} <= N({k + 1}) <= {n_up.value}",
        ))
    check_consistency(records)
    return records


def ias_lower_bound(m_exp: int, engine_max_m: int = ENGINE_MAX_M) -> BoundRecord:
    """``I_as(RP^m) >= 2^(m_exp+1) + 1`` for ``m = 2^m_exp + 1``.

    An antisymmetric map into ``S^{n-1}`` pulls the generator of
    ``H^2(RP^{n-1}; Z)`` back to ``b``, whose ``2^m_exp``-th power survives;
    with ``n = 2^(m_exp+1)`` that power would land above the top degree.
    The record is engine-verified only when the ring computation actually
    finds nilindex ``2^m_exp + 1``.
    """
    if m_exp < 1:
        raise ValueError("m_exp must be at least 1")
    m = 2 ** m_exp + 1
    value = 2 ** (m_exp + 1) + 1
    source = f"b^{2 ** m_exp} != 0 in H*(B(RP^{m},2); Z) obstructs maps into S^{value - 2}"
    if m <= engine_max_m:
        h = height_of_b(m)
        if h.status == EXACT and h.nilindex == 2 ** m_exp + 1:
            return BoundRecord(
                "I_as", m, LOWER, 2 * h.height + 1, ENGINE_VERIFIED, source,
                f"height_of_b({m}): height={h.height} nilindex={h.nilindex} status={h.status}",
            )
        witness = f"height_of_b({m}) returned height={h.height} status={h.status}"
    else:
        witness = f"engine skipped: m={m} > {engine_max_m}"
    return BoundRecord("I_as", m, LOWER, value, FORMULA_ONLY, source, witness)


def closed_chain(m_exp: int, engine_max_m: int = ENGINE_MAX_M) -> list[BoundRecord]:
    """Exact ``E``, ``N`` and ``I_as`` for ``k = 2^m_exp + 1`` by squeezing.

    ``2^(m+1)+1 <= I_as <= E <= N - 1 <= 2k - 1 = 2^(m+1)+1``; both ends are
    recomputed here rather than trusted.
    """
    k = 2 ** m_exp + 1
    lower = ias_lower_bound(m_exp, engine_max_m)
    upper = chain_for(k)
    cap = next(r for r in upper if r.quantity == "E" and r.kind == UPPER).value
    if lower.value != cap:
        raise ChainInconsistency(
            f"squeeze fails for k={k}: I_as lower {lower.value} vs E upper {cap}"
        )
    if cap != 2 * k - 1:
        raise ChainInconsistency(f"odd-k cap for k={k} is {cap}, expected {2 * k - 1}")
    prov = lower.provenance
    src = f"squeeze {lower.value} <= I_as(RP{k}) <= E({k}) <= N({k + 1}) - 1 <= {cap}"
    records = [lower] + [r for r in upper if r.kind != EXACT_KIND]
    records += [
        BoundRecord("I_as", k, EXACT_KIND, cap, prov, src, lower.witness),
        BoundRecord("E", k, EXACT_KIND, cap, prov, src, lower.witness),
        BoundRecord("N", k + 1, EXACT_KIND, cap + 1, prov, src, lower.witness),
    ]
    check_consistency(records)
    return records


def rees_squeeze(engine_max_m: int = ENGINE_MAX_M) -> list[BoundRecord]:
    """``I_as(RP^5) = I_as(RP^6) = 9`` from the lower bound, Rees and monotonicity."""
    lo5 = ias_lower_bound(2, engine_max_m)
    up6 = BoundRecord("I_as", 6, UPPER, 9, CITED, "Rees: I_as(RP^6) <= 9")
    mono = "monotonicity I_as(RP^k) <= I_as(RP^(k+1))"
    lo6 = BoundRecord("I_as", 6, LOWER, lo5.value, DERIVED, mono, f"from {lo5.label} >= {lo5.value}")
    up5 = BoundRecord("I_as", 5, UPPER, up6.value, DERIVED, mono, f"from {up6.label} <= {up6.value}")
    records = [lo5, up6, lo6, up5]
    if lo5.value != up6.value:
        raise ChainInconsistency(f"I_as(RP5) lower {lo5.value} does not meet Rees bound {up6.value}")
    src = f"squeeze with cited Rees bound {up6.value}"
    records += [
        BoundRecord("I_as", 5, EXACT_KIND, 9, CITED, src, "cites Rees"),
        BoundRecord("I_as", 6, EXACT_KIND, 9, CITED, src, "cites Rees"),
    ]
    check_consistency(records)
    return records


def check_consistency(records: list[BoundRecord]) -> None:
    """Every lower bound is at most every upper bound; exact values lie between."""
    by_q: dict[tuple[str, int], list[BoundRecord]] = {}
    for r in records:
        by_q.setdefault((r.quantity, r.k), []).append(r)
    for group in by_q.values():
        lows = [r.value for r in group if r.kind in (LOWER, EXACT_KIND)]
        ups = [r.value for r in group if r.kind in (UPPER, EXACT_KIND)]
        if lows and ups and max(lows) > min(ups):
            raise ChainInconsistency(f"{group[0].label}: lower {max(lows)} > upper {min(ups)}")
        exact = {r.value for r in group if r.kind == EXACT_KIND}
        if len(exact) > 1:
            raise ChainInconsistency(f"{group[0].label}: conflicting exact values {sorted(exact)}")


def bounds_table(m_exp_max: int = 2, engine_max_m: int = ENGINE_MAX_M) -> list[BoundRecord]:
    """Small-k chains, the closed chains up to ``m_exp_max`` and the Rees squeeze."""
    records = chain_for(2) + chain_for(3)
    for m_exp in range(1, m_exp_max + 1):
        records += closed_chain(m_exp, engine_max_m)
    records += rees_squeeze(engine_max_m)
    seen = set()
    unique = []
    for r in records:
        if r not in seen:
            seen.add(r)
            unique.append(r)
    check_consistency(unique)
    return unique


COLUMNS = ("quantity", "kind", "value", "provenance", "source", "witness-ref")


def _row(r: BoundRecord) -> list[str]:
    return [r.label, r.kind, str(r.value), r.provenance, r.source, r.witness]


def format_table(records: list[BoundRecord], fmt: str = "markdown", seed: int | None = None) -> str:
    if fmt == "json":
        payload = {"schema_version": 1, "records": [r.to_json_dict() for r in records]}
        if seed is not None:
            payload["seed"] = seed
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in records:
            w.writerow(_row(r))
        return buf.getvalue()
    if fmt == "markdown":
        rows = [list(COLUMNS)] + [_row(r) for r in records]
        widths = [max(len(row[i]) for row in rows) for i in range(len(COLUMNS))]
        lines = []
        for n, row in enumerate(rows):
            lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
            if n == 0:
                lines.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
