import json
import random

import pytest

from projcfg.exact_linalg import _f2_eliminate
from projcfg.graded_ring import (
    BOUND_REACHED,
    EXACT,
    GeneratorSpec,
    MissingPieceError,
    Presentation,
    build_piece,
    equal_elements,
    height,
    is_zero,
    multiply,
    normal_form,
    reduce,
    relation_rows,
)
from projcfg.presentations import build_integral, build_unordered_config_mod2


@pytest.fixture(scope="module")
def ring5():
    return build_integral(5).presentation


@pytest.fixture(scope="module")
def config5():
    return build_unordered_config_mod2(5).presentation


def names(p, monos):
    out = []
    for m in monos:
        s = "".join(g.name * k for g, k in zip(p.generators, m))
        out.append(s or "1")
    return out


def test_degree4_basis_m5(ring5):
    # degree-4 monomials in a2, b2, c3, d4, e5 by hand: a^2, ab, b^2, d
    assert names(ring5, build_piece(ring5, 4).basis_monomials) == ["aa", "ab", "bb", "d"]


def test_degree0(ring5, config5):
    p = build_piece(ring5, 0)
    assert p.basis_monomials == ((0,) * 5,)
    assert p.structure.describe() == "Z"
    assert build_piece(config5, 0).structure == 1


def test_degree1_config5(config5):
    p = build_piece(config5, 1)
    assert p.structure == 2
    assert names(config5, p.basis_monomials) == ["u", "v"]


def test_relations_reduce_to_zero(ring5, config5):
    for p in (ring5, config5):
        for rel in p.relation_elements():
            assert is_zero(rel)
            assert not any(reduce(rel))


def test_named_relations(ring5, config5):
    a, b, c, d, e = ring5.gens()
    assert is_zero(b * b - a * b)
    assert equal_elements(c * c, a * d)
    u, v, w = config5.gens()
    assert is_zero(u * v + u * u)


def test_multiply(ring5):
    a, b, *_ = ring5.gens()
    one = ring5.one()
    assert multiply(one, a) == a
    ab = multiply(a, b)
    assert ab.degree == 4
    assert list(ab.terms) == [(1, 1, 0, 0, 0)]


def test_is_zero_torsion(ring5):
    a, b, c, d, e = ring5.gens()
    assert is_zero(ring5.zero())
    assert is_zero(2 * a)
    assert not is_zero(2 * d)
    assert is_zero(4 * d)
    assert not is_zero(d)


def test_heights_m5_m4(ring5):
    assert height(ring5.gen("b"), 10) == (4, EXACT)
    assert height(build_integral(4).presentation.gen("b")) == (3, EXACT)


def test_height_bound_reached(ring5):
    h = height(ring5.gen("b"), 6)
    assert h.status == BOUND_REACHED
    assert h.height == 3


def test_height_rejects_degree_zero(ring5):
    with pytest.raises(ValueError):
        height(ring5.one(), 10)


def test_equal_elements(ring5):
    a, b, c, d, e = ring5.gens()
    assert equal_elements(b**4, 2 * d**2)
    assert equal_elements(a * b * d, 2 * d**2)
    assert equal_elements(b, b)
    with pytest.raises(ValueError):
        equal_elements(a, d)


def test_missing_piece_signalled():
    p = build_integral(6).presentation
    with pytest.raises(MissingPieceError):
        reduce(p.gen("d") ** 2, build=False)
    p.piece(8)
    reduce(p.gen("d") ** 2, build=False)


def test_inhomogeneous_relation_rejected():
    with pytest.raises(ValueError):
        Presentation([GeneratorSpec("x", 1), GeneratorSpec("y", 2)], [{(1, 0): 1, (0, 1): 1}])


def test_duplicate_generator_rejected():
    with pytest.raises(ValueError):
        Presentation([GeneratorSpec("x", 1), GeneratorSpec("x", 2)])


def test_exactness_of_pieces():
    # every monomial multiple of every relation vanishes, degree by degree
    for p in (build_integral(6).presentation, build_unordered_config_mod2(6).presentation):
        for d in range(p.degree_bound + 1):
            for row in relation_rows(p, d):
                assert is_zero(p.element(row, d))


def _random_element(p, d, rng, span=3):
    basis = p.monomials(d)
    return p.element({m: rng.randint(-span, span) for m in basis}, d)


def _random_ideal_element(p, d, rng):
    rows = relation_rows(p, d)
    out = p.zero(d)
    for row in rng.sample(rows, min(4, len(rows))):
        out = out + p.element(row, d) * rng.randint(-3, 3)
    return out


@pytest.mark.parametrize("m", [5, 6, 7])
def test_reduce_is_ring_map(m):
    p = build_integral(m).presentation
    rng = random.Random(m)
    for _ in range(20):
        d1, d2 = rng.randint(2, m), rng.randint(2, m)
        x, y = _random_element(p, d1, rng), _random_element(p, d2, rng)
        if not relation_rows(p, d1):
            continue
        x2 = x + _random_ideal_element(p, d1, rng)
        assert reduce(x2) == reduce(x)
        assert reduce(x2 * y) == reduce(x * y)
        assert reduce(normal_form(x) * y) == reduce(x * y)


def test_reduce_additive(ring5):
    rng = random.Random(3)
    for d in range(2, 10):
        x, y = _random_element(ring5, d, rng), _random_element(ring5, d, rng)
        piece = ring5.piece(d)
        if piece.structure.free_rank == 0 and not piece.structure.torsion:
            continue
        q = piece._quotient
        assert reduce(x + y) == q.add_coords(reduce(x), reduce(y))


def test_height_invariant_under_ideal_shift():
    p = build_integral(5).presentation
    a, b, c, d, e = p.gens()
    base = height(b)
    for shift in (2 * a, 2 * b, -2 * b, 2 * a + 4 * b):
        assert height(b + shift) == base


def test_mod2_consistency_integer_vs_f2():
    # (Z^n / R) (x) F2 has dimension free + #even torsion; compare with direct F2 elimination
    for m in range(2, 10):
        p = build_integral(m).presentation
        for d in range(2 * m + 1):
            piece = p.piece(d)
            rows = relation_rows(p, d)
            index = {mono: i for i, mono in enumerate(piece.basis_monomials)}
            rank = len(_f2_eliminate(sum(1 << index[mo] for mo, c in row.items() if c % 2) for row in rows))
            assert piece.f2_dimension == piece.rank - rank


def test_universal_coefficients_against_mod2_ring():
    # dim H^d(B; F2) = dim(H^d(B; Z) (x) F2) + #(even torsion in H^{d+1}(B; Z))
    for m in range(2, 11):
        z = build_integral(m).presentation
        f = build_unordered_config_mod2(m + 1).presentation
        for d in range(2 * m + 1):
            s1 = z.piece(d + 1).structure
            expected = z.piece(d).f2_dimension + sum(1 for t in s1.torsion if t % 2 == 0)
            assert f.piece(d).structure == expected, (m, d)


def test_pieces_deterministic():
    p1 = build_integral(7).presentation
    p2 = build_integral(7).presentation
    for d in range(15):
        a, b = build_piece(p1, d), build_piece(p2, d)
        assert a.basis_monomials == b.basis_monomials
        assert a.structure == b.structure
        x = _random_element(p1, d, random.Random(d))
        y = p2.element(x.terms, d)
        assert a.project(a.vector(x)) == b.project(b.vector(y))


def test_piece_cache_threadsafe():
    from concurrent.futures import ThreadPoolExecutor

    p = build_integral(8).presentation
    with ThreadPoolExecutor(8) as pool:
        pieces = list(pool.map(p.piece, [10] * 16))
    assert all(pc is pieces[0] for pc in pieces)


def test_json_round_trip(ring5):
    data = json.loads(ring5.to_json())
    assert data["generators"][4] == {"name": "e", "degree": 5}
    back = Presentation.from_json_dict(data)
    assert back.relations == ring5.relations
    for d in range(11):
        assert back.piece(d).structure == ring5.piece(d).structure
    piece = ring5.piece(4).to_json_dict([g.name for g in ring5.generators])
    assert piece["structure"] == {"free_rank": 0, "torsion": [2, 2, 4]}
    assert piece["basis"] == ["a^2", "a*b", "b^2", "d"]


def test_parse(ring5):
    assert ring5.parse("b^4 - 2*d^2") == ring5.gen("b") ** 4 - 2 * ring5.gen("d") ** 2
    with pytest.raises(ValueError):
        ring5.parse("z")
