from fractions import Fraction
from itertools import product
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qunitary.gram import (
    GramEngine,
    NotShiftReachable,
    character_stability_scan,
    classical_character_check,
    classical_limit_scan,
    gram_block,
    inertia,
    module_report,
    shift_decompose,
    verify_shift_equivalence,
    words,
)
from qunitary.qfield import Cyclotomic, QRoot, qbinomial, qint, qint_rational, sign_of_real
from qunitary.qspec import RealForm, compute_spec, in_classical_regime, singlet_p_from_z, singlet_weights
from qunitary.rootdata import freudenthal_character, parse_algebra


def _spec(name, n, m):
    rs = parse_algebra(name)
    return rs, compute_spec(rs, QRoot(n, m))


def _matvec(G, v):
    out = []
    for row in G:
        acc = Cyclotomic.zero(2)
        for g, x in zip(row, v):
            if x:
                acc = acc + g * x
        out.append(acc)
    return out


# -- words and the raw form -------------------------------------------------


@given(st.lists(st.integers(0, 3), min_size=1, max_size=3))
def test_word_count_is_multinomial(content):
    content = tuple(content)
    expected = factorial(sum(content))
    for c in content:
        expected //= factorial(c)
    ws = words(content)
    assert len(ws) == expected == len(set(ws))
    assert list(ws) == sorted(ws)


def test_rank_one_norms_match_product_formula():
    # <F^k v, F^k v> = [k]! [lam][lam-1]...[lam-k+1]
    rs, spec = _spec("A1", 1, 14)
    lam = Fraction(5, 3)
    N = 42
    for k in range(6):
        block = gram_block(rs, spec, (lam,), None, (k,))
        expected = Cyclotomic.one(N)
        for j in range(k):
            expected = expected * qint(j + 1, 1, spec.q) * qint_rational(lam - j, 1, spec.q, N)
        assert block.matrix[0][0] == expected


@pytest.mark.parametrize("name,n,m,lam,form", [
    ("A2", 1, 7, (1, 2), "compact"),
    ("A2", 1, 8, (Fraction(1, 2), 3), "+,-"),
    ("B2", 1, 12, (2, 1), "-,+"),
    ("G2", 1, 10, (1, 0), "-,-"),
])
def test_block_invariants(name, n, m, lam, form):
    rs, spec = _spec(name, n, m)
    rf = RealForm.parse(form, rs.rank)
    for content in product(range(3), repeat=rs.rank):
        b = gram_block(rs, spec, lam, rf, content)
        G = b.matrix
        k = len(G)
        for i in range(k):
            assert G[i][i].is_real()
            for j in range(k):
                assert G[i][j] == G[j][i].star()
        npos, nzero, nneg = b.signature
        assert b.rank + nzero == k and npos + nneg == b.rank


def test_inertia_of_explicit_matrices():
    one, zero = Cyclotomic.one(5), Cyclotomic.zero(5)
    assert inertia([[one, zero], [zero, -one]]) == (1, 0, 1)
    assert inertia([[zero, one], [one, zero]]) == (1, 0, 1)
    assert inertia([[one, one], [one, one]]) == (1, 1, 0)
    assert inertia([]) == (0, 0, 0)


@pytest.mark.parametrize("name,m", [("A2", 5), ("A2", 8), ("B2", 8), ("B2", 10), ("G2", 14)])
def test_serre_elements_lie_in_the_radical(name, m):
    rs, spec = _spec(name, 1, m)
    lam = tuple(Fraction(k + 1, 3) for k in range(rs.rank))
    eng = GramEngine(rs, spec, lam)
    r = rs.rank
    for i, j in product(range(r), repeat=2):
        if i == j:
            continue
        deg = 1 - rs.cartan[j][i]  # (alpha_j, alpha_i^vee)
        serre = {}
        for k in range(deg + 1):
            coeff = qbinomial(deg, k, rs.d[i], spec.q) * (-1) ** k
            serre[(i,) * (deg - k) + (j,) + (i,) * k] = coeff
        base = tuple(deg if x == i else (1 if x == j else 0) for x in range(r))
        extra_max = 6 - sum(base)
        for extra in product(range(extra_max + 1), repeat=r):
            if sum(extra) > extra_max:
                continue
            content = tuple(a + b for a, b in zip(base, extra))
            ws = words(content)
            index = {w: t for t, w in enumerate(ws)}
            G = eng.matrix(content)
            for prefix in words(extra):
                v = [0] * len(ws)
                for tail, c in serre.items():
                    v[index[prefix + tail]] = c
                assert all(x.is_zero() for x in _matvec(G, v)), (name, i, j, prefix)


@pytest.mark.parametrize("name,m", [("A1", 10), ("A2", 9), ("B2", 8), ("G2", 14)])
def test_divided_power_limit_has_zero_norm(name, m):
    rs, spec = _spec(name, 1, m)
    lam = tuple(Fraction(2 * k + 1, 5) for k in range(rs.rank))
    for i, Mi in enumerate(spec.M_simple):
        content = tuple(Mi if x == i else 0 for x in range(rs.rank))
        block = gram_block(rs, spec, lam, None, content)
        assert block.rank == 0


# -- irreducible modules ----------------------------------------------------


@pytest.mark.parametrize("name,m,lam", [
    ("A1", 10, (4,)), ("A1", 10, (6,)), ("A2", 8, (1, 0)), ("A2", 10, (2, 3)), ("B2", 8, (1, 1)),
    ("B2", 6, (2, 0)), ("G2", 14, (1, 0)), ("A2", 8, (Fraction(1, 2), 1)),
])
def test_reduced_module_matches_full_gram_ranks(name, m, lam):
    rs, spec = _spec(name, 1, m)
    rep = module_report(rs, spec, lam, height_budget=12)
    eng = GramEngine(rs, spec, lam)
    for content in product(range(5), repeat=rs.rank):
        if sum(content) > 6:
            continue
        G = eng.matrix(content)
        rank = sum(inertia(G)[::2])
        assert rep.dims.get(rs.subtract_roots(rep.lam, content), 0) == rank, content


@pytest.mark.parametrize("name,m,lam", [("A1", 10, (7,)), ("A2", 8, (2, 1)), ("B2", 6, (0, 2)), ("G2", 14, (1, 0))])
def test_termination_is_sound(name, m, lam):
    rs, spec = _spec(name, 1, m)
    rep = module_report(rs, spec, lam)
    assert not rep.truncated
    eng = GramEngine(rs, spec, lam)
    span = rep.heights + 3
    boxes = list(product(range(span), repeat=rs.rank))
    deepest = max(sum(c) for c in boxes if rs.subtract_roots(rep.lam, c) in rep.dims)
    for content in boxes:
        if deepest < sum(content) <= deepest + 2:
            assert sum(inertia(eng.matrix(content))[::2]) == 0, content


@pytest.mark.parametrize("name", ["A2", "B2", "G2"])
def test_ranks_are_weyl_symmetric_in_classical_regime(name):
    rs = parse_algebra(name)
    for m in (8, 10, 12, 14):
        try:
            spec = compute_spec(rs, QRoot(1, m))
        except ValueError:
            continue
        for lam in product(range(3), repeat=rs.rank):
            if not in_classical_regime(lam, spec):
                continue
            rep = module_report(rs, spec, lam)
            for mu, mult in rep.dims.items():
                for i in range(rs.rank):
                    assert rep.dims.get(rs.reflect(mu, i)) == mult
            assert rep.dims == freudenthal_character(lam, rs)


def test_rank_one_beyond_bound_is_not_unitary():
    rs, spec = _spec("A1", 1, 10)
    rep = module_report(rs, spec, (6,))
    assert not rep.unitary
    assert module_report(rs, spec, (5,)).total_dim == 1


def test_truncation_and_budget_validation():
    rs, spec = _spec("A1", 1, 10)
    rep = module_report(rs, spec, (4,), height_budget=2)
    assert rep.truncated and rep.classical_character is None
    with pytest.raises(ValueError):
        module_report(rs, spec, (4,), height_budget=-1)
    with pytest.raises(ValueError):
        classical_character_check(rep, rs)


def test_classical_character_check_outside_regime_may_disagree():
    rs, spec = _spec("A2", 1, 8)
    rep = module_report(rs, spec, (2, 1))
    assert not in_classical_regime((2, 1), spec)
    assert classical_character_check(rep, rs) is False
    assert classical_character_check(module_report(rs, spec, (1, 1)), rs) is True


@settings(max_examples=25)
@given(st.sampled_from([(1, 5), (2, 5), (1, 8), (3, 8), (1, 12), (5, 12)]), st.integers(0, 4), st.integers(0, 4))
def test_noncompact_form_of_nonintegral_weight_reports_signature(q, a, b):
    rs = parse_algebra("A2")
    spec = compute_spec(rs, QRoot(*q))
    lam = (Fraction(2 * a + 1, 2), b)
    rep = module_report(rs, spec, lam, RealForm.parse("-,+", 2), height_budget=6)
    for w, (npos, nzero, nneg) in rep.signatures.items():
        assert nzero == 0 and npos + nneg == rep.dims[w]
    assert rep.unitary == all(s[2] == 0 for s in rep.signatures.values())


# -- shift construction -----------------------------------------------------


def test_shift_decompose_examples():
    rs, spec = _spec("A1", 1, 10)
    assert shift_decompose((9,), rs, spec) == ((4,), (5,))
    assert shift_decompose((3,), rs, spec) == ((3,), (0,))
    assert shift_decompose((-1,), rs, spec) == ((4,), (-5,))
    with pytest.raises(NotShiftReachable):
        shift_decompose((Fraction(1, 3),), rs, spec)


@given(st.sampled_from([("A1", 1, 10), ("A2", 3, 8), ("B2", 1, 12), ("G2", 5, 14)]), st.data())
def test_shift_decompose_roundtrip(case, data):
    name, n, m = case
    rs, spec = _spec(name, n, m)
    lam0 = tuple(data.draw(st.integers(0, Mi - 1)) for Mi in spec.M_simple)
    p = tuple(data.draw(st.integers(-3, 3)) for _ in range(rs.rank))
    lam_r = tuple(Fraction(pi * m, 2 * n * d) for pi, d in zip(p, rs.d))
    lam = tuple(a + b for a, b in zip(lam0, lam_r))
    got0, got_r = shift_decompose(lam, rs, spec)
    assert tuple(a + b for a, b in zip(got0, got_r)) == lam
    assert all(0 <= c < Mi and c.denominator == 1 for c, Mi in zip(got0, spec.M_simple))


def test_shift_equivalence_examples():
    rs, spec = _spec("A1", 1, 10)
    assert verify_shift_equivalence(rs, spec, (4,), (1,))
    assert verify_shift_equivalence(rs, spec, (4,), (0,))
    rs, spec = _spec("B2", 1, 6)
    assert verify_shift_equivalence(rs, spec, (0, 0), singlet_p_from_z((1, 1), spec), 6)


def test_shift_equivalence_detects_a_non_singlet_shift():
    # shifting by an ordinary integral weight changes the Gram blocks
    rs, spec = _spec("A1", 1, 10)
    eng_a = GramEngine(rs, spec, (4,))
    eng_b = GramEngine(rs, spec, (5,))
    assert eng_a.matrix((1,)) != eng_b.matrix((1,))


def test_shifted_module_is_unitary_under_its_form():
    rs, spec = _spec("B2", 1, 8)
    lam0 = (1, 1)
    for p in product(range(2), repeat=2):
        lam_r, form = singlet_weights(rs, spec, p)
        lam = tuple(a + b for a, b in zip(lam0, lam_r))
        twisted = module_report(rs, spec, lam, form)
        compact = module_report(rs, spec, lam0)
        assert twisted.unitary == compact.unitary
        assert list(twisted.dims.values()) == list(compact.dims.values())


# -- scans ------------------------------------------------------------------


def test_stability_scan_marks_smaller_q_stable():
    rs, spec = _spec("A1", 1, 10)
    rows = character_stability_scan(rs, (4,), spec, [QRoot(1, 11), QRoot(1, 13), QRoot(2, 21)])
    assert [r["stable"] for r in rows] == [True, True, True]
    with pytest.raises(ValueError):
        character_stability_scan(rs, (4,), spec, [QRoot(1, 7)])


def test_limit_scan_integrality_bookkeeping():
    rs = parse_algebra("A1")
    with pytest.raises(ValueError):
        classical_limit_scan(rs, (Fraction(-1, 2),), 1, QRoot(1, 4), 2)
    stages = classical_limit_scan(rs, (Fraction(-1, 2),), 1, QRoot(1, 5), 3)
    assert [s["lambda_0"] for s in stages] == [(2,), (3,), (4,), (5,)]
    assert all(s["unitary"] for s in stages)


def test_limit_scan_rejects_bad_node():
    with pytest.raises(ValueError):
        classical_limit_scan(parse_algebra("G2"), (-1, 0), 1, QRoot(1, 14), 1)
    with pytest.raises(ValueError):
        classical_limit_scan(parse_algebra("A2"), (-1, 0), 3, QRoot(1, 8), 1)


def test_limit_scan_rank_two_hermitian_node():
    rs = parse_algebra("C2")
    stages = classical_limit_scan(rs, (0, -1), 2, QRoot(1, 8), 2, height_budget=20)
    assert all(s["form"].s == (1, -1) for s in stages)
    for s in stages:
        assert s["unitary"] or s["truncated"]


def test_gram_entry_signs_are_exact():
    rs, spec = _spec("A1", 1, 10)
    block = gram_block(rs, spec, (6,), None, (5,))
    assert sign_of_real(block.matrix[0][0]) == 0
    # [6]_q = -[1]_q when M = 5, so the first lowering already has negative norm
    block = gram_block(rs, spec, (6,), None, (1,))
    assert block.signature == (0, 0, 1)
