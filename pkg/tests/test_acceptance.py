"""The nine acceptance criteria, each timed against its budget.

Every criterion records a pass/fail line; the lines are printed at the end
of the pytest run (see conftest.py) or directly when this file is executed.
"""
from __future__ import annotations

import random
import time
from contextlib import contextmanager
from itertools import product


from oracles import coprime_residues, expected_reality, expected_signs
from qunitary.frobenius import rank1_res_module, reality_preserving_algebra, verify_tilde_relations_rank1
from qunitary.gram import (
    classical_limit_scan,
    module_report,
    verify_shift_equivalence,
)
from qunitary.qfield import Cyclotomic, QRoot, check_qbinom_identity
from qunitary.qspec import (
    compute_spec,
    hermitian_nodes,
    singlet_p_from_z,
    singlet_weights,
    in_classical_regime,
)
from qunitary.rootdata import build_root_system, coxeter_labels, freudenthal_character, parse_algebra

RESULTS: dict[int, tuple[str, bool, float, float]] = {}


def summary_lines() -> list[str]:
    out = []
    for num in sorted(RESULTS):
        title, ok, elapsed, limit = RESULTS[num]
        out.append(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} ({elapsed:.1f}s, limit {limit:.0f}s)")
    return out


@contextmanager
def criterion(num: int, title: str, limit: float):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < limit
        RESULTS[num] = (title, ok, elapsed, limit)
    assert elapsed < limit, f"criterion {num} took {elapsed:.1f}s, limit {limit}s"


def _specs(rs, ms, all_n=True):
    for m in ms:
        for n in coprime_residues(m) if all_n else [1]:
            try:
                yield compute_spec(rs, QRoot(n, m))
            except ValueError:
                continue


RANK2 = ["A1", "A2", "B2", "C2", "G2"]
M_AT_MOST_6 = [3, 4, 5, 6, 8, 10, 12]


def test_criterion_1_qbinomial_identity():
    rng = random.Random(20240601)
    with criterion(1, "q-binomial identity, 500 tuples per m in 4..20", 10):
        for m in range(4, 21):
            M = m if m % 2 else m // 2
            ns = coprime_residues(m)
            for _ in range(500):
                q = QRoot(rng.choice(ns), m)
                a, c = rng.randint(0, 4), rng.randint(0, 4)
                b, d = rng.randrange(M), rng.randrange(M)
                assert check_qbinom_identity(a, b, c, d, q), (a, b, c, d, q)


def _dual_expected(rs, spec) -> str:
    name = rs.name
    if rs.series in "BC" and spec.even and spec.M % 2 == 0:
        return ("C" if rs.series == "B" else "B") + str(rs.rank)
    return name


def test_criterion_2_spectral_tables():
    types = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2", "F4"]
    with criterion(2, "spectral tables and dual types, m <= 24", 5):
        for t in types:
            rs = parse_algebra(t)
            for spec in _specs(rs, range(2, 25)):
                M, Mi, A, At = spec.M, spec.M_simple, rs.cartan, spec.dual_cartan
                r = rs.rank
                assert all(M % x == 0 for x in Mi)
                assert all(x >= 2 for x in Mi)
                for i in range(r):
                    assert At[i][i] == 2
                    for j in range(r):
                        assert Mi[i] * A[i][j] == At[i][j] * Mi[j]
                        if i != j:
                            assert At[i][j] <= 0 and (At[i][j] == 0) == (At[j][i] == 0)
                assert spec.dual_type == _dual_expected(rs, spec), (t, spec.q)
                if rs.series == "G":
                    assert spec.roles_swapped == (spec.M % 3 == 0)
                if rs.series == "F":
                    assert spec.roles_swapped == (spec.even and spec.M % 2 == 0)


def test_criterion_3_classical_character_regime():
    with criterion(3, "Gram ranks equal Freudenthal multiplicities inside the classical regime", 300):
        checked = 0
        for t in RANK2:
            rs = parse_algebra(t)
            for spec in _specs(rs, M_AT_MOST_6):
                bound = max(spec.M_simple)
                for lam in product(range(bound), repeat=rs.rank):
                    if not in_classical_regime(lam, spec):
                        continue
                    rep = module_report(rs, spec, lam)
                    assert not rep.truncated
                    assert rep.dims == freudenthal_character(lam, rs), (t, spec.q, lam)
                    checked += 1
        assert checked > 100


def test_criterion_4_rank1_unitarity_bound():
    rs = build_root_system("A", 1)
    with criterion(4, "rank one unitarity up to j = M at q = exp(i pi/M)", 60):
        for M in range(3, 9):
            spec = compute_spec(rs, QRoot(1, 2 * M))
            for j in range(M + 1):
                rep = module_report(rs, spec, (j,))
                assert rep.unitary, (M, j)
                if j <= M - 1:
                    assert rep.classical_character and rep.total_dim == j + 1
                else:
                    assert rep.total_dim == 1


def test_criterion_5_shift_equivalence():
    with criterion(5, "twisted Gram blocks equal compact blocks to height 8", 600):
        for t in RANK2:
            rs = parse_algebra(t)
            for spec in _specs(rs, M_AT_MOST_6):
                for z in product(range(3), repeat=rs.rank):
                    _, form = singlet_weights(rs, spec, singlet_p_from_z(z, spec))
                    assert form.s == expected_signs(rs.series, rs, spec, z), (t, spec.q, z)
                for p in product(range(3), repeat=rs.rank):
                    _, form = singlet_weights(rs, spec, p)
                    assert form.s == tuple((-1) ** x for x in p)
                for lam0 in product(*(range(x) for x in spec.M_simple)):
                    for p in product(range(3), repeat=rs.rank):
                        assert verify_shift_equivalence(rs, spec, lam0, p, 8), (t, spec.q, lam0, p)


def test_criterion_6_rank1_frobenius():
    rs = build_root_system("A", 1)
    with criterion(6, "rank one tilde relations for z <= 5, even q with M <= 8", 30):
        for m in range(4, 17, 2):
            for n in coprime_residues(m):
                spec = compute_spec(rs, QRoot(n, m))
                for z in range(6):
                    rep = verify_tilde_relations_rank1(rank1_res_module(z, spec))
                    assert rep.ok, (m, n, z, rep.failures)
                    assert rep.eigenvalues == tuple(range(z, -z - 1, -2))
        mod = rank1_res_module(2, compute_spec(rs, QRoot(1, 6)))
        assert mod.lower(3)[3] == {6: Cyclotomic.from_rational(6, -2)}


def test_criterion_7_reality_preserving_table():
    types = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"]
    # odd q; even q with M odd; even q with M even
    ms = {"odd": [5, 7, 9, 11], "even-M-odd": [6, 10, 14, 18], "even-M-even": [8, 12, 16]}
    with criterion(7, "reality-preserving algebra matches the case table", 5):
        for t in types:
            rs = parse_algebra(t)
            for cls, mlist in ms.items():
                seen = 0
                for spec in _specs(rs, mlist):
                    ra = reality_preserving_algebra(rs, spec)
                    want = expected_reality(rs.series, rs.rank, spec)
                    got = "full" if ra.kind == "full" else ra.label
                    assert got == want, (t, spec.q, got, want)
                    seen += 1
                assert seen, (t, cls)


def test_criterion_8_hermitian_nodes():
    expected = {
        "A1": [1], "A2": [1, 2], "A3": [1, 2, 3], "A5": [1, 2, 3, 4, 5],
        "B2": [1], "B3": [1], "B5": [1],
        "C2": [2], "C3": [3], "C5": [5],
        "D4": [1, 3, 4], "D5": [1, 4, 5], "D7": [1, 6, 7],
        "E6": [1, 6], "E7": [7], "E8": [], "F4": [], "G2": [],
    }
    with criterion(8, "Hermitian nodes reproduce the classification list", 5):
        for t, nodes in expected.items():
            rs = parse_algebra(t)
            got = hermitian_nodes(rs)
            assert [n for n, _ in got] == nodes, t
            labels = coxeter_labels(rs)
            assert all(labels[n - 1] == 1 for n, _ in got)
        assert hermitian_nodes(parse_algebra("B4"))[0][1] == "so(7,2)"
        assert hermitian_nodes(parse_algebra("C3"))[0][1] == "sp(3,R)"
        assert [name for _, name in hermitian_nodes(parse_algebra("A3"))] == ["su(3,1)", "su(2,2)", "su(1,3)"]


def test_criterion_9_limit_scan():
    rs = build_root_system("A", 1)
    with criterion(9, "limit scan A1, lambda = -Lambda, base 1/4, k <= 6", 30):
        stages = classical_limit_scan(rs, (-1,), 1, QRoot(1, 4), 6)
        assert len(stages) == 7
        for st in stages:
            assert st["form"].s == (-1,)
            assert st["unitary"] and not st["truncated"]
            assert st["lambda_0"] == (st["k"] + 1,)


if __name__ == "__main__":
    import sys

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for _, ok, _, _ in RESULTS.values()) else 1)
