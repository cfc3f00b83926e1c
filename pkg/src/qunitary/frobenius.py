"""Quasi-classical structure at roots of unity.

The generators X_i^{+-(M_i)} and K~_i = K_i^{M_i} act on special-point
sectors like a classical enveloping algebra of the dual algebra g~, extended
by the +-1 valued K~_i.  This module computes the sign data, builds the rank
one divided-power module exactly, checks the Chevalley relations there,
checks the tensor factorisation of characters in any rank, and classifies
the subalgebra of g~ that preserves the real form of every sector.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .gram import DEFAULT_HEIGHT_BUDGET, module_report
from .qfield import Cyclotomic, q_power, qbinomial
from .qspec import RootOfUnitySpec
from .rootdata import RootSystem, Weight, as_weight, dynkin_bipartition, freudenthal_character, identify_cartan

__all__ = [
    "TildeData",
    "tilde_data",
    "DividedPowerModule",
    "RelationReport",
    "rank1_res_module",
    "verify_tilde_relations_rank1",
    "sector_characters",
    "tensor_character_check",
    "RealityAlgebra",
    "reality_preserving_algebra",
]


def _q_sign(spec: RootOfUnitySpec, exponent: int) -> int:
    """q^exponent for an integer exponent that must give +-1."""
    k = (spec.n * exponent) % spec.m
    if k == 0:
        return 1
    if 2 * k == spec.m:
        return -1
    raise AssertionError(f"q^{exponent} is not +-1")


@dataclass(frozen=True)
class TildeData:
    spec: RootOfUnitySpec
    a: tuple[int, ...]  # bipartition of the Dynkin diagram
    s_matrix: tuple[tuple[int, ...], ...]  # s_ij = q^{M_i M_j (alpha_i, alpha_j)}

    def k_tilde(self, z: Sequence[int]) -> tuple[int, ...]:
        """<K~_i, lambda_z> = q_i^{z_i M_i^2} for the special point lambda_z."""
        spec = self.spec
        return tuple(
            _q_sign(spec, d * int(zi) * Mi * Mi) for d, zi, Mi in zip(spec.rs.d, z, spec.M_simple)
        )


def tilde_data(rs: RootSystem, spec: RootOfUnitySpec) -> TildeData:
    B = rs.symmetric
    M = spec.M_simple
    s = tuple(
        tuple(_q_sign(spec, M[i] * M[j] * B[i][j]) for j in range(rs.rank)) for i in range(rs.rank)
    )
    return TildeData(spec=spec, a=dynkin_bipartition(rs), s_matrix=s)


# ---------------------------------------------------------------------------
# rank one divided-power module

Operator = dict  # column index -> {row index: Cyclotomic}


def _compose(A: Operator, B: Operator) -> Operator:
    """A after B."""
    out: Operator = {}
    for col, entries in B.items():
        acc: dict[int, Cyclotomic] = {}
        for k, b in entries.items():
            for row, a in A.get(k, {}).items():
                acc[row] = acc[row] + a * b if row in acc else a * b
        acc = {r: v for r, v in acc.items() if not v.is_zero()}
        if acc:
            out[col] = acc
    return out


def _combine(A: Operator, B: Operator, sign: int = 1) -> Operator:
    out: Operator = {c: dict(e) for c, e in A.items()}
    for col, entries in B.items():
        tgt = out.setdefault(col, {})
        for row, v in entries.items():
            v = v if sign > 0 else -v
            tgt[row] = tgt[row] + v if row in tgt else v
    return {c: {r: v for r, v in e.items() if not v.is_zero()} for c, e in out.items()}


def _scale(A: Operator, c: Cyclotomic) -> Operator:
    return {col: {r: v * c for r, v in e.items()} for col, e in A.items()}


def _apply(A: Operator, vec: dict[int, Cyclotomic]) -> dict[int, Cyclotomic]:
    out: dict[int, Cyclotomic] = {}
    for k, x in vec.items():
        for row, a in A.get(k, {}).items():
            out[row] = out[row] + a * x if row in out else a * x
    return {r: v for r, v in out.items() if not v.is_zero()}


@dataclass
class DividedPowerModule:
    """Weyl module of highest weight z M for the rank one algebra.

    Basis v_k = F^{(k)} v, k = 0..zM.  The special-point sector is
    {v_{nM}}; span{v_k : M does not divide k} is a submodule, and the
    irreducible quotient is spanned by the sector.
    """

    z: int
    spec: RootOfUnitySpec
    a: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def M(self) -> int:
        return self.spec.M_simple[0]

    @property
    def highest(self) -> int:
        return self.z * self.M

    @property
    def dim(self) -> int:
        return self.highest + 1

    @property
    def sector(self) -> list[int]:
        return list(range(0, self.dim, self.M))

    def _q(self, exponent) -> Cyclotomic:
        return q_power(self.spec.q, exponent, self.spec.m)

    def lower(self, a: int) -> Operator:
        """X^{-(a)} v_k = [k+a choose a] v_{k+a}."""
        key = ("-", a)
        if key not in self._cache:
            op = {}
            for k in range(self.dim - a):
                c = qbinomial(k + a, a, 1, self.spec.q)
                if not c.is_zero():
                    op[k] = {k + a: c}
            self._cache[key] = op
        return self._cache[key]

    def raise_(self, a: int) -> Operator:
        """X^{+(a)} v_k = [lambda-k+a choose a] v_{k-a}."""
        key = ("+", a)
        if key not in self._cache:
            op = {}
            for k in range(a, self.dim):
                c = qbinomial(self.highest - k + a, a, 1, self.spec.q)
                if not c.is_zero():
                    op[k] = {k - a: c}
            self._cache[key] = op
        return self._cache[key]

    def k_power(self, e: int) -> Operator:
        """K^e v_k = q^{e (lambda - 2k)} v_k."""
        return {k: {k: self._q(e * (self.highest - 2 * k))} for k in range(self.dim)}

    def h_classical(self) -> Operator:
        one = Cyclotomic.one(self.spec.m)
        return {k: {k: one * (self.highest - 2 * k)} for k in range(self.dim) if self.highest != 2 * k}

    def k_tilde(self) -> Operator:
        return self.k_power(self.M)

    def x_tilde_plus(self) -> Operator:
        op = self.raise_(self.M)
        return _compose(op, self.k_tilde()) if self.a else op

    def x_tilde_minus(self) -> Operator:
        op = self.lower(self.M)
        if not self.a:
            op = _compose(op, self.k_tilde())
        return _scale(op, self._q(self.M * self.M))

    def h_tilde(self) -> Operator:
        xp, xm = self.x_tilde_plus(), self.x_tilde_minus()
        return _combine(_compose(xp, xm), _compose(xm, xp), -1)

    def matrix(self, op: Operator) -> list[list[Cyclotomic]]:
        zero = Cyclotomic.zero(self.spec.m)
        mat = [[zero] * self.dim for _ in range(self.dim)]
        for col, entries in op.items():
            for row, v in entries.items():
                mat[row][col] = v
        return mat


def rank1_res_module(z: int, spec: RootOfUnitySpec, a: int = 0) -> DividedPowerModule:
    if spec.rs.rank != 1:
        raise ValueError("rank1_res_module needs a rank one root system")
    if z < 0:
        raise ValueError("z must be non-negative")
    if a not in (0, 1):
        raise ValueError("bipartition choice a must be 0 or 1")
    return DividedPowerModule(int(z), spec, a)


@dataclass(frozen=True)
class RelationReport:
    ok: bool
    eigenvalues: tuple  # H~ eigenvalue on each sector vector v_{nM}, None if not an eigenvector
    failures: tuple[str, ...]


def verify_tilde_relations_rank1(module: DividedPowerModule, spec: RootOfUnitySpec | None = None) -> RelationReport:
    """Check the sl2 relations of X~^+-, H~ on the sector and the K~ sign rule."""
    spec = spec or module.spec
    M, z = module.M, module.z
    fails: list[str] = []
    sector = module.sector
    inside = set(sector)
    one = Cyclotomic.one(spec.m)

    # the complement of the sector is a submodule
    gens = {
        "X+": module.raise_(1),
        "X-": module.lower(1),
        "X+(M)": module.raise_(M),
        "X-(M)": module.lower(M),
        "K": module.k_power(1),
    }
    for name, op in gens.items():
        for k in range(module.dim):
            if k in inside:
                continue
            image = _apply(op, {k: one})
            if any(r in inside for r in image):
                fails.append(f"{name} maps v_{k} into the sector")
    # single-step generators kill the sector modulo the submodule
    for name in ("X+", "X-"):
        for k in sector:
            if any(r in inside for r in _apply(gens[name], {k: one})):
                fails.append(f"{name} v_{k} has a sector component")

    xp, xm, ht = module.x_tilde_plus(), module.x_tilde_minus(), module.h_tilde()
    kt = module.k_tilde()
    eig = []
    for idx, k in enumerate(sector):
        image = _apply(ht, {k: one})
        val = image.get(k, Cyclotomic.zero(spec.m))
        if set(image) - {k} or not val.is_rational():
            eig.append(None)
            fails.append(f"H~ v_{k} is not a rational multiple of v_{k}")
            continue
        value = val.rational_value()
        eig.append(int(value) if value.denominator == 1 else value)
        if value != z - 2 * idx:
            fails.append(f"H~ v_{k} = {value} v_{k}, expected {z - 2 * idx}")
    # [H~, X~^+-] = +-2 X~^+-
    for sign, op, name in ((1, xp, "X~+"), (-1, xm, "X~-")):
        comm = _combine(_compose(ht, op), _compose(op, ht), -1)
        for k in sector:
            lhs = _apply(comm, {k: one})
            rhs = {r: v * (2 * sign) for r, v in _apply(op, {k: one}).items()}
            if lhs != rhs:
                fails.append(f"[H~, {name}] != {2 * sign:+d} {name} on v_{k}")
    # X~ K~ = s_11 K~ X~
    s11 = tilde_data(spec.rs, spec).s_matrix[0][0]
    for op, name in ((xp, "X~+"), (xm, "X~-")):
        lhs = _compose(op, kt)
        rhs = _scale(_compose(kt, op), one * s11)
        if lhs != rhs:
            fails.append(f"{name} K~ != s_11 K~ {name}")
    # the sector is an irreducible (z+1)-dimensional sl2 module
    vec = {0: one}
    for step in range(z):
        vec = _apply(xm, vec)
        if set(vec) != {sector[step + 1]}:
            fails.append(f"X~-^{step + 1} v_0 is not a nonzero multiple of v_{sector[step + 1]}")
            break
    if _apply(xp, {0: one}):
        fails.append("X~+ v_0 != 0")
    if _apply(xm, {sector[-1]: one}):
        fails.append(f"X~- v_{sector[-1]} != 0")
    return RelationReport(ok=not fails, eigenvalues=tuple(eig), failures=tuple(fails))


# ---------------------------------------------------------------------------
# tensor factorisation of characters


def _dual_root_system(spec: RootOfUnitySpec) -> RootSystem:
    return RootSystem.from_cartan(spec.dual_cartan, label=spec.dual_type)


def _rescale_dual_weight(mu: Sequence, spec: RootOfUnitySpec) -> Weight:
    """sum mu_j Lambda~_j  ->  sum mu_j M_j Lambda_j."""
    return tuple(Fraction(c) * Mj for c, Mj in zip(mu, spec.M_simple))


def _add_characters(acc: dict, char: dict, shift: Sequence, times: int = 1) -> None:
    for w, c in char.items():
        key = tuple(a + b for a, b in zip(w, shift))
        acc[key] = acc.get(key, 0) + c * times


def sector_characters(
    rs: RootSystem,
    spec: RootOfUnitySpec,
    lam0: Sequence,
    z: Sequence[int],
    height_budget: int = DEFAULT_HEIGHT_BUDGET,
) -> tuple[dict, dict]:
    """Two computations of the finite-algebra character of L(lambda_0 + lambda_z).

    The first sums the Gram characters of every sector
    L(lambda_0 + lambda_z - sum n_i M_i alpha_i), each computed from scratch
    and weighted by the g~ multiplicity.  The second convolves the character
    of L(lambda_0) with the rescaled g~ character of highest weight z.
    """
    lam0 = as_weight(lam0)
    if not rs.is_dominant_integral(lam0) or any(c >= Mi for c, Mi in zip(lam0, spec.M_simple)):
        raise ValueError("lambda_0 must be dominant integral with (lambda_0, alpha_i^vee) < M_i")
    z = tuple(int(x) for x in z)
    if any(x < 0 for x in z):
        raise ValueError("z must be non-negative")
    dual = _dual_root_system(spec)
    gt_char = freudenthal_character(z, dual)
    by_sector: dict = {}
    for mu, mult in gt_char.items():
        shift = _rescale_dual_weight(mu, spec)
        top = tuple(a + b for a, b in zip(lam0, shift))
        rep = module_report(rs, spec, top, None, height_budget)
        if rep.truncated:
            raise ValueError(f"sector {top} exceeded the height budget")
        _add_characters(by_sector, rep.dims, (0,) * rs.rank, mult)
    base = module_report(rs, spec, lam0, None, height_budget)
    convolved: dict = {}
    for mu, mult in gt_char.items():
        _add_characters(convolved, base.dims, _rescale_dual_weight(mu, spec), mult)
    return by_sector, convolved


def tensor_character_check(rs: RootSystem, spec: RootOfUnitySpec, lam0: Sequence, z: Sequence[int]) -> bool:
    by_sector, convolved = sector_characters(rs, spec, lam0, z)
    return by_sector == convolved


# ---------------------------------------------------------------------------
# reality-preserving algebra


@dataclass(frozen=True)
class RealityAlgebra:
    kind: str  # "full", "trivial", "su2^n" or "subalgebra"
    label: str  # e.g. "C3", "trivial", "(su(2))^3", "D4"
    nodes: tuple[int, ...]  # 1-based simple roots satisfying the condition
    rank: int


def _preserving_nodes(rs: RootSystem, spec: RootOfUnitySpec) -> tuple[int, ...]:
    B = rs.symmetric
    out = []
    for j in range(rs.rank):
        Mj = spec.M_simple[j]
        if all((spec.n * Mj * B[j][i]) % spec.m == 0 for i in range(rs.rank)):
            out.append(j)
    return tuple(out)


def _inner(rs: RootSystem, a, b) -> Fraction:
    B = rs.symmetric
    return sum((Fraction(a[i]) * B[i][j] * b[j] for i in range(rs.rank) for j in range(rs.rank)), Fraction(0))


def reality_preserving_algebra(rs: RootSystem, spec: RootOfUnitySpec) -> RealityAlgebra:
    """Subalgebra of g~ generated by the root vectors that commute with every K_i.

    A simple root alpha_j qualifies when q^{M_j (alpha_j, alpha_i)} = 1 for
    all i; the Weyl group then supplies every root of the same length.  The
    generated subsystem of g~ (roots M_alpha alpha) is closed under root
    addition and its type read off from its simple roots.
    """
    nodes = _preserving_nodes(rs, spec)
    if not nodes:
        return RealityAlgebra("trivial", "trivial", (), 0)
    lengths = {rs.d[j] for j in nodes}
    pos = rs.positive_roots
    scaled = {a: tuple(spec.M_per_root[a] * c for c in a) for a in pos}
    all_roots = set(scaled.values()) | {tuple(-c for c in v) for v in scaled.values()}
    gens = {scaled[a] for a in pos if rs.root_length(a) in lengths}
    system = gens | {tuple(-c for c in v) for v in gens}
    grew = True
    while grew:
        grew = False
        for u in list(system):
            for v in list(system):
                w = tuple(x + y for x, y in zip(u, v))
                if w in all_roots and w not in system:
                    system.add(w)
                    grew = True
    if len(system) == len(all_roots):
        return RealityAlgebra("full", spec.dual_type, tuple(j + 1 for j in nodes), rs.rank)
    positive = {v for v in system if next(c for c in v if c) > 0}
    simple = sorted(
        v
        for v in positive
        if not any(tuple(x - y for x, y in zip(v, u)) in positive for u in positive)
    )
    cartan = []
    for b_i in simple:
        row = []
        for b_j in simple:
            val = 2 * _inner(rs, b_i, b_j) / _inner(rs, b_j, b_j)
            assert val.denominator == 1
            row.append(int(val))
        cartan.append(tuple(row))
    label = identify_cartan(cartan)
    comps = label.split("x")
    if all(c == "A1" for c in comps):
        return RealityAlgebra("su2^n", f"(su(2))^{len(comps)}", tuple(j + 1 for j in nodes), len(comps))
    return RealityAlgebra("subalgebra", label, tuple(j + 1 for j in nodes), len(simple))
