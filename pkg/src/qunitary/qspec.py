"""Root-of-unity data and weight-space geometry.

For q = exp(2 pi i n/m) and a root system this module computes M, the orders
M_i and M_alpha, the dual Cartan matrix, special points, singlet weights and
their sign vectors, the compact unitarity bound and the alcove test that
singles out Hermitian nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Sequence

from .qfield import Cyclotomic, QRoot, q_power
from .rootdata import (
    RootSystem,
    Weight,
    as_weight,
    coxeter_labels,
    identify_cartan,
    _symmetrizer,
)

__all__ = [
    "RealForm",
    "RootOfUnitySpec",
    "compute_spec",
    "dual_algebra",
    "special_point",
    "is_special_point",
    "hyperplane_check",
    "compact_bound",
    "compact_bound_check",
    "in_classical_regime",
    "singlet_weights",
    "singlet_p_from_z",
    "alcove_adjacency",
    "hermitian_nodes",
    "realizable_forms",
]


@dataclass(frozen=True)
class RealForm:
    """Sign vector s with (X_i^+)* = s_i X_i^-."""

    s: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(x) for x in self.s)
        if any(x not in (1, -1) for x in s):
            raise ValueError(f"real-form signs must be +1 or -1, got {self.s}")
        object.__setattr__(self, "s", s)

    @classmethod
    def compact(cls, rank: int) -> "RealForm":
        return cls((1,) * rank)

    @classmethod
    def parse(cls, text: str, rank: int) -> "RealForm":
        """``"compact"`` or a comma list such as ``"+,-"`` / ``"1,-1"``."""
        text = text.strip()
        if text == "compact":
            return cls.compact(rank)
        table = {"+": 1, "-": -1, "+1": 1, "-1": -1, "1": 1}
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != rank or any(p not in table for p in parts):
            raise ValueError(f"form {text!r} must be 'compact' or {rank} comma-separated signs like +,-")
        return cls(tuple(table[p] for p in parts))

    @property
    def is_compact(self) -> bool:
        return all(x == 1 for x in self.s)

    def __str__(self) -> str:
        return "compact" if self.is_compact else ",".join("+" if x > 0 else "-" for x in self.s)


@dataclass(frozen=True)
class RootOfUnitySpec:
    rs: RootSystem
    q: QRoot
    M: int
    parity: str
    M_simple: tuple[int, ...]
    M_per_root: dict
    d_per_root: dict
    dual_cartan: tuple[tuple[int, ...], ...]
    dual_type: str
    roles_swapped: bool

    @property
    def n(self) -> int:
        return self.q.n

    @property
    def m(self) -> int:
        return self.q.m

    @property
    def even(self) -> bool:
        return self.parity == "even"

    def __hash__(self):
        return hash((self.rs.name, self.rs.cartan, self.q))

    def __eq__(self, other):
        return isinstance(other, RootOfUnitySpec) and (self.rs.cartan, self.q) == (other.rs.cartan, other.q)


def _order_of_q_power(q: QRoot, d: int) -> int:
    """Smallest k >= 1 with q^{2 d k} = 1."""
    return q.m // gcd(q.m, 2 * d)


def compute_spec(rs: RootSystem, q: QRoot) -> RootOfUnitySpec:
    q.validate()
    m = q.m
    M = m if m % 2 else m // 2
    parity = "even" if m % 2 == 0 else "odd"
    M_simple = tuple(_order_of_q_power(q, d) for d in rs.d)
    bad = [i + 1 for i, Mi in enumerate(M_simple) if Mi == 1]
    if bad:
        raise ValueError(
            f"q = exp(2 pi i {q}) is not admissible for {rs.name}: q_i^2 = 1 on node(s) {bad}; "
            "every q^{d_i} must differ from q^{-d_i}"
        )
    d_root = {a: rs.root_length(a) for a in rs.positive_roots}
    M_root = {a: _order_of_q_power(q, d) for a, d in d_root.items()}
    A = rs.cartan
    r = rs.rank
    dual = []
    for i in range(r):
        row = []
        for j in range(r):
            val = Fraction(M_simple[i] * A[i][j], M_simple[j])
            if val.denominator != 1:
                raise AssertionError("dual Cartan entry is not an integer")
            row.append(int(val))
        dual.append(tuple(row))
    dual = tuple(dual)
    d_dual = _symmetrizer(dual)
    swapped = any(
        (rs.d[i] - rs.d[j]) * (d_dual[i] - d_dual[j]) < 0 for i in range(r) for j in range(r)
    )
    return RootOfUnitySpec(
        rs=rs,
        q=q,
        M=M,
        parity=parity,
        M_simple=M_simple,
        M_per_root=M_root,
        d_per_root=d_root,
        dual_cartan=dual,
        dual_type=identify_cartan(dual),
        roles_swapped=swapped,
    )


def dual_algebra(spec: RootOfUnitySpec) -> tuple[tuple[tuple[int, ...], ...], str]:
    return spec.dual_cartan, spec.dual_type


def special_point(z: Sequence[int], spec: RootOfUnitySpec) -> Weight:
    """lambda_z = sum_i z_i M_i Lambda_i."""
    return tuple(Fraction(int(zi) * Mi) for zi, Mi in zip(z, spec.M_simple))


def is_special_point(weight: Sequence, spec: RootOfUnitySpec) -> bool:
    lam = as_weight(weight)
    return all((c / Mi).denominator == 1 for c, Mi in zip(lam, spec.M_simple))


def hyperplane_check(weight: Sequence, spec: RootOfUnitySpec) -> bool:
    """True iff (lambda, alpha^vee) lies in M_alpha Z for every positive root."""
    lam = as_weight(weight)
    rs = spec.rs
    return all(
        (rs.coroot_pairing(lam, a) / spec.M_per_root[a]).denominator == 1 for a in rs.positive_roots
    )


def compact_bound(spec: RootOfUnitySpec, root: Sequence[int]) -> int:
    """floor(m / (2 n d_alpha)) + 1, the largest admissible (lambda+rho, alpha^vee)."""
    d_a = spec.d_per_root[tuple(root)]
    return floor(Fraction(spec.m, 2 * spec.n * d_a)) + 1


def compact_bound_check(weight: Sequence, spec: RootOfUnitySpec) -> bool:
    lam = as_weight(weight)
    rs = spec.rs
    if not rs.is_dominant_integral(lam):
        raise ValueError("compact_bound_check needs a dominant integral weight")
    shifted = tuple(c + 1 for c in lam)
    return all(rs.coroot_pairing(shifted, a) <= compact_bound(spec, a) for a in rs.positive_roots)


def in_classical_regime(weight: Sequence, spec: RootOfUnitySpec) -> bool:
    """(lambda+rho, alpha^vee) <= M_alpha for every positive root (classical character regime)."""
    lam = as_weight(weight)
    rs = spec.rs
    shifted = tuple(c + 1 for c in lam)
    return all(rs.coroot_pairing(shifted, a) <= spec.M_per_root[a] for a in rs.positive_roots)


def singlet_weights(rs: RootSystem, spec: RootOfUnitySpec, p: Sequence[int]) -> tuple[Weight, RealForm]:
    """Singlet weight lambda_r = sum_i p_i m/(2 n d_i) Lambda_i and its sign vector.

    s_i = <K_i, lambda_r> = q^{d_i (lambda_r)_i}, evaluated in the cyclotomic
    field and checked to be +1 or -1.
    """
    if len(p) != rs.rank:
        raise ValueError(f"shift vector needs {rs.rank} entries, got {len(p)}")
    p = tuple(int(x) for x in p)
    lam_r = tuple(Fraction(pi * spec.m, 2 * spec.n * d) for pi, d in zip(p, rs.d))
    N = 2 * spec.m
    one = Cyclotomic.one(N)
    signs = []
    for i in range(rs.rank):
        val = q_power(spec.q, rs.d[i] * lam_r[i], N)
        if val == one:
            signs.append(1)
        elif val == -one:
            signs.append(-1)
        else:
            raise AssertionError(f"K_{i + 1} eigenvalue on lambda_r is not +-1")
    return lam_r, RealForm(tuple(signs))


def singlet_p_from_z(z: Sequence[int], spec: RootOfUnitySpec) -> tuple[int, ...]:
    """The p-vector of the integral singlet lambda_z = sum z_i M_i Lambda_i."""
    out = []
    for zi, Mi, d in zip(z, spec.M_simple, spec.rs.d):
        p = Fraction(2 * spec.n * d * Mi * int(zi), spec.m)
        assert p.denominator == 1
        out.append(int(p))
    return tuple(out)


def _p_coordinates(lam_r: Weight, spec: RootOfUnitySpec) -> tuple[int, ...]:
    out = []
    for c, d in zip(lam_r, spec.rs.d):
        p = c * 2 * spec.n * d / spec.m
        if p.denominator != 1:
            raise ValueError(
                f"{lam_r} is not a singlet weight: coordinate {c} is not a multiple of m/(2 n d_i)"
            )
        out.append(int(p))
    return tuple(out)


def alcove_adjacency(lam_r: Sequence, rs: RootSystem, spec: RootOfUnitySpec) -> tuple[int | None, int] | None:
    """Decide whether the singlet lambda_r sits at a corner of an alcove touching the origin.

    Returns ``(i0, sign)`` with a 1-based node ``i0`` when lambda_r is Weyl
    conjugate to -(m/2nd_{i0}) Lambda_{i0} with Coxeter label 1; sign is +1
    if lambda_r is dominant and -1 otherwise.  ``(None, 0)`` means
    lambda_r = 0.  ``None`` means not adjacent.
    """
    lam = as_weight(lam_r)
    p = list(_p_coordinates(lam, spec))
    if not any(p):
        return (None, 0)
    labels = coxeter_labels(rs)
    # sort to the antidominant chamber; p transforms like lambda under the
    # reflections because p_j is lambda_j rescaled by d_j
    cur = list(lam)
    while True:
        i = next((k for k in range(rs.rank) if cur[k] > 0), None)
        if i is None:
            break
        cur = list(rs.reflect(cur, i))
    pa = _p_coordinates(tuple(cur), spec)
    nonzero = [k for k, x in enumerate(pa) if x]
    if len(nonzero) != 1 or pa[nonzero[0]] != -1 or labels[nonzero[0]] != 1:
        return None
    i0 = nonzero[0]
    if all(c >= 0 for c in lam):
        # dominant: -w0 maps the antidominant corner to a node of the same label
        dom = [k for k, x in enumerate(p) if x]
        return (dom[0] + 1, 1)
    return (i0 + 1, -1)


def _hermitian_name(series: str, l: int, node: int) -> str:
    if series == "A":
        return f"su({l + 1 - node},{node})"
    if series == "B":
        return f"so({2 * l - 1},2)"
    if series == "C":
        return f"sp({l},R)"
    if series == "D":
        return f"so({2 * l - 2},2)" if node == 1 else f"so*({2 * l})"
    if series == "E" and l == 6:
        return "E6(-14)"
    if series == "E" and l == 7:
        return "E7(-25)"
    return "?"


def hermitian_nodes(rs: RootSystem) -> list[tuple[int, str]]:
    """Nodes (1-based) with Coxeter label 1 and the noncompact real form they select."""
    labels = coxeter_labels(rs)
    return [
        (i + 1, _hermitian_name(rs.series, rs.rank, i + 1)) for i, a in enumerate(labels) if a == 1
    ]


def realizable_forms(rs: RootSystem, spec: RootOfUnitySpec) -> list[RealForm]:
    """Sign vectors reached by integral singlets lambda_z (z_i in {0,1} suffices)."""
    seen = set()
    for mask in range(2 ** rs.rank):
        z = [(mask >> i) & 1 for i in range(rs.rank)]
        _, form = singlet_weights(rs, spec, singlet_p_from_z(z, spec))
        seen.add(form.s)
    return [RealForm(s) for s in sorted(seen, reverse=True)]
