"""Contravariant forms on highest-weight modules of the finite quantum group.

Vectors of the Verma module are words F_{i_1} ... F_{i_k} v in the simple
lowering operators.  The form is fixed by <v, v> = 1 and

    <F_i u, w> = s_i <u, E_i w>,    E_i F_j = F_j E_i + delta_ij [H_i]_{q_i},

where [H_i] acts on a vector of weight mu by [(mu, alpha_i^vee)]_{q_i}.  The
irreducible module is the quotient by the radical, so its weight
multiplicities are Gram ranks and unitarity is positive semidefiniteness.

Two engines are provided.  ``GramEngine`` materialises the Gram matrix on all
words of a weight space (vectorised over integer coefficient arrays) and is
what block-level comparisons use.  ``module_report`` works in the quotient,
keeping only a nondegenerate basis per weight space, which keeps the cost
proportional to the size of the irreducible module.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .qfield import (
    Cyclotomic,
    QRoot,
    _power_table,
    _degree,
    _qint_denominator_inverse,
    qint_rational,
    sign_of_real,
)
from .qspec import (
    RealForm,
    RootOfUnitySpec,
    compute_spec,
    in_classical_regime,
    singlet_weights,
)
from .rootdata import RootSystem, Weight, as_weight, coxeter_labels, freudenthal_character

__all__ = [
    "GramBlock",
    "ModuleReport",
    "GramEngine",
    "NotShiftReachable",
    "ambient_conductor",
    "words",
    "gram_block",
    "inertia",
    "module_report",
    "shift_decompose",
    "verify_shift_equivalence",
    "classical_character_check",
    "character_stability_scan",
    "classical_limit_scan",
    "DEFAULT_HEIGHT_BUDGET",
]

DEFAULT_HEIGHT_BUDGET = 40
_INT64_SAFE = 2**62


class NotShiftReachable(ValueError):
    """The weight has no decomposition lambda_0 + lambda_r of the required shape."""


@dataclass(frozen=True)
class GramBlock:
    weight: Weight
    content: tuple[int, ...]
    words: tuple[tuple[int, ...], ...]
    matrix: tuple[tuple[Cyclotomic, ...], ...]
    rank: int
    signature: tuple[int, int, int]  # (n_plus, n_zero, n_minus)


@dataclass(frozen=True)
class ModuleReport:
    lam: Weight
    form: RealForm
    spec: RootOfUnitySpec
    dims: dict  # weight -> rank, ordered by (height, content); zero ranks omitted
    total_dim: int
    unitary: bool
    classical_character: bool | None
    truncated: bool
    heights: int = 0
    signatures: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# helpers


def ambient_conductor(spec: RootOfUnitySpec, lam: Sequence) -> int:
    """Smallest N with m | N such that every q^{d_i lambda_i} lies in Q(zeta_N)."""
    N = spec.m
    for d, c in zip(spec.rs.d, lam):
        phase = Fraction(spec.n * d) * Fraction(c) / spec.m
        N = lcm(N, phase.denominator)
    return N


def _check_weight(lam, rs: RootSystem) -> Weight:
    try:
        w = as_weight(lam)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"weight must have rational coordinates, got {lam!r}") from exc
    if len(w) != rs.rank:
        raise ValueError(f"weight needs {rs.rank} coordinates, got {len(w)}")
    return w


def _unit(r: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(r))


def _minus(n: Sequence[int], i: int) -> tuple[int, ...]:
    out = list(n)
    out[i] -= 1
    return tuple(out)


def _plus(n: Sequence[int], i: int) -> tuple[int, ...]:
    out = list(n)
    out[i] += 1
    return tuple(out)


@lru_cache(maxsize=None)
def words(content: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """All words with letter counts ``content``, in lexicographic order."""
    if not any(content):
        return ((),)
    out = []
    for i, c in enumerate(content):
        if c:
            out.extend((i,) + w for w in words(_minus(content, i)))
    return tuple(out)


@lru_cache(maxsize=None)
def _word_index(content: tuple[int, ...]) -> dict:
    return {w: k for k, w in enumerate(words(content))}


@lru_cache(maxsize=None)
def _contractions(cartan: tuple, content: tuple[int, ...], i: int):
    """Sparse pattern of E_i : W(content) -> W(content - e_i).

    Returns arrays (rows, cols, shifts): removing letter ``i`` at some
    position of word ``cols`` leaves word ``rows``, and the [H_i] factor is
    [lambda_i - shift]_{q_i}.
    """
    parent = _word_index(_minus(content, i))
    rows, cols, shifts = [], [], []
    for c, w in enumerate(words(content)):
        tail = 0
        for p in range(len(w) - 1, -1, -1):
            if w[p] == i:
                rows.append(parent[w[:p] + w[p + 1:]])
                cols.append(c)
                shifts.append(tail)
            tail += cartan[w[p]][i]
    return np.array(rows, dtype=np.intp), np.array(cols, dtype=np.intp), tuple(shifts)


@lru_cache(maxsize=None)
def _mult_tensor(N: int) -> np.ndarray:
    """T[j, l] = zeta_N^{j+l} in the power basis, reshaped to (phi*phi, phi)."""
    phi = _degree(N)
    table = _power_table(N)
    T = np.array([[table[j + l] for l in range(phi)] for j in range(phi)], dtype=np.int64)
    return T.reshape(phi * phi, phi)


@lru_cache(maxsize=None)
def _lift_matrix(m: int, N: int) -> np.ndarray:
    step = N // m
    table = _power_table(N)
    return np.array([table[(k * step) % N] for k in range(_degree(m))], dtype=np.int64)


def _maxabs(a: np.ndarray) -> int:
    return int(np.max(np.abs(a))) if a.size else 0


def _cyc_matmul(X: np.ndarray, Y: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Matrix product of cyclotomic numerator arrays of shapes (u,a,phi), (a,w,phi)."""
    u, a, phi = X.shape
    w = Y.shape[1]
    bound = _maxabs(X) * _maxabs(Y) * max(a, 1) * phi * phi * max(_maxabs(T), 1)
    if bound >= _INT64_SAFE or X.dtype == object or Y.dtype == object:
        X, Y, T = X.astype(object), Y.astype(object), T.astype(object)
    tmp = np.tensordot(X, Y, axes=([1], [0]))  # (u, phi, w, phi)
    tmp = tmp.transpose(0, 2, 1, 3).reshape(u * w, phi * phi)
    return (tmp @ T).reshape(u, w, phi)


def _to_cyclotomic(vec: Iterable, N: int, den: int) -> Cyclotomic:
    return Cyclotomic._make(N, [int(x) for x in vec], den)


# ---------------------------------------------------------------------------
# exact symmetric linear algebra over the real cyclotomic subfield


def inertia(matrix: Sequence[Sequence[Cyclotomic]]) -> tuple[int, int, int]:
    """(n_plus, n_zero, n_minus) of a real symmetric cyclotomic matrix.

    Symmetric Gaussian elimination with exact zero tests; when every remaining
    diagonal entry vanishes a congruence row_i += row_j (and the same on
    columns) creates the nonzero pivot 2 a_ij.
    """
    a = [list(row) for row in matrix]
    size = len(a)
    active = list(range(size))
    plus = minus = 0
    while active:
        k = next((i for i in active if not a[i][i].is_zero()), None)
        if k is None:
            pair = next(
                ((i, j) for i in active for j in active if j > i and not a[i][j].is_zero()), None
            )
            if pair is None:
                break
            i, j = pair
            for t in active:
                a[i][t] = a[i][t] + a[j][t]
            for t in active:
                a[t][i] = a[t][i] + a[t][j]
            k = i
        piv = a[k][k]
        if sign_of_real(piv) > 0:
            plus += 1
        else:
            minus += 1
        inv = piv.inverse()
        active.remove(k)
        for i in active:
            if a[i][k].is_zero():
                continue
            f = a[i][k] * inv
            row_k = a[k]
            row_i = a[i]
            for j in active:
                if not row_k[j].is_zero():
                    row_i[j] = row_i[j] - f * row_k[j]
    return plus, size - plus - minus, minus


def _rref(matrix: list[list[Cyclotomic]]) -> tuple[list[int], list[list[Cyclotomic]]]:
    """Reduced row echelon form; returns pivot columns and the nonzero rows."""
    a = [list(row) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv if not x.is_zero() else x for x in a[r]]
        for i in range(rows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y if not y.is_zero() else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots, a[:r]


# ---------------------------------------------------------------------------
# full word engine


class GramEngine:
    """Gram matrices on all words of each weight space of the Verma module.

    Entries are stored as integer numerator arrays of shape (words, words,
    phi(N)) with the implied denominator D^height.
    """

    def __init__(self, rs: RootSystem, spec: RootOfUnitySpec, lam, form: RealForm | None = None):
        self.rs = rs
        self.spec = spec
        self.lam = _check_weight(lam, rs)
        self.form = form or RealForm.compact(rs.rank)
        if len(self.form.s) != rs.rank:
            raise ValueError("real form has the wrong length")
        self.N = ambient_conductor(spec, self.lam)
        self.phi = _degree(self.N)
        self.T = _mult_tensor(self.N)
        den = 1
        for i, c in enumerate(self.lam):
            if Fraction(c).denominator != 1:
                den = lcm(den, _qint_denominator_inverse(spec.q, rs.d[i], self.N).denominator)
        self.D = den
        self._coef: dict[tuple[int, int], np.ndarray] = {}
        zero = tuple([0] * rs.rank)
        one = np.zeros((1, 1, self.phi), dtype=np.int64)
        one[0, 0, 0] = 1
        self._levels: dict[tuple[int, ...], np.ndarray] = {zero: one}

    def _coefficient(self, i: int, shift: int) -> np.ndarray:
        key = (i, shift)
        vec = self._coef.get(key)
        if vec is None:
            val = qint_rational(self.lam[i] - shift, self.rs.d[i], self.spec.q, self.N)
            scaled = Fraction(self.D, val.denominator)
            assert scaled.denominator == 1
            vec = np.array([c * int(scaled) for c in val.numerators], dtype=object)
            if _maxabs(vec) < _INT64_SAFE:
                vec = vec.astype(np.int64)
            self._coef[key] = vec
        return vec

    def _contraction_matrix(self, content: tuple[int, ...], i: int) -> np.ndarray:
        rows, cols, shifts = _contractions(self.rs.cartan, content, i)
        a = len(words(_minus(content, i)))
        b = len(words(content))
        vals = [self._coefficient(i, s) for s in shifts]
        dtype = object if any(v.dtype == object for v in vals) else np.int64
        E = np.zeros((a, b, self.phi), dtype=dtype)
        if vals:
            np.add.at(E, (rows, cols), np.array(vals, dtype=dtype))
        return E

    def numerators(self, content: Sequence[int]) -> np.ndarray:
        """Numerator array of the Gram block at ``content`` (denominator D^height)."""
        content = tuple(int(x) for x in content)
        if any(x < 0 for x in content) or len(content) != self.rs.rank:
            raise ValueError(f"target must be {self.rs.rank} non-negative integers, got {content}")
        got = self._levels.get(content)
        if got is not None:
            return got
        parts = []
        for i, c in enumerate(content):
            if c:
                parent = self.numerators(_minus(content, i))
                E = self._contraction_matrix(content, i)
                block = _cyc_matmul(parent, E, self.T)
                if self.form.s[i] < 0:
                    block = -block
                parts.append(block)
        G = np.concatenate(parts, axis=0)
        if G.dtype == object and _maxabs(G) < _INT64_SAFE:
            G = G.astype(np.int64)
        self._levels[content] = G
        return G

    def denominator(self, content: Sequence[int]) -> int:
        return self.D ** sum(content)

    def matrix(self, content: Sequence[int]) -> list[list[Cyclotomic]]:
        G = self.numerators(content)
        den = self.denominator(content)
        return [[_to_cyclotomic(G[u, w], self.N, den) for w in range(G.shape[1])] for u in range(G.shape[0])]


def gram_block(rs: RootSystem, spec: RootOfUnitySpec, lam, form: RealForm | None, target: Sequence[int]) -> GramBlock:
    """Gram matrix of the weight space lambda - sum target_i alpha_i on all words."""
    engine = GramEngine(rs, spec, lam, form)
    content = tuple(int(x) for x in target)
    mat = engine.matrix(content)
    plus, zero, minus = inertia(mat)
    return GramBlock(
        weight=rs.subtract_roots(engine.lam, content),
        content=content,
        words=words(content),
        matrix=tuple(tuple(row) for row in mat),
        rank=plus + minus,
        signature=(plus, zero, minus),
    )


# ---------------------------------------------------------------------------
# quotient engine


@dataclass
class _Level:
    basis: list  # candidate keys (letter, parent basis index)
    words: list  # representative word of each basis vector
    gram: list  # nondegenerate Gram matrix on the basis
    ecoords: list  # per basis vector: {i: coordinates of E_i b in the basis of content - e_i}
    cand: dict  # candidate key -> coordinates in this level's basis
    signature: tuple = (0, 0, 0)


class _QuotientModule:
    def __init__(self, rs: RootSystem, spec: RootOfUnitySpec, lam: Weight, form: RealForm):
        self.rs, self.spec, self.lam, self.form = rs, spec, lam, form
        self.N = ambient_conductor(spec, lam)
        self.zero = Cyclotomic.zero(self.N)
        self._coef: dict[tuple[int, Fraction], Cyclotomic] = {}
        r = rs.rank
        origin = tuple([0] * r)
        self.levels: dict[tuple[int, ...], _Level] = {
            origin: _Level([None], [()], [[Cyclotomic.one(self.N)]], [{}], {}, (1, 0, 0))
        }

    def coefficient(self, i: int, content: Sequence[int]) -> Cyclotomic:
        """[(mu, alpha_i^vee)]_{q_i} for mu = lambda - content.alpha."""
        A = self.rs.cartan
        x = self.lam[i] - sum(content[t] * A[t][i] for t in range(self.rs.rank))
        key = (i, x)
        val = self._coef.get(key)
        if val is None:
            val = qint_rational(x, self.rs.d[i], self.spec.q, self.N)
            self._coef[key] = val
        return val

    def _level(self, n) -> _Level | None:
        if min(n) < 0:
            return None
        lvl = self.levels.get(n)
        return lvl if lvl is not None and lvl.basis else None

    def build(self, n: tuple[int, ...]) -> _Level:
        r = self.rs.rank
        zero = self.zero
        cands = []
        for j in range(r):
            if n[j]:
                parent = self._level(_minus(n, j))
                if parent:
                    cands.extend((j, k) for k in range(len(parent.basis)))
        if not cands:
            lvl = _Level([], [], [], [], {})
            self.levels[n] = lvl
            return lvl
        # E_i applied to each candidate, in coordinates of level n - e_i
        ecand = []
        for j, k in cands:
            src = self._level(_minus(n, j))
            per = {}
            for i in range(r):
                if not n[i]:
                    continue
                target = self._level(_minus(n, i))
                if target is None:
                    per[i] = []
                    continue
                vec = [zero] * len(target.basis)
                z = src.ecoords[k].get(i)
                if z:
                    for l, zl in enumerate(z):
                        if zl.is_zero():
                            continue
                        coords = target.cand[(j, l)]
                        for t, ct in enumerate(coords):
                            if not ct.is_zero():
                                vec[t] = vec[t] + zl * ct
                if i == j:
                    vec[k] = vec[k] + self.coefficient(i, _minus(n, j))
                per[i] = vec
            ecand.append(per)
        # <(i,k), c> = s_i (G_{n-e_i} E_i c)[k]
        size = len(cands)
        gram = [[zero] * size for _ in range(size)]
        for a, (i, k) in enumerate(cands):
            parent = self._level(_minus(n, i))
            row_k = parent.gram[k]
            s = self.form.s[i]
            for b in range(size):
                vec = ecand[b][i]
                acc = zero
                for t, v in enumerate(vec):
                    if not v.is_zero() and not row_k[t].is_zero():
                        acc = acc + row_k[t] * v
                gram[a][b] = acc if s > 0 else -acc
        pivots, rows = _rref(gram)
        basis = [cands[p] for p in pivots]
        lvl = _Level(
            basis=basis,
            words=[(j,) + self._level(_minus(n, j)).words[k] for j, k in basis],
            gram=[[gram[p][q] for q in pivots] for p in pivots],
            ecoords=[ecand[p] for p in pivots],
            cand={c: [rows[t][b] for t in range(len(pivots))] for b, c in enumerate(cands)},
        )
        if basis:
            lvl.signature = inertia(lvl.gram)
        self.levels[n] = lvl
        return lvl


def _validate_form(form: RealForm | None, rs: RootSystem) -> RealForm:
    form = form or RealForm.compact(rs.rank)
    if len(form.s) != rs.rank:
        raise ValueError(f"real form needs {rs.rank} signs")
    return form


def module_report(
    rs: RootSystem,
    spec: RootOfUnitySpec,
    lam,
    form: RealForm | None = None,
    height_budget: int = DEFAULT_HEIGHT_BUDGET,
) -> ModuleReport:
    """Weight multiplicities and unitarity of the irreducible module L(lambda)."""
    lam = _check_weight(lam, rs)
    form = _validate_form(form, rs)
    if height_budget < 0:
        raise ValueError("height budget must be non-negative")
    mod = _QuotientModule(rs, spec, lam, form)
    r = rs.rank
    frontier = [tuple([0] * r)]
    truncated = False
    height = 0
    while frontier:
        if height == height_budget:
            truncated = True
            break
        height += 1
        nxt = sorted({_plus(n, i) for n in frontier for i in range(r)})
        frontier = [n for n in nxt if mod.build(n).basis]
    dims = {}
    sigs = {}
    unitary = True
    for n in sorted(mod.levels, key=lambda c: (sum(c), c)):
        lvl = mod.levels[n]
        if lvl.basis:
            w = rs.subtract_roots(lam, n)
            dims[w] = len(lvl.basis)
            sigs[w] = lvl.signature
            if lvl.signature[2]:
                unitary = False
    classical = None
    if rs.is_dominant_integral(lam) and not truncated:
        classical = dims == freudenthal_character(lam, rs)
    return ModuleReport(
        lam=lam,
        form=form,
        spec=spec,
        dims=dims,
        total_dim=sum(dims.values()),
        unitary=unitary,
        classical_character=classical,
        truncated=truncated,
        heights=height,
        signatures=sigs,
    )


# ---------------------------------------------------------------------------
# shifts and cross-checks


def shift_decompose(lam, rs: RootSystem, spec: RootOfUnitySpec) -> tuple[Weight, Weight]:
    """Split lambda = lambda_0 + lambda_r with 0 <= (lambda_0)_i < M_i integral and lambda_r a singlet.

    Raises NotShiftReachable when no such split exists.
    """
    lam = _check_weight(lam, rs)
    lam0, lam_r = [], []
    for i, c in enumerate(lam):
        step = Fraction(spec.m, 2 * spec.n * rs.d[i])
        Mi = spec.M_simple[i]
        found = None
        # p ranges over the integers with 0 <= c - p*step < M_i
        lo = (c - Mi) / step
        p = int(lo // 1) + 1 if lo.denominator == 1 else -(-lo.numerator // lo.denominator)
        while p * step <= c:
            rest = c - p * step
            if rest.denominator == 1 and 0 <= rest < Mi:
                found = (rest, p * step)
                break
            p += 1
        if found is None:
            raise NotShiftReachable(
                f"coordinate {c} of {tuple(str(x) for x in lam)} is not an integer in [0, {Mi}) "
                f"plus a multiple of {step}"
            )
        lam0.append(found[0])
        lam_r.append(found[1])
    return tuple(lam0), tuple(lam_r)


def _contents_up_to(rank: int, height: int):
    out = [()]
    for _ in range(rank):
        out = [c + (k,) for c in out for k in range(height + 1)]
    return sorted((c for c in out if sum(c) <= height), key=lambda c: (sum(c), c))


def _blocks_equal(a: GramEngine, b: GramEngine, content) -> bool:
    """Exact entrywise equality of two Gram blocks, lifting to a common conductor."""
    Ga, Gb = a.numerators(content), b.numerators(content)
    if Ga.shape != Gb.shape:
        return False
    N = lcm(a.N, b.N)
    if a.N != N:
        Ga = np.tensordot(Ga.astype(object), _lift_matrix(a.N, N).astype(object), axes=([2], [0]))
    if b.N != N:
        Gb = np.tensordot(Gb.astype(object), _lift_matrix(b.N, N).astype(object), axes=([2], [0]))
    da, db = a.denominator(content), b.denominator(content)
    if da == db:
        return bool(np.array_equal(Ga, Gb))
    return bool(np.array_equal(Ga.astype(object) * db, Gb.astype(object) * da))


def verify_shift_equivalence(
    rs: RootSystem, spec: RootOfUnitySpec, lam0, p: Sequence[int], height: int = 8
) -> bool:
    """Twisted Gram blocks of lambda_0 + lambda_r equal the compact blocks of lambda_0.

    The twist is the real form of the singlet lambda_r defined by ``p``; every
    weight space of height at most ``height`` is compared entry by entry.
    """
    lam0 = _check_weight(lam0, rs)
    lam_r, form = singlet_weights(rs, spec, p)
    compact = _compact_engine(rs, spec, lam0)
    twisted = GramEngine(rs, spec, tuple(a + b for a, b in zip(lam0, lam_r)), form)
    return all(_blocks_equal(twisted, compact, c) for c in _contents_up_to(rs.rank, height))


@lru_cache(maxsize=64)
def _compact_engine(rs: RootSystem, spec: RootOfUnitySpec, lam0: Weight) -> GramEngine:
    return GramEngine(rs, spec, lam0, RealForm.compact(rs.rank))


def classical_character_check(report: ModuleReport, rs: RootSystem) -> bool:
    """Do the Gram ranks reproduce the classical Weyl character?

    Raises AssertionError if the classical-character hypothesis
    (lambda+rho, alpha^vee) <= M_alpha holds but the ranks disagree.
    """
    if report.truncated:
        raise ValueError("classical_character_check needs an untruncated report")
    if not rs.is_dominant_integral(report.lam):
        raise ValueError("classical_character_check needs a dominant integral weight")
    agree = report.dims == freudenthal_character(report.lam, rs)
    if in_classical_regime(report.lam, report.spec) and not agree:
        raise AssertionError(
            f"Gram ranks of {report.lam} at q={report.spec.q} differ from the classical character "
            "although (lambda+rho, alpha^vee) <= M_alpha for all positive roots"
        )
    return agree


def character_stability_scan(
    rs: RootSystem,
    lam,
    spec: RootOfUnitySpec,
    samples: Sequence[QRoot],
    height_budget: int = DEFAULT_HEIGHT_BUDGET,
) -> list[dict]:
    """Compare the Gram character with the classical one at sampled q' below q.

    Only a finite sample of the open interval 0 < n'/m' < n/m is examined, so
    a clean result is evidence, not proof.
    """
    lam = _check_weight(lam, rs)
    if not rs.is_dominant_integral(lam):
        raise ValueError("character_stability_scan needs a dominant integral weight")
    top = Fraction(spec.n, spec.m)
    classical = freudenthal_character(lam, rs)
    out = []
    for qs in samples:
        qs.validate()
        if not 0 < Fraction(qs.n, qs.m) < top:
            raise ValueError(f"sample {qs} lies outside the open interval (0, {top})")
        try:
            sub = compute_spec(rs, qs)
        except ValueError as exc:
            out.append({"q": str(qs), "admissible": False, "stable": None, "reason": str(exc)})
            continue
        rep = module_report(rs, sub, lam, None, height_budget)
        out.append(
            {
                "q": str(qs),
                "admissible": True,
                "stable": (not rep.truncated) and rep.dims == classical,
                "total_dim": rep.total_dim,
                "classical_dim": sum(classical.values()),
                "truncated": rep.truncated,
            }
        )
    return out


def classical_limit_scan(
    rs: RootSystem,
    lam,
    i0: int,
    base: QRoot,
    k_max: int,
    height_budget: int = DEFAULT_HEIGHT_BUDGET,
) -> list[dict]:
    """Unitarity of L(lambda) along q_k = exp(2 pi i n/m_k), m_k = m + 2 n k d_{i0}.

    ``i0`` is a 1-based node with Coxeter label 1.  The real form flips the
    sign of node i0 only.  At each stage lambda is split as lambda_0 + lambda_r
    with lambda_r = -(m_k/2nd_{i0}) Lambda_{i0}; lambda_0 must be dominant
    integral.  The verdict is computed on the twisted module directly and
    cross-checked against the compact module of lambda_0.
    """
    lam = _check_weight(lam, rs)
    if not 1 <= i0 <= rs.rank:
        raise ValueError(f"node {i0} out of range 1..{rs.rank}")
    if coxeter_labels(rs)[i0 - 1] != 1:
        raise ValueError(f"node {i0} has Coxeter label {coxeter_labels(rs)[i0 - 1]}, need 1")
    for j, c in enumerate(lam):
        if j != i0 - 1 and (c.denominator != 1 or c < 0):
            raise ValueError("lambda must be dominant integral on the compact nodes")
    d0 = rs.d[i0 - 1]
    out = []
    for k in range(k_max + 1):
        qk = QRoot.of(base.n, base.m + 2 * base.n * k * d0)
        spec = compute_spec(rs, qk)
        p = tuple(-1 if j == i0 - 1 else 0 for j in range(rs.rank))
        lam_r, form = singlet_weights(rs, spec, p)
        lam0 = tuple(a - b for a, b in zip(lam, lam_r))
        if not rs.is_dominant_integral(lam0):
            raise ValueError(
                f"stage k={k}: lambda - lambda_r = {tuple(str(x) for x in lam0)} is not dominant integral"
            )
        twisted = module_report(rs, spec, lam, form, height_budget)
        compact = module_report(rs, spec, lam0, None, height_budget)
        if not (twisted.truncated or compact.truncated) and (
            twisted.unitary != compact.unitary or twisted.total_dim != compact.total_dim
        ):
            raise AssertionError(f"stage k={k}: twisted and compact modules disagree")
        out.append(
            {
                "k": k,
                "q": str(qk),
                "lambda_0": lam0,
                "form": form,
                "unitary": twisted.unitary,
                "total_dim": twisted.total_dim,
                "truncated": twisted.truncated,
            }
        )
    return out
