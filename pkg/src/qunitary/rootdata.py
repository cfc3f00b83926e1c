"""Root systems of the finite simple Lie algebras and classical characters.

Conventions
-----------
Simple roots are numbered as in Bourbaki's tables (frozen below).  The Cartan
matrix follows the convention ``A[i][j] = 2 (a_i, a_j) / (a_j, a_j)``, i.e.
``A[i][j] = (alpha_i, alpha_j^vee)``, so that the row ``A[i]`` is alpha_i written
in the fundamental-weight basis and ``(alpha_i, alpha_j) = d_j A[i][j]``.  The
integers ``d_i = (alpha_i, alpha_i)/2`` are normalised to be coprime (short
roots have ``d = 1``).

Roots are integer vectors in the simple-root basis.  Weights are tuples of
``Fraction`` in the fundamental-weight basis.

Node numbering (Bourbaki)::

    A_l  1 - 2 - ... - l
    B_l  1 - 2 - ... - (l-1) => l        alpha_l short
    C_l  1 - 2 - ... - (l-1) <= l        alpha_l long
    D_l  1 - 2 - ... - (l-2) - (l-1), (l-2) - l
    E_l  1 - 3 - 4 - 5 - ... - l, 2 - 4
    F_4  1 - 2 => 3 - 4                  alpha_1, alpha_2 long
    G_2  1 <= 2                          alpha_1 short, alpha_2 long
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "Weight",
    "RootSystem",
    "build_root_system",
    "parse_algebra",
    "as_weight",
    "pairing",
    "weyl_dimension",
    "freudenthal_character",
    "coxeter_labels",
    "dynkin_bipartition",
    "identify_cartan",
    "VALID_TYPES",
]

Weight = tuple  # tuple[Fraction, ...] in the fundamental-weight basis

VALID_TYPES = "A_l (l>=1), B_l (l>=2), C_l (l>=2), D_l (l>=4), E6, E7, E8, F4, G2"


def as_weight(coords: Iterable) -> Weight:
    return tuple(Fraction(c) for c in coords)


def _standard_diagram(series: str, rank: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Root lengths d_i and bonds (0-based) of the Bourbaki diagram."""
    s, l = series, rank
    ok = (
        (s == "A" and l >= 1)
        or (s in "BC" and l >= 2)
        or (s == "D" and l >= 4)
        or (s == "E" and l in (6, 7, 8))
        or (s == "F" and l == 4)
        or (s == "G" and l == 2)
    )
    if not ok:
        raise ValueError(f"{series}{rank} is not a finite simple type; valid types: {VALID_TYPES}")
    path = [(i, i + 1) for i in range(l - 1)]
    if s == "A":
        return [1] * l, path
    if s == "B":
        return [2] * (l - 1) + [1], path
    if s == "C":
        return [1] * (l - 1) + [2], path
    if s == "D":
        return [1] * l, [(i, i + 1) for i in range(l - 2)] + [(l - 3, l - 1)]
    if s == "E":
        bonds = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, l - 1)]
        return [1] * l, bonds
    if s == "F":
        return [2, 2, 1, 1], path
    return [1, 3], path  # G2


def _cartan_from_diagram(d: Sequence[int], bonds: Sequence[tuple[int, int]]) -> tuple[tuple[int, ...], ...]:
    r = len(d)
    sym = [[0] * r for _ in range(r)]
    for i in range(r):
        sym[i][i] = 2 * d[i]
    for i, j in bonds:
        sym[i][j] = sym[j][i] = -max(d[i], d[j])
    return tuple(tuple(2 * sym[i][j] // sym[j][j] for j in range(r)) for i in range(r))


def _symmetrizer(cartan: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Coprime positive d with d_j A[i][j] = d_i A[j][i]."""
    r = len(cartan)
    ratio: list[Fraction | None] = [None] * r
    for start in range(r):
        if ratio[start] is not None:
            continue
        ratio[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(r):
                if j != i and cartan[i][j] != 0 and ratio[j] is None:
                    # d_j A_ij = d_i A_ji
                    ratio[j] = ratio[i] * Fraction(cartan[j][i], cartan[i][j])
                    queue.append(j)
    den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in ratio), 1)
    ints = [int(f * den) for f in ratio]
    g = reduce(gcd, ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class RootSystem:
    """Finite root system determined by a Cartan matrix.

    ``series`` and ``rank`` are informational labels; all structure is derived
    from ``cartan``.
    """

    series: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    d: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.d:
            object.__setattr__(self, "d", _symmetrizer(self.cartan))
        A, d = self.cartan, self.d
        for i in range(self.rank):
            if A[i][i] != 2:
                raise ValueError("Cartan matrix needs 2 on the diagonal")
            for j in range(self.rank):
                if i != j and (A[i][j] > 0 or (A[i][j] == 0) != (A[j][i] == 0)):
                    raise ValueError("off-diagonal Cartan entries must be non-positive and paired")
                if d[j] * A[i][j] != d[i] * A[j][i]:
                    raise ValueError("Cartan matrix is not symmetrisable by d")

    @classmethod
    def from_cartan(cls, cartan: Sequence[Sequence[int]], label: str = "?") -> "RootSystem":
        cartan = tuple(tuple(int(x) for x in row) for row in cartan)
        return cls(label, len(cartan), cartan)

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    # inner products -----------------------------------------------------------
    @cached_property
    def symmetric(self) -> tuple[tuple[int, ...], ...]:
        """(alpha_i, alpha_j) with (alpha, alpha) = 2 d for simple roots."""
        A, d = self.cartan, self.d
        return tuple(tuple(d[j] * A[i][j] for j in range(self.rank)) for i in range(self.rank))

    def root_inner(self, a: Sequence[int], b: Sequence[int]) -> int:
        B = self.symmetric
        return sum(a[i] * B[i][j] * b[j] for i in range(self.rank) for j in range(self.rank) if a[i] and b[j])

    def root_length(self, root: Sequence[int]) -> int:
        """d_alpha = (alpha, alpha)/2."""
        return self.root_inner(root, root) // 2

    def root_to_weight(self, root: Sequence[int]) -> Weight:
        A = self.cartan
        return tuple(Fraction(sum(root[j] * A[j][i] for j in range(self.rank))) for i in range(self.rank))

    def weight_root_inner(self, weight: Sequence, root: Sequence[int]) -> Fraction:
        """(lambda, alpha) for a weight in the Lambda basis and a root in the alpha basis."""
        return sum((Fraction(weight[j]) * root[j] * self.d[j] for j in range(self.rank)), Fraction(0))

    def coroot_pairing(self, weight: Sequence, root: Sequence[int]) -> Fraction:
        """(lambda, alpha^vee) = 2 (lambda, alpha) / (alpha, alpha)."""
        return self.weight_root_inner(weight, root) / self.root_length(root)

    # roots ------------------------------------------------------------------
    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        """Positive roots ordered by height, then lexicographically."""
        r, A = self.rank, self.cartan
        simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
        roots = set(simple)
        layer = list(simple)
        while layer:
            nxt = set()
            for beta in layer:
                for i in range(r):
                    # alpha_i-string through beta: p = steps down, q = p - <beta, alpha_i^vee>
                    p = 0
                    probe = list(beta)
                    while True:
                        probe[i] -= 1
                        if tuple(probe) in roots:
                            p += 1
                        else:
                            break
                    pair = sum(beta[j] * A[j][i] for j in range(r))
                    if p - pair > 0:
                        up = list(beta)
                        up[i] += 1
                        nxt.add(tuple(up))
            nxt -= roots
            roots |= nxt
            layer = sorted(nxt)
        return tuple(sorted(roots, key=lambda a: (sum(a), a)))

    @cached_property
    def simple_roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def highest_root(self) -> tuple[int, ...]:
        return max(self.positive_roots, key=lambda a: (sum(a), a))

    @cached_property
    def rho(self) -> Weight:
        return tuple(Fraction(1) for _ in range(self.rank))

    def fundamental_weight(self, i: int) -> Weight:
        return tuple(Fraction(int(i == j)) for j in range(self.rank))

    def is_root(self, vec: Sequence[int]) -> bool:
        t = tuple(vec)
        return t in self._root_set or tuple(-x for x in t) in self._root_set

    @cached_property
    def _root_set(self) -> frozenset:
        return frozenset(self.positive_roots)

    # weights ------------------------------------------------------------------
    def reflect(self, weight: Sequence, i: int) -> Weight:
        """Simple reflection s_i(lambda) = lambda - <lambda, alpha_i^vee> alpha_i."""
        c = Fraction(weight[i])
        row = self.cartan[i]
        return tuple(Fraction(weight[j]) - c * row[j] for j in range(self.rank))

    def subtract_roots(self, weight: Sequence, n: Sequence[int]) -> Weight:
        """lambda - sum_i n_i alpha_i."""
        A = self.cartan
        return tuple(
            Fraction(weight[k]) - sum(n[i] * A[i][k] for i in range(self.rank)) for k in range(self.rank)
        )

    def is_dominant_integral(self, weight: Sequence) -> bool:
        return all(Fraction(c).denominator == 1 and c >= 0 for c in weight)


def build_root_system(series: str, rank: int) -> RootSystem:
    """Root system of type ``series`` (one of A-G) and the given rank."""
    series = str(series).upper()
    if len(series) != 1 or series not in "ABCDEFG":
        raise ValueError(f"unknown series {series!r}; valid types: {VALID_TYPES}")
    if not isinstance(rank, int) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")
    d, bonds = _standard_diagram(series, rank)
    return RootSystem(series, rank, _cartan_from_diagram(d, bonds), tuple(d))


def parse_algebra(text: str) -> RootSystem:
    """``"B2"`` -> build_root_system("B", 2)."""
    text = text.strip().upper().replace("_", "")
    if len(text) < 2 or not text[1:].isdigit():
        raise ValueError(f"cannot parse algebra {text!r}; expected e.g. A2, B3, G2")
    return build_root_system(text[0], int(text[1:]))


def pairing(weight: Sequence, root: Sequence[int], rs: RootSystem) -> Fraction:
    """(lambda, alpha^vee) exactly."""
    return rs.coroot_pairing(weight, root)


def weyl_dimension(weight: Sequence, rs: RootSystem) -> int:
    """Dimension of the classical irreducible module with dominant integral highest weight."""
    lam = as_weight(weight)
    if not rs.is_dominant_integral(lam):
        raise ValueError(f"weyl_dimension needs a dominant integral weight, got {_fmt(lam)}")
    shifted = tuple(c + 1 for c in lam)
    dim = Fraction(1)
    for alpha in rs.positive_roots:
        dim *= rs.weight_root_inner(shifted, alpha) / rs.weight_root_inner(rs.rho, alpha)
    assert dim.denominator == 1
    return int(dim)


def freudenthal_character(weight: Sequence, rs: RootSystem, height_cap: int | None = None) -> dict[Weight, int]:
    """Weight multiplicities of the classical irreducible module L(lambda).

    Multiplicities are computed level by level below the highest weight with
    Freudenthal's recursion; ``height_cap`` limits the depth (None = full module).
    """
    lam = as_weight(weight)
    if not rs.is_dominant_integral(lam):
        raise ValueError(f"freudenthal_character needs a dominant integral weight, got {_fmt(lam)}")
    mults = _freudenthal_by_depth(lam, rs, height_cap)
    return {rs.subtract_roots(lam, n): c for n, c in mults.items()}


def _freudenthal_by_depth(lam: Weight, rs: RootSystem, height_cap: int | None) -> dict[tuple[int, ...], int]:
    r = rs.rank
    B = rs.symmetric
    pos = rs.positive_roots
    lam_rho = tuple(c + 1 for c in lam)
    # (lambda + rho, sum n_j alpha_j) is linear in n
    lr = [lam_rho[j] * rs.d[j] for j in range(r)]
    lam_alpha = {a: rs.weight_root_inner(lam, a) for a in pos}
    mults: dict[tuple[int, ...], int] = {tuple([0] * r): 1}
    layer = [tuple([0] * r)]
    depth = 0
    while layer and (height_cap is None or depth < height_cap):
        depth += 1
        cands = set()
        for n in layer:
            for i in range(r):
                up = list(n)
                up[i] += 1
                cands.add(tuple(up))
        new_layer = []
        for n in sorted(cands):
            # norm difference (lam+rho)^2 - (mu+rho)^2 with mu = lam - n.alpha
            n_lr = sum(n[j] * lr[j] for j in range(r))
            n_sq = sum(n[i] * B[i][j] * n[j] for i in range(r) for j in range(r) if n[i] and n[j])
            denom = 2 * n_lr - n_sq
            if denom == 0:
                continue
            total = Fraction(0)
            for a in pos:
                k = 1
                while True:
                    prev = tuple(n[j] - k * a[j] for j in range(r))
                    if min(prev) < 0:
                        break
                    c = mults.get(prev)
                    if c:
                        # (mu + k alpha, alpha) with mu + k alpha = lam - prev.alpha
                        inner = lam_alpha[a] - sum(prev[i] * B[i][j] * a[j] for i in range(r) for j in range(r) if prev[i] and a[j])
                        total += c * inner
                    k += 1
            value = 2 * total / denom
            assert value.denominator == 1 and value >= 0
            if value:
                mults[n] = int(value)
                new_layer.append(n)
        layer = new_layer
    return mults


def coxeter_labels(rs: RootSystem) -> tuple[int, ...]:
    """Coefficients a_j of the highest root theta = sum a_j alpha_j."""
    return tuple(rs.highest_root)


def dynkin_bipartition(rs: RootSystem) -> tuple[int, ...]:
    """2-colouring a_i in {0,1} with a_i + a_j = 1 on every edge; lowest node gets 0."""
    r, A = rs.rank, rs.cartan
    colour: list[int | None] = [None] * r
    for start in range(r):
        if colour[start] is not None:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(r):
                if j != i and A[i][j] != 0:
                    if colour[j] is None:
                        colour[j] = 1 - colour[i]
                        queue.append(j)
                    elif colour[j] == colour[i]:
                        raise ValueError("Dynkin diagram is not bipartite")
    return tuple(colour)


def identify_cartan(cartan: Sequence[Sequence[int]]) -> str:
    """Type label (e.g. ``"C3"``, ``"A1xA1"``) of a Cartan matrix in this module's convention.

    Connected components are identified from the Dynkin graph: bond
    multiplicities, branch points and which end of a double bond is long.
    Components are joined with ``x`` in sorted order.
    """
    r = len(cartan)
    if r == 0:
        return "trivial"
    d = _symmetrizer(cartan)
    seen: set[int] = set()
    labels = []
    for start in range(r):
        if start in seen:
            continue
        comp, queue = [], deque([start])
        seen.add(start)
        while queue:
            i = queue.popleft()
            comp.append(i)
            for j in range(r):
                if j != i and cartan[i][j] != 0 and j not in seen:
                    seen.add(j)
                    queue.append(j)
        labels.append(_identify_connected(cartan, d, sorted(comp)))
    return "x".join(sorted(labels))


def _identify_connected(A, d, nodes: list[int]) -> str:
    l = len(nodes)
    if l == 1:
        return "A1"
    nbrs = {i: [j for j in nodes if j != i and A[i][j] != 0] for i in nodes}
    mult = {(i, j): A[i][j] * A[j][i] for i in nodes for j in nbrs[i]}
    top = max(mult.values())
    if top == 3:
        return "G2"
    if top == 2:
        if l == 4:
            ends = [i for i in nodes if len(nbrs[i]) == 1]
            double = [(i, j) for (i, j), v in mult.items() if v == 2]
            if all(i not in ends for i, _ in double):
                return "F4"
        (i, j) = next((i, j) for (i, j), v in mult.items() if v == 2 and len(nbrs[i]) == 1 or (v == 2 and l == 2))
        # end node i of the double bond: long end -> C, short end -> B
        if l == 2:
            # rank two: B2 if the first node is long
            first, second = nodes
            return "B2" if d[first] > d[second] else "C2"
        return f"C{l}" if d[i] > d[j] else f"B{l}"
    branch = [i for i in nodes if len(nbrs[i]) == 3]
    if not branch:
        return f"A{l}"
    b = branch[0]
    arms = []
    for start in nbrs[b]:
        length, prev, cur = 1, b, start
        while True:
            nxt = [k for k in nbrs[cur] if k != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return f"D{l}"
    if arms[0] == 1 and arms[1] == 2 and l in (6, 7, 8):
        return f"E{l}"
    raise ValueError("not a finite-type Cartan matrix")


def _fmt(w: Sequence) -> str:
    return "(" + ",".join(str(Fraction(c)) for c in w) + ")"
