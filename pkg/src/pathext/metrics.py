"""2-path counts, irregularity, surplus and vertex classification against a path."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable

import numpy as np

from .core import DirectedPath, Tournament, bits, check_path, mask_of


def _distinct(t: Tournament, u: int, v: int) -> None:
    if u == v:
        raise ValueError("vertices must be distinct")
    if not (0 <= u < t.n and 0 <= v < t.n):
        raise ValueError(f"vertex out of range for n={t.n}")


def intermediate_set(t: Tournament, u: int, v: int) -> int:
    """Bitmask of the middle vertices of all (u, v)-2-paths."""
    _distinct(t, u, v)
    return t.out_rows[u] & t.in_rows[v]


def p2(t: Tournament, u: int, v: int) -> int:
    return intermediate_set(t, u, v).bit_count()


def p2_matrix(t: Tournament) -> np.ndarray:
    """Entry (u, v) is p2(u, v); the diagonal is meaningless and left as computed."""
    a = t.matrix().astype(np.int64)
    return a @ a


def pi2_with_pair(t: Tournament) -> tuple[int, tuple[int, int]]:
    """Minimum p2 over ordered pairs and the lexicographically first pair attaining it."""
    best, arg = None, (0, 1)
    out, inn = t.out_rows, t.in_rows
    for u in range(t.n):
        ou = out[u]
        for v in range(t.n):
            if u != v:
                c = (ou & inn[v]).bit_count()
                if best is None or c < best:
                    best, arg = c, (u, v)
                    if c == 0:
                        return 0, arg
    return best, arg


def pi2(t: Tournament) -> int:
    return pi2_with_pair(t)[0]


def irregularity(t: Tournament) -> int:
    return max(abs(2 * d - (t.n - 1)) for d in t.out_degrees)


def is_regular(t: Tournament) -> bool:
    return irregularity(t) == 0


def is_doubly_regular(t: Tournament) -> bool:
    if not is_regular(t):
        return False
    common = {(t.out_rows[u] & t.out_rows[v]).bit_count() for u, v in combinations(range(t.n), 2)}
    return len(common) <= 1


def min_degree(t: Tournament) -> int:
    """min(delta+, delta-)."""
    return min(min(t.out_degrees), t.n - 1 - max(t.out_degrees))


# -- surplus ------------------------------------------------------------------------


def surplus_pair(t: Tournament, u: int, v: int, pi: int | None = None) -> int:
    if pi is None:
        pi = pi2(t)
    return p2(t, u, v) + p2(t, v, u) - 2 * pi


def _as_list(w: Iterable[int] | int) -> list[int]:
    if isinstance(w, int):
        return list(bits(w))
    return sorted(set(w))


def surplus_set(t: Tournament, w: Iterable[int] | int, pi: int | None = None) -> int:
    verts = _as_list(w)
    if len(verts) < 2:
        raise ValueError("surplus of a set needs at least two vertices")
    if pi is None:
        pi = pi2(t)
    return sum(surplus_pair(t, u, v, pi) for u, v in combinations(verts, 2))


def surplus_lower_bound(size: int) -> int:
    """C(|W|, 2) - floor(|W|/2) * ceil(|W|/2)."""
    return comb(size, 2) - (size // 2) * ((size + 1) // 2)


@dataclass
class SurplusReport:
    pi2: int
    pair_surplus: dict[tuple[int, int], int]
    set_surplus: dict[tuple[int, ...], int] = field(default_factory=dict)

    def surplus_of(self, w: Iterable[int]) -> int:
        verts = sorted(set(w))
        return sum(self.pair_surplus[(a, b)] for a, b in combinations(verts, 2))


def surplus_report(t: Tournament, sets: Iterable[Iterable[int]] = ()) -> SurplusReport:
    m = p2_matrix(t)
    pi = pi2(t)
    pairs = {(u, v): int(m[u, v] + m[v, u] - 2 * pi) for u, v in combinations(range(t.n), 2)}
    rep = SurplusReport(pi, pairs)
    for w in sets:
        key = tuple(sorted(set(w)))
        rep.set_surplus[key] = rep.surplus_of(key)
    return rep


def surplus_matrix(t: Tournament) -> np.ndarray:
    m = p2_matrix(t)
    off = ~np.eye(t.n, dtype=bool)
    pi = int(m[off].min())
    s = m + m.T - 2 * pi
    s[~off] = 0
    return s


# -- vertices against a path ----------------------------------------------------------


@dataclass
class PathContext:
    dominating: int = 0
    dominated: int = 0
    hybrid: dict[int, int] = field(default_factory=dict)
    inserting: int = 0
    order: int = 0

    @property
    def h(self) -> int:
        return len(self.hybrid)

    @property
    def n0_minus(self) -> int:
        return self.dominating.bit_count()

    @property
    def n0_plus(self) -> int:
        return self.dominated.bit_count()

    @property
    def n1_minus(self) -> int:
        # dominated only by the last vertex: switches at p-2
        return sum(1 for k in self.hybrid.values() if k == self.order - 2)

    @property
    def n1_plus(self) -> int:
        # dominates only the first vertex: switches at 0
        return sum(1 for k in self.hybrid.values() if k == 0)

    @property
    def interior_has_hybrid(self) -> bool:
        """Some vertex is hybrid for the interior subpath u1..u_{p-2}, i.e. switches at 1..p-3."""
        return any(1 <= k <= self.order - 3 for k in self.hybrid.values())


def classify_against_path(t: Tournament, path: DirectedPath) -> PathContext:
    check_path(t, path)
    verts = path.vertices
    p = len(verts)
    ctx = PathContext(order=p)
    on_path = mask_of(verts)
    for w in range(t.n):
        if on_path >> w & 1:
            continue
        row = t.out_rows[w]
        to_path = [bool(row >> u & 1) for u in verts]
        if all(to_path):
            ctx.dominating |= 1 << w
        elif not any(to_path):
            ctx.dominated |= 1 << w
        else:
            k = to_path.index(False) - 1
            if k >= 0 and not any(to_path[k + 1 :]):
                ctx.hybrid[w] = k
            else:
                ctx.inserting |= 1 << w
    return ctx
