"""Exact path extension and whole-tournament path extendability.

A path P from s to t is extendable iff for some w outside V(P) the induced
sub-tournament on V(P) + w has a hamiltonian (s, t)-path.  Extendability of P
therefore depends only on the triple (V(P), s, t), which is what the subset
table below is indexed by.

The table stores, for every vertex subset S and terminal t in S, the bitset of
starts s such that <S> has a hamiltonian path from s to t.  It is filled one
popcount layer at a time; a layer only reads the layer below, so checking
layer k can start as soon as layer k+1 exists, and a search for the shortest
non-extendable path stops at the first failing layer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .core import MAX_ORDER, CapacityError, DirectedPath, Tournament, bits, check_path

log = logging.getLogger(__name__)


@lru_cache(maxsize=4)
def _layers(m: int) -> tuple[np.ndarray, ...]:
    """All m-bit masks grouped by popcount, each group in increasing order."""
    masks = np.arange(1 << m, dtype=np.int64)
    pc = np.bitwise_count(masks)
    order = np.argsort(pc, kind="stable")
    bounds = np.concatenate(([0], np.cumsum(np.bincount(pc, minlength=m + 1))))
    return tuple(masks[order[bounds[k] : bounds[k + 1]]] for k in range(m + 1))


def _capacity(n: int) -> None:
    if n > MAX_ORDER:
        need = (1 << n) * n * 4
        raise CapacityError(
            f"order {n} exceeds the extendability limit of {MAX_ORDER} "
            f"(the subset table would need about {need / 2**30:.1f} GiB)"
        )


class FixedEndpointHPTable:
    """starts[S, t] = bitset of s with a hamiltonian (s, t)-path in <S>."""

    def __init__(self, t: Tournament):
        _capacity(t.n)
        self.tournament = t
        self.n = n = t.n
        self.starts = np.zeros((1 << n, n), dtype=np.uint32)
        for v in range(n):
            self.starts[1 << v, v] = 1 << v
        self._in = [list(bits(r)) for r in t.in_rows]
        self.built = 1

    def build_through(self, k: int) -> None:
        layers = _layers(self.n)
        while self.built < min(k, self.n):
            size = self.built + 1
            layer = layers[size]
            for t in range(self.n):
                ins = self._in[t]
                if not ins:
                    continue
                sel = layer[(layer >> t) & 1 == 1]
                prev = sel ^ (1 << t)
                acc = self.starts[prev, ins[0]]
                for u in ins[1:]:
                    acc |= self.starts[prev, u]
                self.starts[sel, t] = acc
            self.built = size

    def build(self) -> FixedEndpointHPTable:
        self.build_through(self.n)
        return self

    def get(self, subset: int, t: int) -> int:
        return int(self.starts[subset, t])

    def stuck(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Layer-k subsets and, per terminal, the starts whose (S, s, t) has no extension."""
        self.build_through(k + 1)
        layer = _layers(self.n)[k]
        here = self.starts[layer]
        ext = np.zeros_like(here)
        for w in range(self.n):
            rows = np.flatnonzero((layer >> w) & 1 == 0)
            ext[rows] |= self.starts[layer[rows] | (1 << w)]
        return layer, here & ~ext

    def least_path(self, subset: int, s: int, t: int) -> tuple[int, ...]:
        """Lexicographically least hamiltonian (s, t)-path of <subset>."""
        out = self.tournament.out_rows
        seq, rest, x = [s], subset ^ (1 << s), s
        while rest:
            cands = out[x] & int(self.starts[rest, t])
            y = (cands & -cands).bit_length() - 1
            seq.append(y)
            rest ^= 1 << y
            x = y
        return tuple(seq)


@dataclass(frozen=True)
class ExtendabilityVerdict:
    extendable: bool
    certificate: DirectedPath | None
    k_threshold: int
    subsets_checked: int


def _stuck_triples(table: FixedEndpointHPTable, k: int) -> tuple[list[tuple[int, int, int]], int]:
    layer, bad = table.stuck(k)
    rows, cols = np.nonzero(bad)
    triples = []
    for r, t in zip(rows.tolist(), cols.tolist()):
        subset = int(layer[r])
        for s in bits(int(bad[r, t])):
            triples.append((subset, s, t))
    return triples, len(layer)


def _iter_stuck_layers(t: Tournament, k_threshold: int) -> Iterator[tuple[list[DirectedPath], int]]:
    table = FixedEndpointHPTable(t)
    for size in range(max(2, k_threshold + 1), t.n):
        triples, checked = _stuck_triples(table, size)
        paths = sorted(table.least_path(S, s, u) for S, s, u in triples)
        yield [DirectedPath(p) for p in paths], checked


def is_path_extendable(t: Tournament, k_threshold: int = 1) -> ExtendabilityVerdict:
    """Decide whether every nonhamiltonian path with >= k_threshold arcs is extendable.

    On failure the certificate is the shortest non-extendable path, ties broken
    by the lexicographically least vertex sequence.
    """
    if t.n < 3:
        raise ValueError("path extendability needs at least 3 vertices")
    if k_threshold < 1:
        raise ValueError("k_threshold must be at least 1")
    checked = 0
    for paths, count in _iter_stuck_layers(t, k_threshold):
        checked += count
        if paths:
            return ExtendabilityVerdict(False, paths[0], k_threshold, checked)
    return ExtendabilityVerdict(True, None, k_threshold, checked)


def nonextendable_paths(t: Tournament, limit: int | None = None, k_threshold: int = 1) -> list[DirectedPath]:
    """Non-extendable nonhamiltonian paths, one per (vertex set, start, end), shortest first."""
    found: list[DirectedPath] = []
    if t.n < 3:
        return found
    for paths, _ in _iter_stuck_layers(t, k_threshold):
        for p in paths:
            if limit is not None and len(found) >= limit:
                return found
            if extend_path(t, p) is not None:
                raise AssertionError(f"table and single-path check disagree on {p.vertices}")
            found.append(p)
    return found


# -- a single path ------------------------------------------------------------------------


def _starts_into(out_local: list[int], m: int, t: int) -> np.ndarray:
    """B[C] = starts of hamiltonian paths of <C> ending at t (C given as an m-bit mask)."""
    table = np.zeros(1 << m, dtype=np.uint32)
    table[1 << t] = 1 << t
    layers = _layers(m)
    for size in range(2, m + 1):
        layer = layers[size]
        layer = layer[(layer >> t) & 1 == 1]
        for e in range(m):
            if e == t:
                continue
            sel = layer[(layer >> e) & 1 == 1]
            prev = sel ^ (1 << e)
            hit = (table[prev] & np.uint32(out_local[e])) != 0
            table[sel[hit]] |= np.uint32(1 << e)
    return table


def _local_rows(t: Tournament, verts: tuple[int, ...]) -> tuple[list[int], list[int]]:
    index = {v: i for i, v in enumerate(verts)}
    out = [0] * len(verts)
    inn = [0] * len(verts)
    for i, v in enumerate(verts):
        for w in bits(t.out_rows[v]):
            j = index.get(w)
            if j is not None:
                out[i] |= 1 << j
                inn[j] |= 1 << i
    return out, inn


def extend_path(t: Tournament, path: DirectedPath) -> DirectedPath | None:
    """Some path on V(P) + w with P's endpoints, or ``None`` if P is not extendable.

    The returned path need not contain P as a subpath.  It is assembled as
    s ... a -> w -> b ... t where the prefix covers a set A of V(P) and the
    suffix covers the rest; both halves come from subset tables over V(P).
    """
    check_path(t, path)
    p = path.order
    if p >= t.n:
        raise ValueError("a hamiltonian path cannot be extended")
    _capacity(p)
    verts = path.vertices
    out, inn = _local_rows(t, verts)
    s, e = 0, p - 1
    fwd = _starts_into(inn, p, s)  # on the reversed tournament: ends of paths leaving s
    bwd = _starts_into(out, p, e)
    full = (1 << p) - 1
    idx = np.arange(1 << p, dtype=np.int64)
    comp = bwd[full ^ idx]
    on_path = path.vertex_mask
    for w in range(t.n):
        if on_path >> w & 1:
            continue
        into_w = sum(1 << i for i, v in enumerate(verts) if t.out_rows[v] >> w & 1)
        from_w = sum(1 << i for i, v in enumerate(verts) if t.out_rows[w] >> v & 1)
        ok = ((fwd & np.uint32(into_w)) != 0) & ((comp & np.uint32(from_w)) != 0)
        hits = np.flatnonzero(ok)
        if not hits.size:
            continue
        a_set = int(hits[0])
        ends = int(fwd[a_set]) & into_w
        a = (ends & -ends).bit_length() - 1
        prefix = [a]
        rest, cur = a_set, a
        while rest != 1 << s:
            rest ^= 1 << cur
            cands = int(fwd[rest]) & inn[cur]
            cur = (cands & -cands).bit_length() - 1
            prefix.append(cur)
        prefix.reverse()
        c_set = full ^ a_set
        starts = int(bwd[c_set]) & from_w
        cur = (starts & -starts).bit_length() - 1
        suffix, rest = [cur], c_set ^ (1 << cur)
        while rest:
            cands = out[cur] & int(bwd[rest])
            cur = (cands & -cands).bit_length() - 1
            suffix.append(cur)
            rest ^= 1 << cur
        seq = [verts[i] for i in prefix] + [w] + [verts[i] for i in suffix]
        return DirectedPath(tuple(seq))
    return None
