"""Generators for the tournament families used throughout the package.

Every generator returns a :class:`~pathext.core.Tournament`; the random ones
are pure functions of ``(parameters, seed)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .core import Tournament, bits, check_order, mask_of
from .rng import generator, permutation, raw_bits


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def quadratic_residues(q: int) -> set[int]:
    return {(x * x) % q for x in range(1, q)}


def random_tournament(n: int, seed: int) -> Tournament:
    """Orient each pair (i, j), i < j, as i -> j on a fair coin, pairs in lexicographic order."""
    check_order(n)
    flips = raw_bits(generator(seed), n * (n - 1) // 2)
    rows = [0] * n
    for (i, j), b in zip(combinations(range(n), 2), flips):
        if b:
            rows[i] |= 1 << j
        else:
            rows[j] |= 1 << i
    return Tournament(n, tuple(rows))


def circulant_tournament(n: int, offsets) -> Tournament:
    """Arc i -> j iff (j - i) mod n lies in ``offsets``."""
    offsets = set(int(d) for d in offsets)
    if n % 2 == 0:
        raise ValueError(f"circulant tournaments need odd order, got {n}")
    if not offsets <= set(range(1, n)):
        raise ValueError(f"offsets must lie in 1..{n - 1}")
    for d in range(1, (n - 1) // 2 + 1):
        if (d in offsets) == ((n - d) in offsets):
            raise ValueError(f"exactly one of {d} and {n - d} must be an offset")
    check_order(n)
    rows = tuple(mask_of((i + d) % n for d in offsets) for i in range(n))
    return Tournament(n, rows)


def paley_tournament(q: int) -> Tournament:
    """Quadratic-residue tournament on Z_q; doubly regular with lambda = (q - 3) / 4."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q % 4 != 3:
        raise ValueError(f"{q} is not 3 mod 4")
    return circulant_tournament(q, quadratic_residues(q))


def random_regular_tournament(n: int, seed: int) -> Tournament:
    """Circulant with seeded offset choices, then a seeded random relabelling."""
    bg = generator(seed)
    flips = raw_bits(bg, (n - 1) // 2)
    offsets = {d if b else n - d for d, b in zip(range(1, (n - 1) // 2 + 1), flips)}
    return circulant_tournament(n, offsets).relabel(permutation(bg, n))


# -- regular completion ---------------------------------------------------------


def regular_completions(
    n: int,
    rows: Sequence[int],
    free: Sequence[int],
    rng: random.Random | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield every regular tournament extending a partial orientation.

    ``rows[u]`` holds the arcs already fixed out of ``u``; ``free[u]`` is the
    bitmask of partners whose pair with ``u`` is still open (symmetric).
    Search branches on the most constrained vertex and forces pairs whenever a
    vertex needs all or none of its open pairs.  With ``rng`` the branch order
    is shuffled, otherwise it is deterministic.
    """
    if n % 2 == 0:
        return
    target = (n - 1) // 2
    yield from _complete(list(rows), list(free), target, rng)


def _propagate(rows: list[int], free: list[int], target: int) -> bool:
    n = len(rows)
    changed = True
    while changed:
        changed = False
        for v in range(n):
            out = rows[v].bit_count()
            f = free[v]
            nf = f.bit_count()
            need = target - out
            if need < 0 or need > nf:
                return False
            if not f:
                continue
            if need == 0 or need == nf:
                for w in bits(f):
                    if need == 0:
                        rows[w] |= 1 << v
                    else:
                        rows[v] |= 1 << w
                    free[w] &= ~(1 << v)
                free[v] = 0
                changed = True
    return True


def _complete(rows, free, target, rng):
    if not _propagate(rows, free, target):
        return
    best, best_key = -1, None
    for v, f in enumerate(free):
        if f:
            nf = f.bit_count()
            need = target - rows[v].bit_count()
            key = min(need, nf - need)
            if best_key is None or key < best_key:
                best, best_key = v, key
    if best < 0:
        yield tuple(rows)
        return
    v = best
    partners = list(bits(free[v]))
    w = partners[0] if rng is None else rng.choice(partners)
    choices = [True, False]
    if rng is not None:
        rng.shuffle(choices)
    for v_to_w in choices:
        r, f = rows[:], free[:]
        if v_to_w:
            r[v] |= 1 << w
        else:
            r[w] |= 1 << v
        f[v] &= ~(1 << w)
        f[w] &= ~(1 << v)
        yield from _complete(r, f, target, rng)


# -- the named families -------------------------------------------------------------


@dataclass(frozen=True)
class T3Spec:
    """Three doubly regular blocks of order 4t+3 arranged cyclically."""

    t: int

    def __post_init__(self) -> None:
        b = 4 * self.t + 3
        if self.t < 1 or not is_prime(b):
            raise ValueError(f"block order 4t+3 = {b} must be a prime (t >= 1)")

    @property
    def block(self) -> int:
        return 4 * self.t + 3

    @property
    def n(self) -> int:
        return 12 * self.t + 9

    def blocks(self) -> list[range]:
        b = self.block
        return [range(i * b, (i + 1) * b) for i in range(3)]


def t3_tournament(spec: T3Spec | int) -> Tournament:
    if isinstance(spec, int):
        spec = T3Spec(spec)
    b, n = spec.block, spec.n
    check_order(n)
    inner = paley_tournament(b)
    rows = [0] * n
    for i, block in enumerate(spec.blocks()):
        nxt = spec.blocks()[(i + 1) % 3]
        for u in block:
            local = inner.out_rows[u - block.start] << block.start
            rows[u] = local | mask_of(nxt)
    return Tournament(n, tuple(rows))


@dataclass(frozen=True)
class T2Spec:
    """Path ``V`` of odd order ``p`` with the four attached sets N0+, N1+, N0-, N1-."""

    p: int
    n0: int
    n1: int

    def __post_init__(self) -> None:
        if self.p < 3 or self.p % 2 == 0:
            raise ValueError(f"p must be odd and >= 3, got {self.p}")
        if self.n0 < 0 or self.n1 < 0:
            raise ValueError("set sizes must be non-negative")
        if self.n1 > (self.p - 1) // 2:
            raise ValueError(f"n1 must be at most (p-1)/2 = {(self.p - 1) // 2}")
        if self.n0 + self.n1 < self.p:
            raise ValueError(f"n0 + n1 must be at least p = {self.p}")

    @property
    def n(self) -> int:
        return self.p + 2 * self.n0 + 2 * self.n1

    def parts(self) -> dict[str, range]:
        """Vertex ranges: V, then N0+, N1+, N0-, N1-."""
        out, start = {}, 0
        for name, size in (("V", self.p), ("N0+", self.n0), ("N1+", self.n1), ("N0-", self.n0), ("N1-", self.n1)):
            out[name] = range(start, start + size)
            start += size
        return out


def t2_constraints(spec: T2Spec) -> tuple[list[int], list[int]]:
    """Fixed arcs and open pairs of the family skeleton (rows, free)."""
    n = spec.n
    parts = spec.parts()
    V, P0, P1, M0, M1 = (list(parts[k]) for k in ("V", "N0+", "N1+", "N0-", "N1-"))
    v0, vlast = V[0], V[-1]
    arcs = list(zip(V, V[1:]))
    arcs += [(a, b) for a in V for b in P0]
    arcs += [(a, b) for a in M0 for b in V]
    arcs += [(a, b) for a in V if a != v0 for b in P1]
    arcs += [(a, v0) for a in P1]
    arcs += [(a, b) for a in M1 for b in V if b != vlast]
    arcs += [(vlast, b) for b in M1]
    rows = [0] * n
    for a, b in arcs:
        rows[a] |= 1 << b
    full = (1 << n) - 1
    free = []
    for u in range(n):
        fixed = rows[u] | mask_of(w for w in range(n) if rows[w] >> u & 1)
        free.append(full & ~fixed & ~(1 << u))
    return rows, free


def t2_tournament(spec: T2Spec, seed: int = 0) -> Tournament | None:
    """A regular member of the family, or ``None`` when no regular completion exists."""
    check_order(spec.n)
    rows, free = t2_constraints(spec)
    for done in regular_completions(spec.n, rows, free, rng=random.Random(seed)):
        return Tournament(spec.n, done)
    return None


def figure4_roles(k: int) -> dict[str, list[int] | int]:
    """Vertex ids of the parts of :func:`figure4_tournament`."""
    m = 2 * k - 3
    return {
        "V0": list(range(0, k - 2)),
        "V1": list(range(k - 2, 2 * k - 4)),
        "v": m - 1,
        "u0": m,
        "u1": m + 1,
        "w0": m + 2,
        "w1": m + 3,
    }


def figure4_tournament(k: int, seed: int | None = None) -> Tournament:
    """Regular tournament on 2k+1 vertices with no 2-path from u0 to u1.

    The inner regular tournament on 2k-3 vertices is the circulant with offsets
    1..k-2; a ``seed`` relabels it at random before it is split into V0, V1, v.
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    n = 2 * k + 1
    check_order(n)
    m = 2 * k - 3
    inner = circulant_tournament(m, range(1, k - 1))
    if seed is not None:
        inner = inner.relabel(permutation(generator(seed), m))
    r = figure4_roles(k)
    V0, V1, v = r["V0"], r["V1"], r["v"]
    u0, u1, w0, w1 = r["u0"], r["u1"], r["w0"], r["w1"]
    rows = list(inner.out_rows) + [0] * 4

    def arc(a, b):
        rows[a] |= 1 << b

    for x in V1:
        arc(x, u0)
        arc(x, u1)
    for x in V0:
        arc(u0, x)
        arc(u1, x)
        arc(x, w0)
        arc(x, w1)
    for x in V1:
        arc(w0, x)
        arc(w1, x)
    arc(w1, u0)
    arc(w1, u1)
    arc(u0, w0)
    arc(u1, w0)
    arc(u0, u1)
    arc(u1, v)
    arc(v, u0)
    arc(w0, v)
    arc(v, w1)
    arc(w0, w1)
    return Tournament(n, tuple(rows))


def three_cycle() -> Tournament:
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
