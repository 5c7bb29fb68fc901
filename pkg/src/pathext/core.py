"""Tournament and path values, degree bookkeeping and the TRN serialization.

A tournament on ``n`` labelled vertices is stored as ``n`` out-neighbourhood
rows, each an ``n``-bit Python int (bit ``j`` of ``out_rows[u]`` set iff
``u -> j``).  Everything downstream is intersections and popcounts on these
rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_ORDER = 24


class CapacityError(ValueError):
    """Raised when a request exceeds the desk-scale limits of the artifact."""


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def check_order(n: int, cap: int = MAX_ORDER) -> None:
    if n < 2:
        raise ValueError(f"tournament order must be at least 2, got {n}")
    if n > cap:
        raise CapacityError(f"order {n} exceeds the capacity limit of {cap} vertices")


@dataclass(frozen=True)
class Tournament:
    n: int
    out_rows: tuple[int, ...]

    def __post_init__(self) -> None:
        check_order(self.n)
        if len(self.out_rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.out_rows)}")
        object.__setattr__(self, "out_rows", tuple(int(r) for r in self.out_rows))

    # -- alternate constructors -------------------------------------------------

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> Tournament:
        rows = [0] * n
        for u, v in arcs:
            rows[u] |= 1 << v
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, adj) -> Tournament:
        a = np.asarray(adj, dtype=bool)
        n = a.shape[0]
        rows = tuple(int(sum(1 << j for j in np.flatnonzero(a[i]))) for i in range(n))
        return cls(n, rows)

    @classmethod
    def from_pairs(cls, n: int, pairs: str) -> Tournament:
        """Build from the pair bitstring: one char per (i, j), i < j, '1' meaning i -> j."""
        check_order(n)
        expected = n * (n - 1) // 2
        if len(pairs) != expected:
            raise ValueError(f"pair string for n={n} must have {expected} characters, got {len(pairs)}")
        rows = [0] * n
        for (i, j), c in zip(combinations(range(n), 2), pairs):
            if c == "1":
                rows[i] |= 1 << j
            elif c == "0":
                rows[j] |= 1 << i
            else:
                raise ValueError(f"invalid pair character {c!r}")
        return cls(n, tuple(rows))

    @classmethod
    def transitive(cls, n: int) -> Tournament:
        full = (1 << n) - 1
        return cls(n, tuple(full & ~((1 << (u + 1)) - 1) for u in range(n)))

    # -- derived views -------------------------------------------------------

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def in_rows(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for u, row in enumerate(self.out_rows):
            for v in bits(row):
                rows[v] |= 1 << u
        return tuple(rows)

    @cached_property
    def out_degrees(self) -> tuple[int, ...]:
        return tuple(r.bit_count() for r in self.out_rows)

    def pairs(self) -> str:
        rows = self.out_rows
        return "".join("1" if rows[i] >> j & 1 else "0" for i, j in combinations(range(self.n), 2))

    def matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, row in enumerate(self.out_rows):
            for v in bits(row):
                a[u, v] = True
        return a

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, row in enumerate(self.out_rows) for v in bits(row)]

    def relabel(self, perm: Sequence[int]) -> Tournament:
        """Return the tournament with vertex ``u`` renamed to ``perm[u]``."""
        rows = [0] * self.n
        for u, row in enumerate(self.out_rows):
            rows[perm[u]] = mask_of(perm[v] for v in bits(row))
        return Tournament(self.n, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> Tournament:
        """Sub-tournament on ``vertices``, relabelled 0..k-1 in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            rows.append(mask_of(index[w] for w in bits(self.out_rows[v]) if w in index))
        return Tournament(len(vertices), tuple(rows))

    def __str__(self) -> str:
        return encode_trn(self).rstrip("\n")


@dataclass(frozen=True)
class DirectedPath:
    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if len(self.vertices) < 2:
            raise ValueError("a path needs at least two vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"path repeats a vertex: {self.vertices}")

    @property
    def first(self) -> int:
        return self.vertices[0]

    @property
    def last(self) -> int:
        return self.vertices[-1]

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def vertex_mask(self) -> int:
        return mask_of(self.vertices)

    def subpath(self, u: int, v: int) -> DirectedPath:
        i, j = self.vertices.index(u), self.vertices.index(v)
        if i > j:
            raise ValueError(f"{u} does not precede {v} on the path")
        return DirectedPath(self.vertices[i : j + 1])

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


@dataclass(frozen=True)
class PairProfile:
    x1: int  # u -> w -> v
    x2: int  # common out-neighbours
    x3: int  # common in-neighbours
    x4: int  # v -> w -> u


def _check_vertex(t: Tournament, u: int) -> None:
    if not 0 <= u < t.n:
        raise ValueError(f"vertex {u} out of range for n={t.n}")


def _check_pair(t: Tournament, u: int, v: int) -> None:
    _check_vertex(t, u)
    _check_vertex(t, v)
    if u == v:
        raise ValueError("vertices must be distinct")


def has_arc(t: Tournament, u: int, v: int) -> bool:
    _check_pair(t, u, v)
    return bool(t.out_rows[u] >> v & 1)


def out_degree(t: Tournament, u: int) -> int:
    _check_vertex(t, u)
    return t.out_rows[u].bit_count()


def in_degree(t: Tournament, u: int) -> int:
    _check_vertex(t, u)
    return t.in_rows[u].bit_count()


def pair_profile(t: Tournament, u: int, v: int) -> PairProfile:
    _check_pair(t, u, v)
    others = t.full & ~(1 << u) & ~(1 << v)
    ou, ov = t.out_rows[u] & others, t.out_rows[v] & others
    iu, iv = t.in_rows[u] & others, t.in_rows[v] & others
    return PairProfile(
        x1=(ou & iv).bit_count(),
        x2=(ou & ov).bit_count(),
        x3=(iu & iv).bit_count(),
        x4=(ov & iu).bit_count(),
    )


def problems(t: Tournament) -> list[str]:
    """List every violated tournament invariant (empty when ``t`` is valid)."""
    out = []
    full = t.full
    for u, row in enumerate(t.out_rows):
        if row & ~full:
            out.append(f"row {u} has bits beyond n={t.n}")
        if row >> u & 1:
            out.append(f"loop at {u}")
    for u, v in combinations(range(t.n), 2):
        a, b = t.out_rows[u] >> v & 1, t.out_rows[v] >> u & 1
        if a and b:
            out.append(f"both arcs {u}->{v} and {v}->{u}")
        elif not a and not b:
            out.append(f"no arc between {u} and {v}")
    total = sum((r & full).bit_count() for r in t.out_rows)
    if total != t.n * (t.n - 1) // 2:
        out.append(f"out-degree sum {total} != {t.n * (t.n - 1) // 2}")
    return out


def validate(t: Tournament) -> bool:
    return not problems(t)


def check_path(t: Tournament, path: DirectedPath) -> None:
    """Raise ``ValueError`` unless ``path`` is a directed path of ``t``."""
    for v in path.vertices:
        _check_vertex(t, v)
    for a, b in zip(path.vertices, path.vertices[1:]):
        if not t.out_rows[a] >> b & 1:
            raise ValueError(f"{a}->{b} is not an arc")


# -- TRN text format ------------------------------------------------------------


def encode_trn(t: Tournament) -> str:
    return f"{t.n}\n{t.pairs()}\n"


def decode_trn(text: str) -> Tournament:
    lines = text.split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) != 2:
        raise ValueError("TRN text must have exactly two lines: n and the pair string")
    n = int(lines[0].strip())
    return Tournament.from_pairs(n, lines[1].strip())


def to_json(t: Tournament) -> str:
    return json.dumps({"n": t.n, "pairs": t.pairs()})


def from_json(text: str | dict) -> Tournament:
    obj = json.loads(text) if isinstance(text, str) else text
    return Tournament.from_pairs(int(obj["n"]), obj["pairs"])


def read_tournament(path) -> Tournament:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return from_json(text)
    return decode_trn(text)


def write_tournament(t: Tournament, path, fmt: str = "trn") -> None:
    payload = encode_trn(t) if fmt == "trn" else to_json(t) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)
