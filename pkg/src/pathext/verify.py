"""Theorem and lemma checks with witnesses, exhaustive sweeps, and isomorphism tools.

Each check is evaluated on one tournament and returns a
:class:`TheoremCheckResult`.  Implication-shaped statements report whether
their hypothesis held (``vacuous``) separately from ``holds``.
"""

from __future__ import annotations

import enum
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from math import comb
from typing import Any, Iterable, Sequence

import numpy as np

from .construct import random_tournament, regular_completions
from .core import CapacityError, DirectedPath, Tournament, bits, encode_trn, decode_trn
from .extend import extend_path, is_path_extendable, nonextendable_paths
from .metrics import (
    classify_against_path,
    irregularity,
    is_doubly_regular,
    is_regular,
    min_degree,
    p2,
    p2_matrix,
    pi2_with_pair,
    surplus_lower_bound,
)

log = logging.getLogger(__name__)

EXHAUSTIVE_CAP = 7
DEFAULT_SET_SIZE = 6


class TheoremId(str, enum.Enum):
    PI2_SUP = "PI2_SUP"
    DEG_IDENT = "DEG_IDENT"
    P2_DIFF = "P2_DIFF"
    PAIR_SURPLUS = "PAIR_SURPLUS"
    SET_SURPLUS = "SET_SURPLUS"
    REG_SURPLUS = "REG_SURPLUS"
    I_PI = "I_PI"
    THM15 = "THM15"
    THM16 = "THM16"
    THM17 = "THM17"
    THM18 = "THM18"
    LB_P = "LB_P"
    HYBRID = "HYBRID"


ALL_THEOREMS = tuple(TheoremId)


@dataclass
class TheoremCheckResult:
    theorem_id: TheoremId
    holds: bool
    vacuous: bool = False
    witness: dict[str, Any] | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem_id.value,
            "holds": self.holds,
            "vacuous": self.vacuous,
            "witness": self.witness,
            "details": self.details,
        }


def _witness(t: Tournament, **extra) -> dict[str, Any]:
    return {"trn": encode_trn(t), **extra}


def _frac(x: Fraction) -> float:
    return float(x)


# -- individual checks ----------------------------------------------------------------


def _check_pi2_sup(t, ctx):
    n = t.n
    pi, pair = ctx.pi2
    if n < 3:
        return TheoremCheckResult(TheoremId.PI2_SUP, True, True, details={"pi2": pi})
    bound = Fraction(n - 3, 4) if n % 2 else Fraction(n - 4, 4)
    ok = pi <= bound
    return TheoremCheckResult(
        TheoremId.PI2_SUP,
        ok,
        witness=None if ok else _witness(t, pair=list(pair)),
        details={"pi2": pi, "bound": _frac(bound), "slack": _frac(bound - pi)},
    )


def _check_deg_ident(t, ctx):
    lhs = min_degree(t)
    rhs = Fraction(t.n - ctx.irregularity - 1, 2)
    ok = lhs == rhs
    return TheoremCheckResult(
        TheoremId.DEG_IDENT,
        ok,
        witness=None if ok else _witness(t, degrees=list(t.out_degrees)),
        details={"min_degree": lhs, "formula": _frac(rhs)},
    )


def _check_p2_diff(t, ctx):
    m, d = ctx.p2m, t.out_degrees
    for u in range(t.n):
        for v in bits(t.out_rows[u]):
            if m[u, v] - m[v, u] != d[u] - d[v] - 1:
                return TheoremCheckResult(TheoremId.P2_DIFF, False, witness=_witness(t, pair=[u, v]))
    return TheoremCheckResult(TheoremId.P2_DIFF, True)


def _pair_surplus_violation(t, m, pi, u, v) -> bool:
    """Lemma check for the ordered roles d+(u) >= d+(v)."""
    d = t.out_degrees
    s = int(m[u, v] + m[v, u]) - 2 * pi
    if t.out_rows[u] >> v & 1:
        if s < abs(d[u] - d[v] - 1):
            return True
    else:
        if s < abs(d[u] - d[v] + 1) or s < 1:
            return True
    if s == 0 and not (d[u] - d[v] == 1 and t.out_rows[u] >> v & 1):
        return True
    return False


def _check_pair_surplus(t, ctx):
    m, pi, d = ctx.p2m, ctx.pi2[0], t.out_degrees
    for u, v in combinations(range(t.n), 2):
        for a, b in ((u, v), (v, u)):
            if d[a] >= d[b] and _pair_surplus_violation(t, m, pi, a, b):
                return TheoremCheckResult(TheoremId.PAIR_SURPLUS, False, witness=_witness(t, pair=[a, b]))
    return TheoremCheckResult(TheoremId.PAIR_SURPLUS, True)


@dataclass(frozen=True)
class SurplusEqualityStructure:
    case: str  # "i" or "ii"
    partition: tuple[tuple[int, ...], ...]  # W0, W1[, W2] by increasing degree
    degree_base: int
    dominations: bool
    size_ok: bool

    @property
    def valid(self) -> bool:
        return self.dominations and self.size_ok


def surplus_equality_structure(t: Tournament, w: Sequence[int]) -> SurplusEqualityStructure | None:
    """Match W against the two equality shapes: degree classes d, d+1 or d-1, d, d+1.

    Returns ``None`` when the degree pattern fits neither shape.
    """
    w = sorted(w)
    size, n = len(w), t.n
    half_sizes = (size // 2, (size + 1) // 2)
    degs = sorted({t.out_degrees[x] for x in w})
    classes = [tuple(x for x in w if t.out_degrees[x] == dd) for dd in degs]

    def dominates(hi, lo):
        return all(t.out_rows[a] >> b & 1 for a in hi for b in lo)

    if len(degs) == 2 and degs[1] == degs[0] + 1:
        if sorted(map(len, classes)) != sorted(half_sizes):
            return None
        return SurplusEqualityStructure(
            "i", tuple(classes), degs[0], dominates(classes[1], classes[0]), 2 * size <= n + 1
        )
    if len(degs) == 3 and degs[2] == degs[0] + 2:
        w0, w1, w2 = classes
        if sorted((len(w0) + len(w2), len(w1))) != sorted(half_sizes):
            return None
        dom = dominates(w2, w1) and dominates(w1, w0) and dominates(w2, w0)
        return SurplusEqualityStructure("ii", tuple(classes), degs[1], dom, 3 * size <= n + 6)
    return None


@lru_cache(maxsize=64)
def _subset_pairs(n: int, size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All size-subsets of range(n) with the flat row/column indices of their pairs."""
    sets = np.array(list(combinations(range(n), size)), dtype=np.int64).reshape(-1, size)
    ia, ib = np.triu_indices(size, 1)
    return sets, sets[:, ia], sets[:, ib]


def set_surplus_values(s: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray]:
    """(subsets, s(W)) for every W of the given size, from a pair-surplus matrix."""
    sets, a, b = _subset_pairs(s.shape[0], size)
    return sets, s[a, b].sum(axis=1)


def _check_set_surplus(t, ctx):
    s = ctx.surplus
    tight = 0
    min_slack = None
    for k in range(2, min(t.n, ctx.set_size) + 1):
        sets, vals = set_surplus_values(s, k)
        slack = vals - surplus_lower_bound(k)
        low = int(slack.min())
        min_slack = low if min_slack is None else min(min_slack, low)
        if low < 0:
            w = sets[int(np.argmax(slack < 0))].tolist()
            return TheoremCheckResult(TheoremId.SET_SURPLUS, False, witness=_witness(t, set=w))
        for r in np.flatnonzero(slack == 0).tolist():
            tight += 1
            w = sets[r].tolist()
            st = surplus_equality_structure(t, w)
            if st is None or not st.valid:
                return TheoremCheckResult(
                    TheoremId.SET_SURPLUS,
                    False,
                    witness=_witness(t, set=w, equality=True),
                    details={"structure": None if st is None else st.case},
                )
    return TheoremCheckResult(TheoremId.SET_SURPLUS, True, details={"tight_sets": tight, "min_slack": min_slack})


def _check_reg_surplus(t, ctx):
    if ctx.irregularity != 0:
        return TheoremCheckResult(TheoremId.REG_SURPLUS, True, True)
    s = ctx.surplus
    for k in range(2, min(t.n, ctx.set_size) + 1):
        sets, vals = set_surplus_values(s, k)
        bad = np.flatnonzero(vals < comb(k, 2))
        if bad.size:
            return TheoremCheckResult(TheoremId.REG_SURPLUS, False, witness=_witness(t, set=sets[bad[0]].tolist()))
    return TheoremCheckResult(TheoremId.REG_SURPLUS, True)


def _check_i_pi(t, ctx):
    i, pi = ctx.irregularity, ctx.pi2[0]
    bound = t.n - 4 * pi - 3
    ok = i <= bound
    return TheoremCheckResult(
        TheoremId.I_PI,
        ok,
        witness=None if ok else _witness(t, irregularity=i, pi2=pi),
        details={"irregularity": i, "pi2": pi, "bound": bound, "slack": bound - i},
    )


def _implication(tid, t, ctx, hypothesis: bool, details: dict):
    details = dict(details, hypothesis=hypothesis)
    if not hypothesis:
        return TheoremCheckResult(tid, True, True, details=details)
    verdict = ctx.verdict()
    details["extendable"] = verdict.extendable
    if verdict.extendable:
        return TheoremCheckResult(tid, True, details=details)
    return TheoremCheckResult(tid, False, witness=_witness(t, path=list(verdict.certificate.vertices)), details=details)


def _check_thm15(t, ctx):
    n, pi = t.n, ctx.pi2[0]
    hyp = ctx.irregularity == 0 and n >= 9 and 12 * pi > n - 9
    return _implication(TheoremId.THM15, t, ctx, hyp, {"pi2": pi, "threshold": (n - 9) / 12})


def _check_thm16(t, ctx):
    n, pi = t.n, ctx.pi2[0]
    hyp = 36 * pi > 7 * n - 10
    return _implication(TheoremId.THM16, t, ctx, hyp, {"pi2": pi, "threshold": (7 * n - 10) / 36})


def _check_thm17(t, ctx):
    n, pi, i = t.n, ctx.pi2[0], ctx.irregularity
    hyp = n >= 9 and 12 * pi > n - 9 and 6 * i < 12 * pi - (n + 8)
    details = {"pi2": pi, "irregularity": i, "bound": 2 * pi - (n + 8) / 6}
    if n >= 9 and 12 * pi > n - 9:
        # (6 pi - (n-5)/2) - (2 pi - (n+8)/6), exact
        slack = Fraction(6 * pi) - Fraction(n - 5, 2) - (Fraction(2 * pi) - Fraction(n + 8, 6))
        details["case_slack"] = _frac(slack)
        if slack <= 0:
            return TheoremCheckResult(TheoremId.THM17, False, witness=_witness(t), details=details)
    return _implication(TheoremId.THM17, t, ctx, hyp, details)


def _check_thm18(t, ctx):
    hyp = t.n >= 7 and is_doubly_regular(t)
    return _implication(TheoremId.THM18, t, ctx, hyp, {"n": t.n})


def _check_lb_p(t, ctx):
    pi = ctx.pi2[0]
    if pi < 1:
        return TheoremCheckResult(TheoremId.LB_P, True, True, details={"pi2": pi})
    certs = ctx.certificates()
    bound = 3 * pi + 3
    for path in certs:
        if path.order < bound:
            return TheoremCheckResult(
                TheoremId.LB_P, False, witness=_witness(t, path=list(path.vertices)), details={"bound": bound}
            )
    return TheoremCheckResult(
        TheoremId.LB_P, True, not certs, details={"pi2": pi, "bound": bound, "certificates": len(certs)}
    )


def _check_hybrid(t, ctx):
    i = ctx.irregularity
    applicable = 0
    worst = None
    for path in ctx.certificates():
        if path.order < 4:
            continue
        pc = classify_against_path(t, path)
        if not pc.interior_has_hybrid:
            continue
        applicable += 1
        worst = pc.h if worst is None else max(worst, pc.h)
        if pc.h > i + 2:
            return TheoremCheckResult(
                TheoremId.HYBRID,
                False,
                witness=_witness(t, path=list(path.vertices)),
                details={"h": pc.h, "irregularity": i},
            )
    return TheoremCheckResult(
        TheoremId.HYBRID, True, applicable == 0, details={"applicable": applicable, "max_h": worst, "irregularity": i}
    )


class _Context:
    """Lazily shared quantities for the checks on one tournament."""

    def __init__(self, t: Tournament, set_size: int = DEFAULT_SET_SIZE):
        self.t = t
        self.set_size = set_size
        self.pi2 = pi2_with_pair(t)
        self.irregularity = irregularity(t)
        self.p2m = p2_matrix(t)
        self._verdict = None
        self._certs = None

    @property
    def surplus(self) -> np.ndarray:
        m = self.p2m
        return m + m.T - 2 * self.pi2[0]

    def verdict(self):
        if self._verdict is None:
            self._verdict = is_path_extendable(self.t)
        return self._verdict

    def certificates(self) -> list[DirectedPath]:
        if self._certs is None:
            self._certs = nonextendable_paths(self.t)
        return self._certs


_CHECKS = {
    TheoremId.PI2_SUP: _check_pi2_sup,
    TheoremId.DEG_IDENT: _check_deg_ident,
    TheoremId.P2_DIFF: _check_p2_diff,
    TheoremId.PAIR_SURPLUS: _check_pair_surplus,
    TheoremId.SET_SURPLUS: _check_set_surplus,
    TheoremId.REG_SURPLUS: _check_reg_surplus,
    TheoremId.I_PI: _check_i_pi,
    TheoremId.THM15: _check_thm15,
    TheoremId.THM16: _check_thm16,
    TheoremId.THM17: _check_thm17,
    TheoremId.THM18: _check_thm18,
    TheoremId.LB_P: _check_lb_p,
    TheoremId.HYBRID: _check_hybrid,
}


def check(t: Tournament, theorem_id: TheoremId | str, set_size: int = DEFAULT_SET_SIZE) -> TheoremCheckResult:
    return check_many(t, [theorem_id], set_size)[0]


def check_many(
    t: Tournament, theorem_ids: Iterable[TheoremId | str], set_size: int = DEFAULT_SET_SIZE
) -> list[TheoremCheckResult]:
    """Run several checks sharing one context; set checks cover all W with 2 <= |W| <= set_size."""
    ctx = _Context(t, set_size)
    return [_CHECKS[TheoremId(tid)](t, ctx) for tid in theorem_ids]


def recheck_witness(result: TheoremCheckResult) -> bool:
    """Re-establish a reported violation from the serialized witness alone.

    Returns True when the witness really does violate the statement.
    """
    if result.witness is None:
        return False
    w = result.witness
    t = decode_trn(w["trn"])
    tid = result.theorem_id
    pi = pi2_with_pair(t)[0]
    i = irregularity(t)
    n = t.n
    if tid == TheoremId.I_PI:
        return i > n - 4 * pi - 3
    if tid == TheoremId.PI2_SUP:
        u, v = w["pair"]
        bound = Fraction(n - 3, 4) if n % 2 else Fraction(n - 4, 4)
        return p2(t, u, v) == pi and pi > bound
    if tid == TheoremId.DEG_IDENT:
        return 2 * min_degree(t) != n - i - 1
    if tid == TheoremId.P2_DIFF:
        u, v = w["pair"]
        d = t.out_degrees
        return p2(t, u, v) - p2(t, v, u) != d[u] - d[v] - 1
    if tid == TheoremId.PAIR_SURPLUS:
        u, v = w["pair"]
        return _pair_surplus_violation(t, p2_matrix(t), pi, u, v)
    if tid in (TheoremId.SET_SURPLUS, TheoremId.REG_SURPLUS):
        ws = w["set"]
        val = sum(p2(t, a, b) + p2(t, b, a) - 2 * pi for a, b in combinations(ws, 2))
        if tid == TheoremId.REG_SURPLUS:
            return is_regular(t) and val < comb(len(ws), 2)
        if val < surplus_lower_bound(len(ws)):
            return True
        st = surplus_equality_structure(t, ws)
        return val == surplus_lower_bound(len(ws)) and (st is None or not st.valid)
    if "path" in w:
        path = DirectedPath(tuple(w["path"]))
        if extend_path(t, path) is not None:
            return False
        if tid == TheoremId.LB_P:
            return pi >= 1 and path.order < 3 * pi + 3
        if tid == TheoremId.HYBRID:
            pc = classify_against_path(t, path)
            return path.order >= 4 and pc.interior_has_hybrid and pc.h > i + 2
        return True  # an implication theorem whose hypothesis is re-evaluated by the caller
    return False


# -- exhaustive sweeps ----------------------------------------------------------------------

_BATCHED = {
    TheoremId.PI2_SUP,
    TheoremId.DEG_IDENT,
    TheoremId.P2_DIFF,
    TheoremId.PAIR_SURPLUS,
    TheoremId.REG_SURPLUS,
    TheoremId.I_PI,
}


def batch_adjacency(n: int, codes: np.ndarray) -> np.ndarray:
    """Adjacency matrices for tournament indices; index bits read MSB-first as the TRN pair string."""
    m = n * (n - 1) // 2
    codes = np.asarray(codes, dtype=np.int64)
    a = np.zeros((len(codes), n, n), dtype=np.int16)
    for idx, (i, j) in enumerate(combinations(range(n), 2)):
        b = ((codes >> (m - 1 - idx)) & 1).astype(np.int16)
        a[:, i, j] = b
        a[:, j, i] = 1 - b
    return a


def tournament_from_index(n: int, index: int) -> Tournament:
    m = n * (n - 1) // 2
    return Tournament.from_pairs(n, format(index, f"0{m}b") if m else "")


@dataclass
class BatchInvariants:
    p2: np.ndarray
    degrees: np.ndarray
    pi2: np.ndarray
    irregularity: np.ndarray


def batch_invariants(a: np.ndarray) -> BatchInvariants:
    n = a.shape[1]
    m = np.matmul(a, a)
    off = ~np.eye(n, dtype=bool)
    pi = m[:, off].min(axis=1)
    d = a.sum(axis=2)
    irr = np.abs(2 * d - (n - 1)).max(axis=1)
    return BatchInvariants(m, d, pi, irr)


def batch_failures(n: int, a: np.ndarray, inv: BatchInvariants, tid: TheoremId) -> np.ndarray:
    """Boolean vector: does the batched cheap form of ``tid`` fail on each tournament."""
    m, d, pi, irr = inv.p2, inv.degrees, inv.pi2, inv.irregularity
    if tid == TheoremId.PI2_SUP:
        if n < 3:
            return np.zeros(len(a), bool)
        return 4 * pi > (n - 3 if n % 2 else n - 4)
    if tid == TheoremId.I_PI:
        return irr > n - 4 * pi - 3
    if tid == TheoremId.DEG_IDENT:
        mind = np.minimum(d.min(axis=1), n - 1 - d.max(axis=1))
        return 2 * mind != n - irr - 1
    diff = m - np.transpose(m, (0, 2, 1))
    ddiff = d[:, :, None] - d[:, None, :]
    arc = a.astype(bool)
    off = ~np.eye(n, dtype=bool)[None]
    if tid == TheoremId.P2_DIFF:
        return ((diff != ddiff - 1) & arc).any(axis=(1, 2))
    s = m + np.transpose(m, (0, 2, 1)) - 2 * pi[:, None, None]
    if tid == TheoremId.PAIR_SURPLUS:
        ge = (ddiff >= 0) & off
        bad_fwd = arc & (s < np.abs(ddiff - 1))
        bad_back = ~arc & ((s < np.abs(ddiff + 1)) | (s < 1))
        bad_zero = (s == 0) & ~((ddiff == 1) & arc)
        return (ge & (bad_fwd | bad_back | bad_zero)).any(axis=(1, 2))
    if tid == TheoremId.REG_SURPLUS:
        # on pairs this is exact: any W with s(W) < C(|W|,2) contains a pair with surplus 0
        return (irr == 0) & ((s < 1) & off).any(axis=(1, 2))
    raise KeyError(tid)


@dataclass
class SweepSummary:
    n: int
    theorems: list[str]
    total: int = 0
    examined: int = 0
    failures: dict[str, int] = field(default_factory=dict)
    vacuous: dict[str, int] = field(default_factory=dict)
    first_witness: dict[str, dict] = field(default_factory=dict)
    pi2_min: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "theorems": self.theorems,
            "pi2_min": self.pi2_min,
            "total": self.total,
            "examined": self.examined,
            "failures": self.failures,
            "vacuous": self.vacuous,
            "first_witness": self.first_witness,
        }

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())


def _sweep_chunk(args) -> dict:
    n, lo, hi, ids, pi2_min = args
    ids = [TheoremId(x) for x in ids]
    codes = np.arange(lo, hi, dtype=np.int64)
    a = batch_adjacency(n, codes)
    inv = batch_invariants(a)
    keep = np.ones(len(codes), bool) if pi2_min is None else inv.pi2 >= pi2_min
    out = {"examined": int(keep.sum()), "failures": {}, "vacuous": {}, "first": {}}
    sel = np.flatnonzero(keep)
    for tid in ids:
        out["failures"][tid.value] = 0
        out["vacuous"][tid.value] = 0
        if tid in _BATCHED:
            fails = batch_failures(n, a[sel], BatchInvariants(inv.p2[sel], inv.degrees[sel], inv.pi2[sel], inv.irregularity[sel]), tid)
            bad = sel[fails]
            out["failures"][tid.value] = int(len(bad))
            if tid == TheoremId.REG_SURPLUS:
                out["vacuous"][tid.value] = int((inv.irregularity[sel] != 0).sum())
            if len(bad):
                out["first"][tid.value] = int(codes[bad[0]])
    slow = [tid for tid in ids if tid not in _BATCHED]
    if slow:
        for r in sel.tolist():
            t = tournament_from_index(n, int(codes[r]))
            for res in check_many(t, slow):
                key = res.theorem_id.value
                if res.vacuous:
                    out["vacuous"][key] += 1
                if not res.holds:
                    out["failures"][key] += 1
                    out["first"].setdefault(key, int(codes[r]))
    return out


def sweep_exhaustive(
    n: int,
    theorem_ids: Iterable[TheoremId | str] = ALL_THEOREMS,
    pi2_min: int | None = None,
    jobs: int = 1,
    chunk: int = 1 << 15,
) -> SweepSummary:
    """Check every labelled tournament on n vertices; deterministic for any ``jobs``."""
    if n > EXHAUSTIVE_CAP:
        raise CapacityError(f"exhaustive sweeps stop at n={EXHAUSTIVE_CAP}; use sampling for n={n}")
    if n < 2:
        raise ValueError("n must be at least 2")
    ids = [TheoremId(x).value for x in theorem_ids]
    total = 1 << (n * (n - 1) // 2)
    tasks = [(n, lo, min(lo + chunk, total), ids, pi2_min) for lo in range(0, total, chunk)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_sweep_chunk, tasks))
    else:
        parts = [_sweep_chunk(task) for task in tasks]
    summary = SweepSummary(n, ids, total=total, pi2_min=pi2_min)
    summary.failures = {k: 0 for k in ids}
    summary.vacuous = {k: 0 for k in ids}
    for part in parts:
        summary.examined += part["examined"]
        for k in ids:
            summary.failures[k] += part["failures"][k]
            summary.vacuous[k] += part["vacuous"][k]
            if k in part["first"] and k not in summary.first_witness:
                t = tournament_from_index(n, part["first"][k])
                res = check(t, k)
                summary.first_witness[k] = res.to_dict()
    return summary


def sweep_sampled(
    n: int,
    theorem_ids: Iterable[TheoremId | str],
    samples: int,
    seed: int,
    pi2_min: int | None = None,
) -> SweepSummary:
    """Checks on ``random_tournament(n, seed + i)`` for i < samples."""
    ids = [TheoremId(x).value for x in theorem_ids]
    summary = SweepSummary(n, ids, total=samples, pi2_min=pi2_min)
    summary.failures = {k: 0 for k in ids}
    summary.vacuous = {k: 0 for k in ids}
    for i in range(samples):
        t = random_tournament(n, seed + i)
        if pi2_min is not None and pi2_with_pair(t)[0] < pi2_min:
            continue
        summary.examined += 1
        for res in check_many(t, ids):
            key = res.theorem_id.value
            summary.vacuous[key] += res.vacuous
            if not res.holds:
                summary.failures[key] += 1
                summary.first_witness.setdefault(key, res.to_dict())
    return summary


# -- isomorphism classes ----------------------------------------------------------------------


def _vertex_invariant(t: Tournament, m: np.ndarray, v: int) -> tuple:
    prof = sorted(
        (int(m[v, x]), int(m[x, v]), t.out_rows[v] >> x & 1) for x in range(t.n) if x != v
    )
    return (t.out_degrees[v], tuple(prof))


def canonical_form(t: Tournament) -> tuple[int, Tournament]:
    """Least TRN pair code over all relabellings consistent with a vertex-invariant ordering.

    The invariant is isomorphism-invariant, so restricting the minimisation to
    invariant-sorted labellings still yields a canonical form; within each
    invariant cell every permutation is tried.
    """
    n = t.n
    m = p2_matrix(t)
    keys = [_vertex_invariant(t, m, v) for v in range(n)]
    cells = [[v for v in range(n) if keys[v] == k] for k in sorted(set(keys))]
    a = t.matrix()
    parts = [np.array(list(permutations(c)), dtype=np.int64) for c in cells]
    perms = parts[0]
    for part in parts[1:]:
        perms = np.concatenate(
            [np.repeat(perms, len(part), axis=0), np.tile(part, (len(perms), 1))], axis=1
        )
    I, J = np.triu_indices(n, 1)
    pair_bits = a[perms[:, I], perms[:, J]].astype(np.int64)
    weights = np.left_shift(np.int64(1), np.arange(len(I) - 1, -1, -1, dtype=np.int64))
    codes = pair_bits @ weights
    best = int(np.argmin(codes))
    sigma = perms[best]
    # position i holds old vertex sigma[i]: relabel old -> new
    inverse = [0] * n
    for new, old in enumerate(sigma.tolist()):
        inverse[old] = new
    return int(codes[best]), t.relabel(inverse)


def canonical_code(t: Tournament) -> int:
    return canonical_form(t)[0]


def tournament_classes(n: int) -> list[Tournament]:
    """One canonical representative per isomorphism class of n-vertex tournaments (n <= 8)."""
    if n > 8:
        raise CapacityError("class enumeration is limited to n <= 8")
    if n == 1:
        return []
    reps = {canonical_code(Tournament.from_arcs(2, [(0, 1)])): Tournament.from_arcs(2, [(0, 1)])}
    for size in range(3, n + 1):
        new: dict[int, Tournament] = {}
        for base in reps.values():
            for nb in range(1 << (size - 1)):
                rows = list(base.out_rows) + [0]
                for u in range(size - 1):
                    if nb >> u & 1:
                        rows[size - 1] |= 1 << u
                    else:
                        rows[u] |= 1 << (size - 1)
                code, canon = canonical_form(Tournament(size, tuple(rows)))
                new.setdefault(code, canon)
        reps = new
    return [reps[c] for c in sorted(reps)]


def enumerate_regular(n: int) -> list[Tournament]:
    """All regular tournaments on n (odd, <= 9) vertices up to isomorphism.

    Vertex 0 is fixed with out-neighbours 1..k and in-neighbours k+1..2k, each
    side carrying a canonical representative of its own isomorphism class; the
    arcs between the two sides are found by regular-completion backtracking and
    the results are deduplicated by canonical form.
    """
    if n % 2 == 0 or n < 3:
        raise ValueError(f"regular tournaments need odd n >= 3, got {n}")
    if n > 9:
        raise CapacityError("regular enumeration is limited to n <= 9")
    k = (n - 1) // 2
    inner = tournament_classes(k) if k >= 2 else [None]
    full = (1 << n) - 1
    found: dict[int, Tournament] = {}
    for left, right in product(inner, inner):
        rows = [0] * n
        rows[0] = sum(1 << v for v in range(1, k + 1))
        for v in range(k + 1, n):
            rows[v] |= 1
        for side, offset in ((left, 1), (right, k + 1)):
            if side is None:
                continue
            for u, r in enumerate(side.out_rows):
                rows[offset + u] |= r << offset
        fixed = [rows[u] | sum(1 << w for w in range(n) if rows[w] >> u & 1) for u in range(n)]
        free = [full & ~fixed[u] & ~(1 << u) for u in range(n)]
        for done in regular_completions(n, rows, free):
            code, canon = canonical_form(Tournament(n, done))
            found.setdefault(code, canon)
    return [found[c] for c in sorted(found)]


def rediscover_t0() -> Tournament:
    """The unique regular 7-vertex tournament that is not {2+}-path extendable."""
    failing = [t for t in enumerate_regular(7) if not is_path_extendable(t, 2).extendable]
    if len(failing) != 1:
        raise AssertionError(f"expected exactly one failing regular class on 7 vertices, found {len(failing)}")
    return failing[0]
