"""The factorization criterion: Moebius-weighted dimension sums over flags.

For a poset P of subspaces at one object and a pair (b, c) of elements, the
score is

    sum over a <= b of  mu(a) * (dim a - dim(a meet c))

with mu(a) = two_var(a, b) in "standard" mode and mu(a) = one_var(a) in
"literal" mode.  A representation passes when every object and every ordered
pair scores >= 0.  Standard mode is the default: it is the reading under
which known worked examples come out right; literal mode is kept so the
divergence between the two is observable.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import ValidationError
from .flag import FlagAssignment
from .linalg import Subspace
from .poset import MobiusTable, SubspacePoset, mobius
from .rep import Representation

MU_MODES = ("standard", "literal")


@dataclass(frozen=True)
class CriterionValue:
    object_id: str
    b: Subspace
    c: Subspace
    value: int
    mu_mode: str

    def to_json(self) -> dict:
        return {
            "object": self.object_id,
            "b_basis": self.b.to_json(),
            "c_basis": self.c.to_json(),
            "value": self.value,
        }


@dataclass(eq=False)
class CriterionReport:
    passed: bool
    mu_mode: str
    witnesses: Tuple[CriterionValue, ...]
    poset_sizes: Dict[str, int]
    mode_disagreements: int
    disagreement_examples: Tuple[CriterionValue, ...]
    saturated: bool
    timing_ms: float

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        # timing is deliberately left out: output bytes must be a function of
        # input bytes and flags alone.
        return {
            "verdict": self.verdict,
            "mu_mode": self.mu_mode,
            "witnesses": [w.to_json() for w in self.witnesses],
            "poset_sizes": dict(sorted(self.poset_sizes.items())),
            "mode_disagreements": self.mode_disagreements,
            "disagreement_examples": [w.to_json() for w in self.disagreement_examples],
            "saturated": self.saturated,
        }


def _pair_value(
    p: SubspacePoset, mu: MobiusTable, bi: int, ci: int, mode: str
) -> int:
    total = 0
    for ai in range(len(p.elements)):
        if not p.leq[ai][bi]:
            continue
        weight = mu.two_var[ai][bi] if mode == "standard" else mu.one_var[ai]
        if weight == 0:
            continue
        a = p.elements[ai]
        overlap = p.elements[p.meet(ai, ci)]
        total += weight * (a.dim - overlap.dim)
    return total


def evaluate_pair(
    p: SubspacePoset,
    mu: MobiusTable,
    b: Subspace,
    c: Subspace,
    mode: str = "standard",
) -> int:
    if mode not in MU_MODES:
        raise ValidationError(f"unknown mu mode {mode!r}")
    return _pair_value(p, mu, p.index_of(b), p.index_of(c), mode)


def check_poset(
    p: SubspacePoset, object_id: str = "", mu: Optional[MobiusTable] = None
) -> Tuple[List[CriterionValue], List[CriterionValue], int]:
    """All-pairs scan of one poset.

    Returns (standard-mode negatives, literal-mode negatives, count of pairs
    where the two modes land on different sides of zero).
    """
    mu = mu if mu is not None else mobius(p)
    std_neg: List[CriterionValue] = []
    lit_neg: List[CriterionValue] = []
    disagreements = 0
    n = len(p.elements)
    for bi in range(n):
        for ci in range(n):
            v_std = _pair_value(p, mu, bi, ci, "standard")
            v_lit = _pair_value(p, mu, bi, ci, "literal")
            b, c = p.elements[bi], p.elements[ci]
            if v_std < 0:
                std_neg.append(CriterionValue(object_id, b, c, v_std, "standard"))
            if v_lit < 0:
                lit_neg.append(CriterionValue(object_id, b, c, v_lit, "literal"))
            if (v_std < 0) != (v_lit < 0):
                disagreements += 1
    return std_neg, lit_neg, disagreements


def poset_passes(p: SubspacePoset, mu: Optional[MobiusTable] = None, mode: str = "standard") -> bool:
    mu = mu if mu is not None else mobius(p)
    n = len(p.elements)
    return all(
        _pair_value(p, mu, bi, ci, mode) >= 0
        for bi in range(n)
        for ci in range(n)
    )


def check_representation(
    rep: Representation,
    flag: FlagAssignment,
    mode: str = "standard",
) -> CriterionReport:
    """Evaluate every object and every ordered pair; collect all violations."""
    if mode not in MU_MODES:
        raise ValidationError(f"unknown mu mode {mode!r}")
    start = time.perf_counter()
    witnesses: List[CriterionValue] = []
    disagreement_examples: List[CriterionValue] = []
    disagreements = 0
    for oid in sorted(flag.posets):
        p = flag.posets[oid]
        std_neg, lit_neg, dis = check_poset(p, oid)
        disagreements += dis
        chosen = std_neg if mode == "standard" else lit_neg
        witnesses.extend(chosen)
        other = lit_neg if mode == "standard" else std_neg
        seen = {(w.object_id, w.b, w.c) for w in chosen}
        disagreement_examples.extend(
            w for w in other if (w.object_id, w.b, w.c) not in seen
        )
    witnesses.sort(key=lambda w: (w.object_id, w.b.sort_key, w.c.sort_key))
    disagreement_examples.sort(key=lambda w: (w.object_id, w.b.sort_key, w.c.sort_key))
    elapsed = (time.perf_counter() - start) * 1000.0
    return CriterionReport(
        passed=not witnesses,
        mu_mode=mode,
        witnesses=tuple(witnesses),
        poset_sizes=flag.sizes(),
        mode_disagreements=disagreements,
        disagreement_examples=tuple(disagreement_examples[:10]),
        saturated=flag.saturated,
        timing_ms=elapsed,
    )
