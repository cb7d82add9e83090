"""Per-object subspace families closed under images, preimages and meets.

``compute_flag`` computes the least fixpoint of four rules, starting from the
seed {0, full} at every object:

* image: for a generator f: x -> y and a in flag(x), add f(a) to flag(y)
* preimage: for b in flag(y), add f^-1(b) to flag(x)
* intersect: flag(o) is closed under pairwise intersection
* seed: 0 and the full space belong to flag(o)

Rounds are synchronous (each round derives only from the previous round's
elements), so the result does not depend on scheduling.  Termination over an
infinite field is not guaranteed in general; the limits make the closure fail
loudly instead of spinning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ClosureDivergence
from .linalg import Subspace, map_image, map_preimage, sub_intersect
from .poset import SubspacePoset, build_poset, export_dot
from .rep import Generator, Representation


@dataclass(frozen=True)
class ClosureLimits:
    max_rounds: int = 64
    max_elements_per_object: int = 4096


@dataclass(frozen=True)
class Witness:
    """How a subspace first entered the closure."""

    rule: str                      # "seed" | "image" | "preimage" | "intersect"
    generator: Optional[str] = None
    sources: Tuple[Subspace, ...] = ()

    def to_json(self) -> dict:
        obj = {"rule": self.rule}
        if self.generator is not None:
            obj["generator"] = self.generator
        if self.sources:
            obj["sources"] = [s.to_json() for s in self.sources]
        return obj


@dataclass(eq=False)
class FlagAssignment:
    posets: Dict[str, SubspacePoset]
    provenance: Dict[str, Dict[Subspace, Witness]]
    rounds: int
    saturated: bool = False
    extra_maps: Tuple[Generator, ...] = ()

    @property
    def total_elements(self) -> int:
        return sum(len(p) for p in self.posets.values())

    def sizes(self) -> Dict[str, int]:
        return {oid: len(p) for oid, p in self.posets.items()}

    def element_sets(self) -> Dict[str, frozenset]:
        return {oid: frozenset(p.elements) for oid, p in self.posets.items()}

    def to_json(self) -> dict:
        objects = {}
        for oid in sorted(self.posets):
            p = self.posets[oid]
            prov = self.provenance[oid]
            objects[oid] = {
                "ambient_dim": p.ambient_dim,
                "poset_size": len(p),
                "elements": [
                    {
                        "dim": s.dim,
                        "basis": s.to_json(),
                        "provenance": prov[s].to_json(),
                    }
                    for s in p.elements
                ],
            }
        return {
            "objects": objects,
            "rounds": self.rounds,
            "total_elements": self.total_elements,
            "saturated": self.saturated,
        }

    def export_dot(self, oid: str) -> str:
        return export_dot(self.posets[oid], name=oid)


def _check_budget(oid: str, count: int, rule: str, limits: ClosureLimits, rounds: int) -> None:
    if count > limits.max_elements_per_object:
        raise ClosureDivergence(
            f"flag({oid}) exceeded {limits.max_elements_per_object} elements "
            f"while applying rule {rule!r}",
            object=oid,
            rule=rule,
            partial_size=count,
            rounds=rounds,
        )


def compute_flag(
    rep: Representation,
    limits: ClosureLimits = ClosureLimits(),
    extra_maps: Sequence[Generator] = (),
) -> FlagAssignment:
    """Least fixpoint of the closure rules, deduplicated by canonical form.

    ``extra_maps`` adjoins additional linear maps (same closure rules) without
    touching the representation itself; the pipeline uses this to saturate a
    passing flag with constructed pseudo-inverses.
    """
    fam: Dict[str, Dict[Subspace, Witness]] = {}
    fresh: Dict[str, List[Subspace]] = {}
    for o in rep.objects:
        zero = Subspace.zero(rep.field, o.dim)
        full = Subspace.full(rep.field, o.dim)
        fam[o.id] = {zero: Witness("seed")}
        if full not in fam[o.id]:
            fam[o.id][full] = Witness("seed")
        fresh[o.id] = sorted(fam[o.id], key=lambda s: s.sort_key)
    maps: List[Generator] = list(rep.generators) + list(extra_maps)

    rounds = 0
    while True:
        if rounds >= limits.max_rounds:
            raise ClosureDivergence(
                f"no fixpoint after {limits.max_rounds} rounds",
                rule="rounds",
                rounds=rounds,
                sizes={oid: len(members) for oid, members in fam.items()},
            )
        rounds += 1
        new: Dict[str, Dict[Subspace, Witness]] = {oid: {} for oid in fam}

        def offer(oid: str, s: Subspace, w: Witness, rule: str) -> None:
            if s not in fam[oid] and s not in new[oid]:
                new[oid][s] = w
                _check_budget(oid, len(fam[oid]) + len(new[oid]), rule, limits, rounds)

        # semi-naive: only derive from elements added in the previous round;
        # older combinations were already offered.
        for g in maps:
            for a in fresh[g.dom]:
                offer(g.cod, map_image(g.matrix, a), Witness("image", g.id, (a,)), "image")
            for b in fresh[g.cod]:
                offer(g.dom, map_preimage(g.matrix, b), Witness("preimage", g.id, (b,)), "preimage")
        for oid, members in fam.items():
            fresh_set = set(fresh[oid])
            elems = sorted(members, key=lambda s: s.sort_key)
            for i, a in enumerate(elems):
                for b in elems[i + 1:]:
                    if a not in fresh_set and b not in fresh_set:
                        continue
                    offer(oid, sub_intersect(a, b), Witness("intersect", None, (a, b)), "intersect")
        if all(not added for added in new.values()):
            break
        for oid, added in new.items():
            fam[oid].update(added)
            fresh[oid] = sorted(added, key=lambda s: s.sort_key)

    posets = {oid: build_poset(members.keys()) for oid, members in fam.items()}
    return FlagAssignment(
        posets=posets,
        provenance=fam,
        rounds=rounds,
        extra_maps=tuple(extra_maps),
    )
