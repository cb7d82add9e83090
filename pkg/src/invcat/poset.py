"""Finite meet-closed posets of subspaces, Hasse diagrams, Moebius functions.

Two Moebius variants are kept side by side:

* ``one_var`` -- the single-argument recursion mu(min) = 1,
  mu(y) = -sum(mu(x) for x < y).
* ``two_var`` -- the standard incidence function mu(a, a) = 1,
  mu(a, b) = -sum(mu(a, z) for a <= z < b).

The factorization criterion defaults to ``two_var``; ``one_var`` is retained
because the two disagree on some posets and the divergence is worth
reporting (see the criterion module).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, Union

from .errors import ElementNotInPoset, MissingBounds, NotMeetClosed
from .fields import Field
from .linalg import Subspace, sub_intersect


@dataclass(frozen=True, eq=False)
class SubspacePoset:
    """Subspaces ordered by containment, closed under pairwise intersection.

    ``elements`` are sorted by (dim, basis), which is a linear extension of
    containment: every index order scan from 0 upward visits subspaces before
    their superspaces.
    """

    field: Field
    ambient_dim: int
    elements: Tuple[Subspace, ...]
    leq: Tuple[Tuple[bool, ...], ...]       # leq[i][j]: elements[i] <= elements[j]
    covers: Tuple[Tuple[int, int], ...]     # (i, j): j covers i
    meet_table: Tuple[Tuple[int, ...], ...]
    _index: Dict[Subspace, int] = dc_field(repr=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, s: Subspace) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise ElementNotInPoset(f"subspace of dim {s.dim} is not a poset element") from None

    @property
    def zero_index(self) -> int:
        return 0

    @property
    def full_index(self) -> int:
        return len(self.elements) - 1

    def meet(self, i: int, j: int) -> int:
        return self.meet_table[i][j]

    def down_set(self, j: int) -> List[int]:
        return [i for i in range(len(self.elements)) if self.leq[i][j]]

    def atoms(self) -> List[int]:
        return [j for (i, j) in self.covers if i == self.zero_index]


def build_poset(subspaces: Iterable[Subspace]) -> SubspacePoset:
    """Validate bounds and meet-closure, then assemble order/cover/meet data."""
    elems = sorted(set(subspaces), key=lambda s: s.sort_key)
    if not elems:
        raise MissingBounds("empty subspace family")
    field = elems[0].field
    ambient = elems[0].ambient_dim
    for s in elems:
        if s.field != field or s.ambient_dim != ambient:
            raise MissingBounds("subspace family mixes ambient spaces")
    if not elems[0].is_zero:
        raise MissingBounds("family does not contain the zero subspace")
    if not elems[-1].is_full:
        raise MissingBounds("family does not contain the full space")
    n = len(elems)
    index = {s: i for i, s in enumerate(elems)}
    leq = [[False] * n for _ in range(n)]
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            if a.dim <= b.dim:
                leq[i][j] = b.contains(a)
    meet = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m = sub_intersect(elems[i], elems[j])
            k = index.get(m)
            if k is None:
                raise NotMeetClosed(
                    "family is not closed under intersection",
                    left=elems[i].to_json(),
                    right=elems[j].to_json(),
                    missing=m.to_json(),
                )
            meet[i][j] = meet[j][i] = k
    covers = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if any(leq[i][z] and leq[z][j] for z in range(n) if z != i and z != j):
                continue
            covers.append((i, j))
    return SubspacePoset(
        field=field,
        ambient_dim=ambient,
        elements=tuple(elems),
        leq=tuple(tuple(r) for r in leq),
        covers=tuple(sorted(covers)),
        meet_table=tuple(tuple(r) for r in meet),
        _index=index,
    )


@dataclass(frozen=True, eq=False)
class MobiusTable:
    one_var: Tuple[int, ...]
    two_var: Tuple[Tuple[int, ...], ...]  # two_var[i][j] for elements[i] <= elements[j], else 0


def mobius(p: SubspacePoset) -> MobiusTable:
    n = len(p.elements)
    one = [0] * n
    for j in range(n):
        if j == p.zero_index:
            one[j] = 1
        else:
            one[j] = -sum(one[i] for i in range(n) if p.leq[i][j] and i != j)
    two = [[0] * n for _ in range(n)]
    for a in range(n):
        two[a][a] = 1
        for b in range(n):
            if b == a or not p.leq[a][b]:
                continue
            two[a][b] = -sum(two[a][z] for z in range(n) if p.leq[a][z] and p.leq[z][b] and z != b)
    return MobiusTable(tuple(one), tuple(tuple(r) for r in two))


PointFunction = Union[Sequence[int], Callable[[int], int]]


def _as_values(p: SubspacePoset, f: PointFunction) -> List[int]:
    if callable(f):
        return [f(i) for i in range(len(p.elements))]
    vals = list(f)
    if len(vals) != len(p.elements):
        raise ElementNotInPoset("function values do not cover the poset")
    return vals


def mobius_invert(p: SubspacePoset, phi_hat: PointFunction, table: MobiusTable = None) -> List[int]:
    """Recover phi from its down-set sums: phi(y) = sum mu(x, y) phi_hat(x).

    Inverse of the forward operator phi_hat(y) = sum(phi(x) for x <= y).
    """
    mu = table if table is not None else mobius(p)
    vals = _as_values(p, phi_hat)
    n = len(p.elements)
    return [
        sum(mu.two_var[x][y] * vals[x] for x in range(n) if p.leq[x][y])
        for y in range(n)
    ]


def forward_sum(p: SubspacePoset, phi: PointFunction) -> List[int]:
    vals = _as_values(p, phi)
    n = len(p.elements)
    return [sum(vals[x] for x in range(n) if p.leq[x][y]) for y in range(n)]


def _dot_label(s: Subspace) -> str:
    rows = ",".join("(" + ",".join(str(s.field.entry_to_json(x)) for x in r) + ")" for r in s.basis)
    return f"dim {s.dim}: [{rows}]" if rows else "dim 0"


def export_dot(p: SubspacePoset, name: str = "poset") -> str:
    """Graphviz DOT text for the Hasse diagram; edges point up the order."""
    lines = [f"digraph {json.dumps(name)} {{", "  rankdir=BT;"]
    for i, s in enumerate(p.elements):
        lines.append(f"  n{i} [label={json.dumps(_dot_label(s))}];")
    for (i, j) in p.covers:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
