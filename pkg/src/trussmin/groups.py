"""Support groups for candidate reduction and the truss-group bound index.

A support group is a maximal set of threshold edges (support exactly k-2)
chained through shared triangles; deleting any member unravels the whole
group, so one representative stands in for all of them.  Truss groups play
the same role one level up: maximal sets of trussness-k edges chained
through triangles whose edges all sit at trussness >= k, crossing only
shared edges of trussness exactly k.  The sum of the sizes of the truss
groups an edge touches bounds its follower count from above.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ContractViolation
from .graph import Graph
from .truss import TrussSubgraph, TrussnessMap


@dataclass
class SupportGroup:
    gid: int
    members: list[int]                      # edge ids, ascending; members[0] is the representative
    pruned_followers: set[int] = field(default_factory=set)

    @property
    def representative(self) -> int:
        return self.members[0]


def find_support_groups(t: TrussSubgraph) -> tuple[list[SupportGroup], list[int]]:
    """Discover support groups and the per-iteration candidate edge set.

    Candidates are one representative per group plus every over-threshold
    edge that shares a triangle with a threshold edge and was not already
    identified as a certain follower of some group.  Everything outside
    that set provably has zero followers.
    """
    g = t.graph
    tris, edge_tris = g.triangle_index()
    threshold = t.k - 2
    alive, sup, tri_alive = t.alive, t.sup, t.tri_alive

    groups: list[SupportGroup] = []
    visited = bytearray(g.m)
    over_adjacent: set[int] = set()

    for start in range(g.m):
        if not alive[start] or sup[start] != threshold or visited[start]:
            continue
        members: list[int] = []
        queue = deque([start])
        visited[start] = 1
        while queue:
            e = queue.popleft()
            members.append(e)
            for ti in edge_tris[e]:
                if not tri_alive[ti]:
                    continue
                for o in tris[ti]:
                    if o == e or not alive[o]:
                        continue
                    if sup[o] == threshold:
                        if not visited[o]:
                            visited[o] = 1
                            queue.append(o)
                    else:
                        over_adjacent.add(o)
        members.sort()
        group = SupportGroup(gid=len(groups), members=members)
        # An over-threshold edge whose slack is exceeded by distinct triangles
        # that each contain a group member must fall with the group.
        hit: dict[int, set[int]] = {}
        for m in members:
            for ti in edge_tris[m]:
                if not tri_alive[ti]:
                    continue
                for o in tris[ti]:
                    if alive[o] and sup[o] > threshold:
                        hit.setdefault(o, set()).add(ti)
        for o, triangles in hit.items():
            if len(triangles) > sup[o] - threshold:
                group.pruned_followers.add(o)
        groups.append(group)

    pruned_all: set[int] = set()
    for grp in groups:
        pruned_all |= grp.pruned_followers
    candidates = sorted({grp.representative for grp in groups}
                        | (over_adjacent - pruned_all))
    return groups, candidates


class GroupIndex:
    """Per-level partition of trussness-k edges into truss groups.

    Levels are materialized lazily: construction builds the level of the
    active query; refreshes materialize any level touched by trussness
    changes.  Group ids are unique across levels and survive refreshes of
    unrelated regions.
    """

    __slots__ = ("graph", "tau", "primary_level", "levels", "next_gid",
                 "alive_snapshot", "last_dissolved")

    def __init__(self, graph: Graph, tau: TrussnessMap, primary_level: int):
        self.graph = graph
        self.tau = tau
        self.primary_level = primary_level
        self.levels: dict[int, tuple[dict[int, int], dict[int, list[int]]]] = {}
        self.next_gid = 0
        self.alive_snapshot = bytearray(tau.alive)
        # group ids dissolved by the most recent refresh; lets callers drop
        # anything they derived from those groups
        self.last_dissolved: set[int] = set()

    # -- construction helpers ------------------------------------------------

    def _expand_group(self, level: int, start: int, gid_of: dict[int, int],
                      gid: int) -> tuple[list[int], set[int]]:
        """BFS over trussness-`level` edges through qualifying triangles.

        Returns the sorted member list plus the ids of any foreign groups
        the expansion touched; a non-empty contact set during a refresh
        means the dissolve scope was too small.
        """
        g, tau = self.graph, self.tau
        tris, edge_tris = g.triangle_index()
        values, alive = tau.values, tau.alive
        members = []
        contacts: set[int] = set()
        queue = deque([start])
        gid_of[start] = gid
        while queue:
            e = queue.popleft()
            members.append(e)
            for ti in edge_tris[e]:
                a, b, c = tris[ti]
                if not (alive[a] and alive[b] and alive[c]):
                    continue
                if values[a] < level or values[b] < level or values[c] < level:
                    continue
                for o in (a, b, c):
                    if o == e or values[o] != level:
                        continue
                    other = gid_of.get(o)
                    if other is None:
                        gid_of[o] = gid
                        queue.append(o)
                    elif other != gid:
                        contacts.add(other)
        members.sort()
        return members, contacts

    def build_level(self, level: int) -> None:
        gid_of: dict[int, int] = {}
        group_members: dict[int, list[int]] = {}
        values, alive = self.tau.values, self.tau.alive
        for e in range(self.graph.m):
            if alive[e] and values[e] == level and e not in gid_of:
                gid = self.next_gid
                self.next_gid += 1
                group_members[gid], _ = self._expand_group(level, e, gid_of, gid)
        self.levels[level] = (gid_of, group_members)

    def ensure_level(self, level: int) -> None:
        """Materialize a level on first access instead of during refreshes."""
        if level >= 3 and level not in self.levels:
            self.build_level(level)

    # -- queries ---------------------------------------------------------------

    def group_sizes(self, level: Optional[int] = None) -> dict[int, int]:
        level = self.primary_level if level is None else level
        self.ensure_level(level)
        gid_of, members = self.levels[level]
        return {gid: len(m) for gid, m in members.items()}

    def adjacent_gids(self, eid: int, level: Optional[int] = None) -> set[int]:
        """Ids of the truss groups the edge touches through truss triangles."""
        level = self.primary_level if level is None else level
        self.ensure_level(level)
        gid_of, _ = self.levels[level]
        g, tau = self.graph, self.tau
        tris, edge_tris = g.triangle_index()
        values, alive = tau.values, tau.alive
        out: set[int] = set()
        if values[eid] == level:
            out.add(gid_of[eid])
        for ti in edge_tris[eid]:
            a, b, c = tris[ti]
            if not (alive[a] and alive[b] and alive[c]):
                continue
            if values[a] < level or values[b] < level or values[c] < level:
                continue
            for o in (a, b, c):
                if o != eid and values[o] == level:
                    out.add(gid_of[o])
        return out


def build_truss_group_index(g: Graph, tau: TrussnessMap, k: int) -> GroupIndex:
    """Index the trussness-k groups of the current graph state."""
    if k < 3:
        raise ValueError("k must be >= 3")
    idx = GroupIndex(g, tau, k)
    idx.build_level(k)
    return idx


def upper_bound(idx: GroupIndex, e) -> int:
    """Bound on the follower count of `e`: total size of its adjacent groups."""
    eid = e if isinstance(e, int) else idx.graph.edge_id(*e)
    return upper_bounds(idx, [eid])[eid]


def upper_bounds(idx: GroupIndex, eids) -> dict[int, int]:
    """`upper_bound` for many edges in one pass; the solver's hot path."""
    k = idx.primary_level
    idx.ensure_level(k)
    gid_of, members = idx.levels[k]
    values, alive = idx.tau.values, idx.tau.alive
    tris, edge_tris = idx.graph.triangle_index()
    sizes = {gid: len(ms) for gid, ms in members.items()}
    out: dict[int, int] = {}
    for eid in eids:
        if not alive[eid] or values[eid] < k:
            raise ContractViolation(
                f"edge id {eid} is not in the current truss; index is stale")
        gids: set[int] = set()
        if values[eid] == k:
            gids.add(gid_of[eid])
        for ti in edge_tris[eid]:
            a, b, c = tris[ti]
            if alive[a] and alive[b] and alive[c] \
                    and values[a] >= k and values[b] >= k and values[c] >= k:
                if a != eid and values[a] == k:
                    gids.add(gid_of[a])
                if b != eid and values[b] == k:
                    gids.add(gid_of[b])
                if c != eid and values[c] == k:
                    gids.add(gid_of[c])
        out[eid] = sum(sizes[g] for g in gids)
    return out


def refresh_index(idx: GroupIndex, changed: Iterable[int], g: Graph,
                  tau: TrussnessMap) -> GroupIndex:
    """Repair the index after a deletion changed some trussness values.

    Dissolves every group holding a changed (or deleted) edge or sharing a
    pre-deletion triangle with one, then regrows groups over that region.
    Untouched groups keep their ids and member lists.  The result matches
    rebuilding every materialized level from scratch.
    """
    changed = set(changed)
    old_tau = idx.tau
    old_alive = idx.alive_snapshot
    deleted = [e for e in range(g.m) if old_alive[e] and not tau.alive[e]]
    idx.last_dissolved = set()
    if not changed and not deleted:
        return idx

    touched_levels: set[int] = set()
    for c in changed:
        touched_levels.add(old_tau.values[c])
        touched_levels.add(tau.values[c])
    for d in deleted:
        touched_levels.add(old_tau.values[d])
        # A deleted edge can be a pure bridge in any level below its own
        # trussness: losing its triangles may split a group there without
        # any trussness changing.
        for lv in idx.levels:
            if lv <= old_tau.values[d]:
                touched_levels.add(lv)
    touched_levels = {lv for lv in touched_levels if lv >= 3}

    tris, edge_tris = g.triangle_index()
    affected = changed | set(deleted)

    # Levels nobody has looked at yet stay unmaterialized; they build lazily
    # on first access against whatever the state is then.
    to_splice = [lv for lv in idx.levels if lv in touched_levels]

    # Rebind current state first: regrown regions must see the new values.
    idx.tau = tau

    for level in to_splice:
        gid_of, group_members = idx.levels[level]
        dissolve: set[int] = set()
        for x in affected:
            if x in gid_of:
                dissolve.add(gid_of[x])
            for ti in edge_tris[x]:
                a, b, c = tris[ti]
                if not (old_alive[a] and old_alive[b] and old_alive[c]):
                    continue
                for o in (a, b, c):
                    if o != x and o in gid_of:
                        dissolve.add(gid_of[o])
        if not dissolve and not any(
                tau.alive[c] and tau.values[c] == level for c in changed):
            continue
        idx.last_dissolved |= dissolve
        region: set[int] = set()
        for gid in dissolve:
            region.update(group_members.pop(gid))
        for e in region:
            del gid_of[e]
        region |= changed
        seeds = sorted(e for e in region
                       if tau.alive[e] and tau.values[e] == level)
        for e in seeds:
            if e in gid_of:
                continue
            gid = idx.next_gid
            idx.next_gid += 1
            members, contacts = idx._expand_group(level, e, gid_of, gid)
            if contacts:
                raise AssertionError(
                    f"refresh at level {level} reached undissolved groups {sorted(contacts)}")
            group_members[gid] = members

    idx.alive_snapshot = bytearray(tau.alive)
    return idx
