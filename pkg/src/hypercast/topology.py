"""Per-user segment storage and its weighted-hypergraph model.

A topology assigns each user v in 1..V a set of stored segment ids out
of 1..W.  Grouping segments by their exact holder set yields the model
hypergraph: holder sets of size 2..V-1 become edges weighted by group
size; segments held by a single user or by everyone cannot form a valid
edge and are reported separately as leftovers.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .hypergraph import Hypergraph

PlacementMap = dict  # frozenset[int] -> tuple[int, ...]

__all__ = ["StorageTopology", "ValidationReport", "PlacementMap", "from_hypergraph"]


@dataclass(frozen=True)
class ValidationReport:
    coverage_ok: bool
    missing_segments: tuple[int, ...]
    holder_histogram: dict[int, int]
    singleton_segments: tuple[int, ...]
    universal_segments: tuple[int, ...]
    connected: bool
    quasi_tree: bool


class StorageTopology:
    """Immutable map from users 1..V to stored segment subsets of 1..W."""

    __slots__ = ("_num_segments", "_holdings", "_payload_length", "_holders")

    def __init__(
        self,
        num_segments: int,
        holdings: Mapping[int, Iterable[int]],
        payload_length: int | None = None,
    ):
        if not isinstance(num_segments, int) or num_segments < 0:
            raise ValueError(f"num_segments must be a non-negative integer, got {num_segments!r}")
        users = sorted(holdings)
        if not users:
            raise ValueError("topology needs at least one user")
        if users != list(range(1, len(users) + 1)):
            raise ValueError(f"user ids must be exactly 1..{len(users)}, got {users}")
        held = []
        for v in users:
            segs = frozenset(int(w) for w in holdings[v])
            if any(w < 1 or w > num_segments for w in segs):
                bad = sorted(w for w in segs if w < 1 or w > num_segments)
                raise ValueError(f"user {v} stores segments outside 1..{num_segments}: {bad}")
            held.append(segs)
        if payload_length is not None:
            if not isinstance(payload_length, int) or payload_length <= num_segments:
                raise ValueError(
                    f"payload_length must exceed num_segments={num_segments}, got {payload_length!r}"
                )
        self._num_segments = num_segments
        self._holdings = tuple(held)
        self._payload_length = payload_length
        holders: dict[int, set[int]] = {w: set() for w in range(1, num_segments + 1)}
        for v, segs in enumerate(held, start=1):
            for w in segs:
                holders[w].add(v)
        self._holders = {w: frozenset(vs) for w, vs in holders.items()}

    @property
    def num_users(self) -> int:
        return len(self._holdings)

    @property
    def num_segments(self) -> int:
        return self._num_segments

    @property
    def payload_length(self) -> int | None:
        return self._payload_length

    @property
    def users(self) -> range:
        return range(1, self.num_users + 1)

    def holding(self, v: int) -> frozenset[int]:
        self._check_user(v)
        return self._holdings[v - 1]

    def holders_of(self, w: int) -> frozenset[int]:
        """Users that store segment w."""
        if w not in self._holders:
            raise ValueError(f"segment {w} outside 1..{self._num_segments}")
        return self._holders[w]

    def _check_user(self, v):
        if not isinstance(v, int) or not 1 <= v <= self.num_users:
            raise ValueError(f"user {v!r} outside 1..{self.num_users}")

    # -- set algebra over user groups -----------------------------------

    def segments_for(self, group: Iterable[int]) -> frozenset[int]:
        """Segments held by every user in the group and nobody outside it."""
        g = self._check_group(group)
        out = set.intersection(*(set(self._holdings[v - 1]) for v in g))
        for v in self.users:
            if v not in g:
                out -= self._holdings[v - 1]
        return frozenset(out)

    def union_storage(self, group: Iterable[int]) -> frozenset[int]:
        """Segments held by at least one user in the group."""
        g = self._check_group(group)
        return frozenset().union(*(self._holdings[v - 1] for v in g))

    def _check_group(self, group) -> frozenset[int]:
        g = frozenset(group)
        if not g:
            raise ValueError("user group must be nonempty")
        for v in g:
            self._check_user(v)
        return g

    # -- hypergraph model -----------------------------------------------

    def to_hypergraph(self):
        """(model hypergraph, placement, leftovers).

        placement maps each edge's vertex set to its sorted segment ids;
        leftovers maps segments with holder count 1 or V (unmodelable)
        to their holder sets.  Raises if some segment is stored nowhere.
        """
        V = self.num_users
        groups: dict[frozenset[int], list[int]] = {}
        leftovers: dict[int, frozenset[int]] = {}
        for w in range(1, self._num_segments + 1):
            hs = self._holders[w]
            if not hs:
                raise ValueError(f"segment {w} is stored nowhere")
            if len(hs) == 1 or len(hs) == V:
                leftovers[w] = hs
            else:
                groups.setdefault(hs, []).append(w)
        placement: PlacementMap = {
            hs: tuple(sorted(ws)) for hs, ws in groups.items()
        }
        h = Hypergraph(self.users, [(hs, len(ws)) for hs, ws in placement.items()])
        return h, placement, leftovers

    def validate(self) -> ValidationReport:
        """Coverage and structure report; never raises on bad coverage."""
        V = self.num_users
        missing = tuple(w for w in range(1, self._num_segments + 1) if not self._holders[w])
        hist = Counter(len(self._holders[w]) for w in range(1, self._num_segments + 1))
        singles = tuple(w for w in self._holders if len(self._holders[w]) == 1)
        universal = tuple(w for w in self._holders if self._holders[w] and len(self._holders[w]) == V)
        groups: dict[frozenset[int], int] = {}
        for w, hs in self._holders.items():
            if 2 <= len(hs) <= V - 1:
                groups[hs] = groups.get(hs, 0) + 1
        h = Hypergraph(self.users, list(groups.items()))
        return ValidationReport(
            coverage_ok=not missing,
            missing_segments=missing,
            holder_histogram=dict(sorted(hist.items())),
            singleton_segments=singles,
            universal_segments=universal,
            connected=h.is_connected(),
            quasi_tree=h.is_quasi_tree(),
        )

    # -- misc ------------------------------------------------------------

    def as_mapping(self) -> dict[int, tuple[int, ...]]:
        return {v: tuple(sorted(self._holdings[v - 1])) for v in self.users}

    def __eq__(self, other) -> bool:
        if not isinstance(other, StorageTopology):
            return NotImplemented
        return (
            self._num_segments == other._num_segments
            and self._holdings == other._holdings
            and self._payload_length == other._payload_length
        )

    def __hash__(self) -> int:
        return hash((self._num_segments, self._holdings, self._payload_length))

    def __repr__(self) -> str:
        return (
            f"StorageTopology(users={self.num_users}, segments={self._num_segments})"
        )


def from_hypergraph(h: Hypergraph, placement: PlacementMap | None = None) -> StorageTopology:
    """Topology realizing a hypergraph by materializing its segments.

    Without a placement, segment ids 1..W are assigned in sorted edge
    order, each edge receiving weight-many consecutive ids.  A supplied
    placement must give each edge exactly weight-many ids and use ids
    1..W exactly once overall.
    """
    vs = sorted(h.vertices)
    V = len(vs)
    if vs != list(range(1, V + 1)):
        raise ValueError(f"vertices must be exactly 1..{V} to form a topology, got {vs}")
    for e in h.edges:
        if len(e.vertices) >= V:
            raise ValueError(
                f"edge {sorted(e.vertices)} spans all {V} users; topologies need "
                "every edge to exclude at least one user"
            )
    if placement is None:
        placement = {}
        nxt = 1
        for e in h.edges:
            placement[e.vertices] = tuple(range(nxt, nxt + e.weight))
            nxt += e.weight
    else:
        if set(placement) != set(h.edge_sets):
            raise ValueError("placement keys must be exactly the edge vertex sets")
        for e in h.edges:
            if len(placement[e.vertices]) != e.weight:
                raise ValueError(
                    f"edge {sorted(e.vertices)} has weight {e.weight} but "
                    f"{len(placement[e.vertices])} placed segments"
                )
    all_ids = sorted(w for ids in placement.values() for w in ids)
    W = h.total_weight
    if all_ids != list(range(1, W + 1)):
        raise ValueError(f"placement must use segment ids 1..{W} exactly once")
    holdings: dict[int, set[int]] = {v: set() for v in vs}
    for eset, ids in placement.items():
        for v in eset:
            holdings[v].update(ids)
    return StorageTopology(W, holdings)
