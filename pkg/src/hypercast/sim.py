"""Collision-channel broadcast simulation at the coefficient level.

Each user tracks the coefficient vectors (columns over GF(P), one row
per segment) of everything it knows: one-hot columns for stored
segments, then one appended column per broadcast slot.  A segment is
decoded once its unit vector lies in the user's column span; the run is
complete when every user reaches full rank.  An optional payload mode
carries actual length-L codewords next to the coefficients and checks
that the two levels agree bit for bit.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .field import P, ColumnBasis, combine_columns, combine_sparse, rank_mod, unit_vector
from .topology import StorageTopology

MAX_SIM_SEGMENTS = 10_000

__all__ = [
    "MAX_SIM_SEGMENTS",
    "UserState",
    "Broadcast",
    "SlotRecord",
    "Transcript",
    "SegmentStore",
    "init_states",
    "apply_broadcast",
    "decoded_set",
    "remaining_edges",
    "is_complete",
    "run_schedule",
    "naive_schedule",
    "materialize_payloads",
    "verify_payload_run",
]


class UserState:
    """One user's accumulated coefficient columns and reduced basis."""

    __slots__ = ("user", "num_segments", "columns", "basis")

    def __init__(self, user: int, num_segments: int, stored: Iterable[int]):
        self.user = user
        self.num_segments = num_segments
        self.columns: list[np.ndarray] = []
        self.basis = ColumnBasis(num_segments)
        for w in sorted(stored):
            self._append(unit_vector(num_segments, w - 1))

    def _append(self, column: np.ndarray):
        tag = len(self.columns)
        self.columns.append(column)
        self.basis.insert(column, tag)

    @property
    def rank(self) -> int:
        return self.basis.rank

    @property
    def decoded(self) -> frozenset[int]:
        return frozenset(r + 1 for r in self.basis.unit_rows())


@dataclass(frozen=True)
class Broadcast:
    """One slot: sender mixes its current columns with combination `combo`."""

    slot: int
    sender: int
    combo: tuple[int, ...]
    resolved: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SlotRecord:
    slot: int
    sender: int
    coefficients: tuple[int, ...]
    ranks: tuple[int, ...]
    remaining_edges: int | None = None


@dataclass(eq=False)
class Transcript:
    num_users: int
    num_segments: int
    initial_ranks: tuple[int, ...]
    slots: list[SlotRecord]
    complete: bool
    final_states: list[UserState] = dc_field(repr=False, default_factory=list)

    @property
    def num_broadcasts(self) -> int:
        return len(self.slots)


def init_states(topology: StorageTopology) -> list[UserState]:
    W = topology.num_segments
    if W > MAX_SIM_SEGMENTS:
        raise ValueError(f"simulator supports at most {MAX_SIM_SEGMENTS} segments, got {W}")
    return [UserState(v, W, topology.holding(v)) for v in topology.users]


def _resolve(states: Sequence[UserState], b: Broadcast) -> np.ndarray:
    if not 1 <= b.sender <= len(states):
        raise ValueError(f"sender {b.sender} outside 1..{len(states)}")
    sender = states[b.sender - 1]
    if len(b.combo) != len(sender.columns):
        raise ValueError(
            f"slot {b.slot}: combination length {len(b.combo)} != sender's "
            f"{len(sender.columns)} columns"
        )
    resolved = combine_columns(sender.columns, b.combo, sender.num_segments)
    if b.resolved is not None and not np.array_equal(
        resolved, np.asarray(b.resolved, dtype=np.int64) % P
    ):
        raise ValueError(f"slot {b.slot}: declared coefficients disagree with the combination")
    return resolved


def apply_broadcast(states: list[UserState], b: Broadcast) -> list[UserState]:
    """Deliver one broadcast to every user (the sender included)."""
    resolved = _resolve(states, b)
    for s in states:
        s._append(resolved.copy())
    return states


def decoded_set(state: UserState) -> frozenset[int]:
    """Segments whose unit vectors lie in the user's column span."""
    return state.decoded


def is_complete(states: Sequence[UserState]) -> bool:
    return all(s.rank == s.num_segments for s in states)


def remaining_edges(states: Sequence[UserState], h, placement):
    """Edges still carrying a segment some user has not decoded."""
    known_by_all = frozenset.intersection(*(s.decoded for s in states))
    out = []
    for e in h.edges:
        if e.vertices not in placement:
            raise ValueError(f"placement missing edge {sorted(e.vertices)}")
        if any(w not in known_by_all for w in placement[e.vertices]):
            out.append(e)
    return tuple(out)


def run_schedule(
    topology: StorageTopology,
    schedule: Sequence[Broadcast],
    track_edges: bool = False,
) -> Transcript:
    """Apply a schedule slot by slot and record ranks (and, optionally,
    how many model edges remain undelivered after each slot)."""
    states = init_states(topology)
    initial_ranks = tuple(s.rank for s in states)
    h = placement = None
    if track_edges:
        h, placement, _ = topology.to_hypergraph()
    records: list[SlotRecord] = []
    for i, b in enumerate(schedule):
        if b.slot != i:
            raise ValueError(f"schedule slots must run 0..T-1 consecutively; saw {b.slot} at {i}")
        resolved = _resolve(states, b)
        for s in states:
            s._append(resolved.copy())
        records.append(
            SlotRecord(
                slot=i,
                sender=b.sender,
                coefficients=tuple(int(x) for x in resolved),
                ranks=tuple(s.rank for s in states),
                remaining_edges=len(remaining_edges(states, h, placement)) if track_edges else None,
            )
        )
    return Transcript(
        num_users=topology.num_users,
        num_segments=topology.num_segments,
        initial_ranks=initial_ranks,
        slots=records,
        complete=is_complete(states),
        final_states=states,
    )


def uncoded_broadcast(topology: StorageTopology, states: Sequence[UserState], slot: int, w: int) -> Broadcast:
    """Broadcast of the plain segment w by its lowest-id holder."""
    holders = topology.holders_of(w)
    if not holders:
        raise ValueError(f"segment {w} is stored nowhere")
    sender = min(holders)
    stored = sorted(topology.holding(sender))
    combo = [0] * len(states[sender - 1].columns)
    combo[stored.index(w)] = 1
    resolved = [0] * topology.num_segments
    resolved[w - 1] = 1
    return Broadcast(slot, sender, tuple(combo), tuple(resolved))


def naive_schedule(topology: StorageTopology) -> list[Broadcast]:
    """One uncoded broadcast per segment, in ascending segment order."""
    states = init_states(topology)
    out: list[Broadcast] = []
    for slot, w in enumerate(range(1, topology.num_segments + 1)):
        b = uncoded_broadcast(topology, states, slot, w)
        apply_broadcast(states, b)
        out.append(b)
    return out


class SegmentStore:
    """Ground-truth payloads: one length-L column per segment, with the
    columns linearly independent over GF(P)."""

    __slots__ = ("topology", "length", "matrix")

    def __init__(self, topology: StorageTopology, matrix: np.ndarray):
        W = topology.num_segments
        if matrix.ndim != 2 or matrix.shape[1] != W:
            raise ValueError("matrix must have one column per segment")
        if matrix.shape[0] <= W:
            raise ValueError(f"payload length {matrix.shape[0]} must exceed {W}")
        if rank_mod(matrix) != W:
            raise ValueError("payload columns must be linearly independent")
        self.topology = topology
        self.length = matrix.shape[0]
        self.matrix = matrix % P

    def column(self, w: int) -> np.ndarray:
        if not 1 <= w <= self.topology.num_segments:
            raise ValueError(f"segment {w} outside range")
        return self.matrix[:, w - 1]


def materialize_payloads(topology: StorageTopology, seed: int) -> SegmentStore:
    """Draw random payload columns, re-sampling until independent."""
    W = topology.num_segments
    L = topology.payload_length if topology.payload_length is not None else W + 1
    if L <= W:
        raise ValueError(f"payload length {L} must exceed num_segments {W}")
    rng = random.Random(seed)
    for _ in range(16):
        matrix = np.array(
            [[rng.randrange(P) for _ in range(W)] for _ in range(L)], dtype=np.int64
        )
        if rank_mod(matrix) == W:
            return SegmentStore(topology, matrix)
    raise RuntimeError("failed to draw independent payload columns")


def verify_payload_run(store: SegmentStore, schedule: Sequence[Broadcast]) -> bool:
    """Re-run a schedule on real payload vectors.

    True iff, at the start and after every slot, each user's
    coefficient-level decoded segments are exactly reconstructible from
    its payload columns (bit-exact against the store), and the schedule
    leaves every user complete.
    """
    topology = store.topology
    W = topology.num_segments
    L = store.length
    states = init_states(topology)
    payload_cols: list[list[np.ndarray]] = [
        [store.column(w) for w in sorted(topology.holding(v))] for v in topology.users
    ]

    def check_all() -> bool:
        for s in states:
            cols = payload_cols[s.user - 1]
            for w in sorted(s.decoded):
                expr = s.basis.solve(unit_vector(W, w - 1))
                if expr is None:
                    return False
                recon = combine_sparse(cols, expr, L)
                if not np.array_equal(recon, store.column(w)):
                    return False
        return True

    if not check_all():
        return False
    for i, b in enumerate(schedule):
        if b.slot != i:
            raise ValueError(f"schedule slots must run 0..T-1 consecutively; saw {b.slot} at {i}")
        z = combine_columns(payload_cols[b.sender - 1], b.combo, L)
        resolved = _resolve(states, b)
        for s in states:
            s._append(resolved.copy())
            payload_cols[s.user - 1].append(z.copy())
        if not check_all():
            return False
    return is_complete(states)
