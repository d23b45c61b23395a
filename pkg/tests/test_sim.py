"""Coefficient-level simulator tests.

Decoded sets are cross-checked against a rank-comparison oracle built
from rank_mod on the raw column stacks, independent of the incremental
basis bookkeeping.
"""
from __future__ import annotations

import random

import numpy as np
import pytest

from hypercast import StorageTopology
from hypercast.field import rank_mod, unit_vector
from hypercast.sim import (
    MAX_SIM_SEGMENTS,
    Broadcast,
    apply_broadcast,
    decoded_set,
    init_states,
    is_complete,
    materialize_payloads,
    naive_schedule,
    remaining_edges,
    run_schedule,
    uncoded_broadcast,
    verify_payload_run,
)

TRIANGLE = {1: {1, 2}, 2: {2, 3}, 3: {1, 3}}


def oracle_decoded(state) -> frozenset[int]:
    if not state.columns:
        return frozenset()
    stack = np.stack(state.columns, axis=1)
    base = rank_mod(stack)
    out = set()
    for w in range(1, state.num_segments + 1):
        aug = np.concatenate([stack, unit_vector(state.num_segments, w - 1)[:, None]], axis=1)
        if rank_mod(aug) == base:
            out.add(w)
    return frozenset(out)


def test_init_states_ranks_and_decoded(tree_topology):
    states = init_states(tree_topology)
    assert [s.rank for s in states] == [1, 1, 2, 2, 2, 1]
    assert states[2].decoded == frozenset({2, 3})
    assert states[0].decoded == frozenset({1})
    assert not is_complete(states)
    for s in states:
        assert decoded_set(s) == oracle_decoded(s)


def test_init_states_segment_limit():
    topo = StorageTopology(MAX_SIM_SEGMENTS + 1, {1: {1}, 2: {2}})
    with pytest.raises(ValueError):
        init_states(topo)


def test_apply_broadcast_two_users():
    topo = StorageTopology(2, {1: {1}, 2: {2}})
    states = init_states(topo)
    apply_broadcast(states, Broadcast(0, 1, (1,)))
    assert states[1].rank == 2
    assert states[1].decoded == frozenset({1, 2})
    # sender's own broadcast adds nothing
    assert states[0].rank == 1


def test_triangle_hand_worked_run():
    topo = StorageTopology(3, TRIANGLE)
    states = init_states(topo)
    # user 3 mixes its two stored segments 1 and 3
    apply_broadcast(states, Broadcast(0, 3, (1, 1)))
    assert states[0].rank == 3 and states[0].decoded == frozenset({1, 2, 3})
    assert states[1].rank == 3
    assert states[2].rank == 2 and states[2].decoded == frozenset({1, 3})
    # plain segment 2 finishes user 3; its lowest holder is user 1
    b = uncoded_broadcast(topo, states, 1, 2)
    assert b.sender == 1 and b.resolved == (0, 1, 0)
    apply_broadcast(states, b)
    assert is_complete(states)
    for s in states:
        assert s.decoded == oracle_decoded(s)


def test_resolve_validates_combo_and_declaration(tree_topology):
    states = init_states(tree_topology)
    with pytest.raises(ValueError):
        apply_broadcast(states, Broadcast(0, 9, (1,)))
    with pytest.raises(ValueError):
        apply_broadcast(states, Broadcast(0, 3, (1,)))  # user 3 has 2 columns
    with pytest.raises(ValueError):
        apply_broadcast(states, Broadcast(0, 1, (1,), resolved=(0, 1, 0, 0)))
    # correct declaration passes
    apply_broadcast(states, Broadcast(0, 1, (1,), resolved=(1, 0, 0, 0)))


def test_uncoded_broadcast_positions(tree_topology):
    states = init_states(tree_topology)
    b = uncoded_broadcast(tree_topology, states, 0, 4)
    # holders of 4 are {4, 5}; user 4 stores {1, 4} so position 1
    assert b.sender == 4
    assert b.combo == (0, 1)
    assert b.resolved == (0, 0, 0, 1)
    topo = StorageTopology(2, {1: {1}, 2: ()})
    with pytest.raises(ValueError):
        uncoded_broadcast(topo, init_states(topo), 0, 2)


def test_naive_schedule_completes_everything(tree_topology, cyclic_topology, triangle_topology):
    for topo in (tree_topology, cyclic_topology, triangle_topology):
        schedule = naive_schedule(topo)
        assert len(schedule) == topo.num_segments
        t = run_schedule(topo, schedule)
        assert t.complete
        assert t.num_broadcasts == topo.num_segments
        # ranks never decrease along the transcript
        prev = t.initial_ranks
        for rec in t.slots:
            assert all(a <= b for a, b in zip(prev, rec.ranks))
            prev = rec.ranks
        assert prev == tuple([topo.num_segments] * topo.num_users)


def test_run_schedule_slot_numbering(tree_topology):
    schedule = naive_schedule(tree_topology)
    bad = [Broadcast(1, schedule[0].sender, schedule[0].combo)]
    with pytest.raises(ValueError):
        run_schedule(tree_topology, bad)


def test_run_schedule_tracks_remaining_edges(tree_topology):
    t = run_schedule(tree_topology, naive_schedule(tree_topology), track_edges=True)
    counts = [rec.remaining_edges for rec in t.slots]
    assert counts[-1] == 0
    assert all(a >= b for a, b in zip(counts, counts[1:]))
    plain = run_schedule(tree_topology, naive_schedule(tree_topology))
    assert all(rec.remaining_edges is None for rec in plain.slots)


def test_remaining_edges_start_and_end(tree_topology):
    h, placement, _ = tree_topology.to_hypergraph()
    states = init_states(tree_topology)
    assert len(remaining_edges(states, h, placement)) == len(h.edges)
    for b in naive_schedule(tree_topology):
        apply_broadcast(states, b)
    assert remaining_edges(states, h, placement) == ()


def test_random_mixes_respect_rank_laws(tree_topology):
    rng = random.Random(13)
    for _ in range(20):
        states = init_states(tree_topology)
        for slot in range(6):
            sender = rng.randint(1, 6)
            combo = tuple(
                rng.randrange(3) for _ in states[sender - 1].columns
            )
            before = [s.rank for s in states]
            apply_broadcast(states, Broadcast(slot, sender, combo))
            after = [s.rank for s in states]
            assert all(a <= b <= a + 1 for a, b in zip(before, after))
            # the sender never learns from its own transmission
            assert after[sender - 1] == before[sender - 1]
            for s in states:
                assert s.decoded == oracle_decoded(s)


def test_materialize_payloads_deterministic(tree_topology):
    a = materialize_payloads(tree_topology, seed=5)
    b = materialize_payloads(tree_topology, seed=5)
    c = materialize_payloads(tree_topology, seed=6)
    assert np.array_equal(a.matrix, b.matrix)
    assert not np.array_equal(a.matrix, c.matrix)
    assert a.length == tree_topology.num_segments + 1
    assert rank_mod(a.matrix) == tree_topology.num_segments


def test_materialize_payloads_honors_declared_length():
    topo = StorageTopology(2, {1: {1}, 2: {2}}, payload_length=9)
    store = materialize_payloads(topo, seed=1)
    assert store.length == 9
    assert store.column(1).shape == (9,)
    with pytest.raises(ValueError):
        store.column(3)


def test_verify_payload_run_accepts_honest_schedules(tree_topology, triangle_topology):
    for topo in (tree_topology, triangle_topology):
        store = materialize_payloads(topo, seed=2)
        assert verify_payload_run(store, naive_schedule(topo))


def test_verify_payload_run_rejects_incomplete(tree_topology):
    store = materialize_payloads(tree_topology, seed=3)
    assert not verify_payload_run(store, [])
    assert not verify_payload_run(store, naive_schedule(tree_topology)[:2])
