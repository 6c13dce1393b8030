from itertools import combinations, product

import numpy as np
import pytest

from cliquesim.clique_rules import CliqueAction, CliqueView, edge_corner_rule, l1_interior, l2_rule
from cliquesim.lattice import Boundary, build
from cliquesim.syndrome import data_syndrome

RULES = (l1_interior, l2_rule, edge_corner_rule)


def all_views():
    for n_nbr in range(5):
        shared = tuple(10 + k for k in range(n_nbr))
        for bits in product((False, True), repeat=n_nbr):
            nbr = tuple(zip(bits, shared))
            for center in (False, True):
                for slots in ((), (7,), (7, 3)):
                    yield CliqueView(center, nbr, slots)


def test_rule_conditions_exhaustively():
    for view in all_views():
        hot = {q for s, q in view.neighbor_bits if s}
        a1, a2, a3 = l1_interior(view), l2_rule(view), edge_corner_rule(view)
        if view.center_set and len(hot) % 2 == 1:
            assert a1.flips == frozenset(hot)
        else:
            assert a1.flips == frozenset()
        if not view.center_set and len(hot) >= 2 and len(hot) % 2 == 0:
            assert a2.flips == frozenset(hot)
        else:
            assert a2.flips == frozenset()
        if view.boundary_slots and view.center_set and not hot:
            assert a3.flips == frozenset({min(view.boundary_slots)})
        else:
            assert a3.flips == frozenset()


def test_at_most_one_rule_fires():
    for view in all_views():
        active = [r for r in RULES if r(view).flips]
        assert len(active) <= 1


def test_flips_stay_inside_support():
    for view in all_views():
        support = {q for _, q in view.neighbor_bits} | set(view.boundary_slots)
        for rule in RULES:
            assert rule(view).flips <= support


def test_single_set_neighbor_flips_shared_qubit():
    view = CliqueView(True, ((False, 3), (True, 8), (False, 11)), ())
    assert l1_interior(view) == CliqueAction(frozenset({8}))


def test_three_set_neighbors_is_minimal_up_to_stabilizers():
    # center (2, 2) at d=5 has four real neighbors; set three of them.
    # The syndrome admits several weight-3 explanations (degenerate up
    # to stabilizers); the rule's choice must be one of them, and every
    # other minimal solution must differ from it by a stabilizer.
    lat = build(5)
    center = lat.ancillas.index((2, 2))
    entries = lat.clique_map[center]
    assert all(nb is not Boundary for nb, _ in entries)
    hot_entries = entries[:3]
    target = np.zeros(lat.n_ancillas, dtype=np.uint8)
    target[center] = 1
    for nb, _ in hot_entries:
        target[nb] = 1
    solutions = []
    for w in range(4):
        for qs in combinations(range(lat.n_data), w):
            flips = np.zeros(lat.n_data, dtype=np.uint8)
            flips[list(qs)] = 1
            if np.array_equal(data_syndrome(lat, flips), target):
                solutions.append(frozenset(qs))
    canonical = frozenset(q for _, q in hot_entries)
    assert canonical in solutions
    assert all(len(s) == 3 for s in solutions)
    assert len(solutions) == 6
    dual_line = {q for q, (i, j) in enumerate(lat.data_qubits) if j == 0}
    for s in solutions:
        diff = s ^ canonical
        flips = np.zeros(lat.n_data, dtype=np.uint8)
        flips[list(diff)] = 1
        # same syndrome and even crossing of the dual boundary line:
        # the difference is a stabilizer, not a logical operator
        assert not data_syndrome(lat, flips).any()
        assert len(diff & dual_line) % 2 == 0
    view = CliqueView(True, tuple((True, q) for _, q in hot_entries) + ((False, entries[3][1]),), ())
    assert l1_interior(view).flips == canonical


def test_center_unset_never_fires_l1():
    view = CliqueView(False, ((True, 1), (True, 2), (True, 3)), (0,))
    assert l1_interior(view).flips == frozenset()


def test_l2_horizontal_pair_and_full_house():
    pair = CliqueView(False, ((True, 4), (True, 6), (False, 9), (False, 12)), ())
    assert l2_rule(pair).flips == frozenset({4, 6})
    full = CliqueView(False, ((True, 4), (True, 6), (True, 9), (True, 12)), ())
    assert l2_rule(full).flips == frozenset({4, 6, 9, 12})
    lone = CliqueView(False, ((True, 4), (False, 6), (False, 9), (False, 12)), ())
    assert l2_rule(lone).flips == frozenset()


def test_edge_corner_picks_smallest_slot():
    corner = CliqueView(True, ((False, 5),), (9,))
    assert edge_corner_rule(corner).flips == frozenset({9})
    edge = CliqueView(True, ((False, 5), (False, 6)), (14, 2))
    assert edge_corner_rule(edge).flips == frozenset({2})
    with_hot = CliqueView(True, ((True, 5),), (9,))
    assert edge_corner_rule(with_hot).flips == frozenset()


@pytest.mark.parametrize("d", (3, 5, 7))
def test_l1_soundness_on_lattice(d):
    # flipping the shared qubits of an odd set-neighbor subset toggles
    # exactly the center and those neighbors
    lat = build(d)
    for a in range(lat.n_ancillas):
        real = [(nb, q) for nb, q in lat.clique_map[a] if nb is not Boundary]
        for k in range(1, len(real) + 1, 2):
            for subset in combinations(real, k):
                flips = np.zeros(lat.n_data, dtype=np.uint8)
                for _, q in subset:
                    flips[q] ^= 1
                expected = np.zeros(lat.n_ancillas, dtype=np.uint8)
                expected[a] = 1
                for nb, _ in subset:
                    expected[nb] = 1
                assert np.array_equal(data_syndrome(lat, flips), expected)


@pytest.mark.parametrize("d", (3, 5, 7))
def test_l2_flips_leave_center_clear(d):
    lat = build(d)
    for a in range(lat.n_ancillas):
        real = [(nb, q) for nb, q in lat.clique_map[a] if nb is not Boundary]
        for k in range(2, len(real) + 1, 2):
            for subset in combinations(real, k):
                flips = np.zeros(lat.n_data, dtype=np.uint8)
                for _, q in subset:
                    flips[q] ^= 1
                syn = data_syndrome(lat, flips)
                assert syn[a] == 0
                for nb, _ in subset:
                    assert syn[nb] == 1


@pytest.mark.parametrize("d", (3, 5, 7))
def test_boundary_slot_flip_toggles_center_only(d):
    lat = build(d)
    for a in range(lat.n_ancillas):
        for q in lat.boundary_slots[a]:
            flips = np.zeros(lat.n_data, dtype=np.uint8)
            flips[q] = 1
            expected = np.zeros(lat.n_ancillas, dtype=np.uint8)
            expected[a] = 1
            assert np.array_equal(data_syndrome(lat, flips), expected)
