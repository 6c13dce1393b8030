"""Full-lattice decoding pipelines built from per-clique rules.

The two decoders differ in evaluation discipline, not just rule set.

The baseline decoder models a single combinational pass: every clique
evaluates the captured frame simultaneously, exactly once.  Any active
clique that no local rule applies to (even set-neighbor count without
the boundary escape) raises the complex flag, and the whole cycle is
offloaded uncorrected.  When no clique raises the flag, the union of
all proposed flips provably clears the frame: each set ancilla is
toggled once per set neighbor (an odd count) or once by its slot flip,
and unset ancillas are never touched.

The enhanced decoder is a three-sweep sequential pipeline.  Each rule
runs as one sweep over the four color groups in the fixed order A, B,
C, D.  Within a color step every clique of that color evaluates its
rule against a snapshot of the frame taken at the start of the step;
the resulting flips are XOR-accumulated and the frame is updated once
per step.  Same-color cliques have disjoint supports, so evaluation
order inside a step cannot matter.  The length-2 sweep must run before
the edge sweep: an edge correction can consume a bit that a length-2
pair explanation needs.

Whatever syndrome remains after decoding is the offload payload for a
global decoder; a cycle is classified Local exactly when nothing
remains.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from cliquesim.clique_rules import CliqueView, edge_corner_rule, l1_interior, l2_rule
from cliquesim.lattice import Boundary, Lattice, color_groups
from cliquesim.syndrome import SyndromeFrame, data_syndrome

LOCAL = "local"
OFFLOAD = "offload"

Rule = Callable[[CliqueView], object]

# (stage name, rule) in execution order for the enhanced decoder
L2_STAGES = (("length1", l1_interior), ("length2", l2_rule), ("edge", edge_corner_rule))


@dataclass(eq=False)
class DecodeOutcome:
    corrections: np.ndarray  # uint8 over data qubits, XOR of all flips
    residual_syndrome: SyndromeFrame
    classification: str  # LOCAL or OFFLOAD
    stage_trace: tuple[tuple[str, tuple[tuple[int, tuple[int, ...]], ...]], ...]

    @property
    def is_local(self) -> bool:
        return self.classification == LOCAL


def _view(lattice: Lattice, bits: np.ndarray, ancilla: int) -> CliqueView:
    nbr = tuple(
        (bool(bits[nb]), q)
        for nb, q in lattice.clique_map[ancilla]
        if nb is not Boundary
    )
    return CliqueView(bool(bits[ancilla]), nbr, lattice.boundary_slots[ancilla])


def color_sweep(
    lattice: Lattice, frame: SyndromeFrame, rule: Rule
) -> tuple[SyndromeFrame, tuple[tuple[int, tuple[int, ...]], ...]]:
    """Run one rule over all cliques, one color group at a time.

    Returns the updated frame and the (ancilla, flips) actions in
    evaluation order.  The input frame is not modified.
    """
    bits = frame.bits.copy()
    actions: list[tuple[int, tuple[int, ...]]] = []
    for group in color_groups(lattice):
        snapshot = bits
        step_flips = np.zeros(lattice.n_data, dtype=np.uint8)
        fired = False
        for a in group:
            act = rule(_view(lattice, snapshot, a))
            if act.flips:
                flips = tuple(sorted(act.flips))
                actions.append((a, flips))
                for q in flips:
                    step_flips[q] ^= 1
                fired = True
        if fired:
            bits = bits ^ data_syndrome(lattice, step_flips)
    return SyndromeFrame(bits), tuple(actions)


def decode_l1(lattice: Lattice, frame: SyndromeFrame) -> DecodeOutcome:
    """Baseline decoder: one simultaneous evaluation of every clique.

    Offloads as soon as any active clique matches no local rule.  A
    shared qubit is proposed by the cliques at both of its ends; it is
    recorded under the lowest-index proposer so the trace flips XOR to
    the applied corrections.
    """
    bits = frame.bits
    length1_actions: list[tuple[int, tuple[int, ...]]] = []
    edge_actions: list[tuple[int, tuple[int, ...]]] = []
    corrections = np.zeros(lattice.n_data, dtype=np.uint8)
    for a in range(lattice.n_ancillas):
        if not bits[a]:
            continue
        view = _view(lattice, bits, a)
        act = l1_interior(view)
        if act.flips:
            fresh = tuple(sorted(q for q in act.flips if not corrections[q]))
            if fresh:
                length1_actions.append((a, fresh))
                for q in fresh:
                    corrections[q] = 1
            continue
        act = edge_corner_rule(view)
        if act.flips:
            flips = tuple(sorted(act.flips))
            edge_actions.append((a, flips))
            for q in flips:
                corrections[q] = 1
            continue
        # active clique, no applicable rule: complex, forward untouched
        return DecodeOutcome(
            np.zeros(lattice.n_data, dtype=np.uint8),
            SyndromeFrame(bits.copy()),
            OFFLOAD,
            (),
        )
    residual = bits ^ data_syndrome(lattice, corrections)
    classification = LOCAL if not residual.any() else OFFLOAD
    trace = (("length1", tuple(length1_actions)), ("edge", tuple(edge_actions)))
    return DecodeOutcome(corrections, SyndromeFrame(residual), classification, trace)


def decode_l2(lattice: Lattice, frame: SyndromeFrame) -> DecodeOutcome:
    """Enhanced decoder: length-1, length-2, then edge/corner sweeps."""
    corrections = np.zeros(lattice.n_data, dtype=np.uint8)
    trace = []
    cur = frame
    for name, rule in L2_STAGES:
        cur, actions = color_sweep(lattice, cur, rule)
        trace.append((name, actions))
        for _, flips in actions:
            for q in flips:
                corrections[q] ^= 1
    classification = LOCAL if cur.is_zero() else OFFLOAD
    return DecodeOutcome(corrections, cur, classification, tuple(trace))
