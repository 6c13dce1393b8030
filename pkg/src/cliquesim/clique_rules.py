"""Per-clique decision rules.

Each rule looks at one clique in isolation: the center ancilla bit, the
bits of its diagonal same-type neighbors, and the boundary slots (support
qubits shared with no same-type neighbor).  A rule either names data
qubits to flip or does nothing; classification is not a rule concern.

The activation conditions are pairwise exclusive, so for any view at
most one rule produces a nonempty action:

* length-1: center set, odd number of set neighbors
* length-2: center unset, even number >= 2 of set neighbors
* edge/corner: center set, zero set neighbors, and the clique owns
  at least one boundary slot
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CliqueView:
    """One clique's local inputs for a single evaluation.

    neighbor_bits holds (set, shared_data) per real neighbor; together
    with boundary_slots it covers the support exactly.
    """

    center_set: bool
    neighbor_bits: tuple[tuple[bool, int], ...]
    boundary_slots: tuple[int, ...]


@dataclass(frozen=True)
class CliqueAction:
    flips: frozenset[int]


_NO_ACTION = CliqueAction(frozenset())


def l1_interior(view: CliqueView) -> CliqueAction:
    """Length-1 rule: set center with odd set-neighbor count.

    Flips the data qubit shared with every set neighbor.  An active
    center with even parity produces no action here; it is left for the
    later stages or for offload.
    """
    if not view.center_set:
        return _NO_ACTION
    hot = [q for is_set, q in view.neighbor_bits if is_set]
    if len(hot) % 2 == 1:
        return CliqueAction(frozenset(hot))
    return _NO_ACTION


def l2_rule(view: CliqueView) -> CliqueAction:
    """Length-2 rule: unset center with an even set-neighbor count >= 2.

    The set neighbors witness error chains of length 2 passing the
    center; flipping each shared qubit clears them without toggling the
    center (each pair of flips cancels on the center's parity).
    """
    if view.center_set:
        return _NO_ACTION
    hot = [q for is_set, q in view.neighbor_bits if is_set]
    if len(hot) >= 2 and len(hot) % 2 == 0:
        return CliqueAction(frozenset(hot))
    return _NO_ACTION


def edge_corner_rule(view: CliqueView) -> CliqueAction:
    """Edge/corner rule: lone set center on a clique with boundary slots.

    Any one boundary slot explains the syndrome up to a stabilizer; the
    smallest data index is chosen for determinism.  With two or more set
    neighbors the minimal explanation is longer than the local rules
    cover, so nothing fires and the frame is left for offload.
    """
    if not view.boundary_slots or not view.center_set:
        return _NO_ACTION
    if any(is_set for is_set, _ in view.neighbor_bits):
        return _NO_ACTION
    return CliqueAction(frozenset({min(view.boundary_slots)}))
