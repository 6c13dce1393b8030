"""Rotated surface code geometry for one Pauli sector.

Data qubits sit on an integer grid (i, j) with 0 <= i, j < d and are
indexed row-major (index = i*d + j).  Parity checks sit on plaquette
corners (r, c) with 0 <= r, c <= d; the support of a plaquette is the
up-to-four data qubits on its corners.  Plaquettes with (r + c) even
are the simulated check type: all interior (weight-4) ones plus the
weight-2 ones on the top and bottom rows.  The opposite type fills the
(r + c) odd positions, with its weight-2 checks on the left and right
columns.  Each type has (d*d - 1) // 2 checks.

Only the simulated sector is decoded; the other sector is identical up
to a 90 degree rotation, so its statistics are the same.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_DISTANCE = 31

COLOR_ORDER = ("A", "B", "C", "D")

# Diagonal neighbor offsets in plaquette coordinates, paired with the
# support-qubit offset shared with that neighbor.  Order is fixed:
# upper-left, upper-right, lower-left, lower-right.
_DIAG = ((-1, -1), (-1, 1), (1, -1), (1, 1))
_QOFF = ((-1, -1), (-1, 0), (0, -1), (0, 0))


class _Boundary:
    """Marker for a clique slot whose partner check is off the lattice."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "Boundary"


Boundary = _Boundary()


@dataclass(frozen=True)
class Lattice:
    """Immutable geometry of one check sector.

    ``clique_map[a]`` lists, for ancilla ``a``, one entry per support
    data qubit: ``(neighbor, shared)`` where ``neighbor`` is the index
    of the same-type check sharing that data qubit, or ``Boundary`` if
    no such check exists.  ``boundary_slots[a]`` collects the shared
    qubits of the Boundary entries.
    """

    distance: int
    data_qubits: tuple[tuple[int, int], ...]
    ancillas: tuple[tuple[int, int], ...]
    supports: tuple[tuple[int, ...], ...]
    clique_map: tuple[tuple[tuple[object, int], ...], ...]
    boundary_slots: tuple[tuple[int, ...], ...]
    colors: tuple[str, ...]
    logical_support: tuple[int, ...]
    opposite_ancillas: tuple[tuple[int, int], ...]
    opposite_supports: tuple[tuple[int, ...], ...]

    @property
    def n_data(self) -> int:
        return len(self.data_qubits)

    @property
    def n_ancillas(self) -> int:
        return len(self.ancillas)


def _in_grid(q: tuple[int, int], d: int) -> bool:
    return 0 <= q[0] < d and 0 <= q[1] < d


@lru_cache(maxsize=None)
def build(distance: int) -> Lattice:
    """Construct the lattice for an odd code distance >= 3.

    The construction is deterministic: the same distance always yields
    an identical structure.
    """
    if not isinstance(distance, int) or distance % 2 == 0 or distance < 3:
        raise ValueError(f"invalid distance: need an odd integer >= 3, got {distance!r}")
    if distance > MAX_DISTANCE:
        raise ValueError(f"invalid distance: {distance} exceeds supported maximum {MAX_DISTANCE}")

    d = distance
    data_qubits = tuple((i, j) for i in range(d) for j in range(d))
    qidx = {q: k for k, q in enumerate(data_qubits)}

    anc_coords: list[tuple[int, int]] = []
    supports: list[tuple[int, ...]] = []
    opp_coords: list[tuple[int, int]] = []
    opp_supports: list[tuple[int, ...]] = []
    for r in range(d + 1):
        for c in range(d + 1):
            sup = [(r + dr, c + dc) for dr, dc in _QOFF if _in_grid((r + dr, c + dc), d)]
            if (r + c) % 2 == 0:
                if len(sup) == 4 or (len(sup) == 2 and r in (0, d)):
                    anc_coords.append((r, c))
                    supports.append(tuple(sorted(qidx[q] for q in sup)))
            else:
                if len(sup) == 4 or (len(sup) == 2 and c in (0, d)):
                    opp_coords.append((r, c))
                    opp_supports.append(tuple(sorted(qidx[q] for q in sup)))

    aidx = {rc: k for k, rc in enumerate(anc_coords)}
    clique_map: list[tuple[tuple[object, int], ...]] = []
    slots_all: list[tuple[int, ...]] = []
    colors: list[str] = []
    for r, c in anc_coords:
        entries: list[tuple[object, int]] = []
        slots: list[int] = []
        for (dr, dc), (qr, qc) in zip(_DIAG, _QOFF):
            q = (r + qr, c + qc)
            if not _in_grid(q, d):
                continue
            nb = aidx.get((r + dr, c + dc))
            if nb is None:
                entries.append((Boundary, qidx[q]))
                slots.append(qidx[q])
            else:
                entries.append((nb, qidx[q]))
        clique_map.append(tuple(entries))
        slots_all.append(tuple(slots))
        # checkerboard over sublattice coordinates; the -1 keeps v integral
        u = (r + c) // 2
        v = (r - c + d - 1) // 2
        colors.append(COLOR_ORDER[2 * (v % 2) + (u % 2)])

    return Lattice(
        distance=d,
        data_qubits=data_qubits,
        ancillas=tuple(anc_coords),
        supports=tuple(supports),
        clique_map=tuple(clique_map),
        boundary_slots=tuple(slots_all),
        colors=tuple(colors),
        logical_support=tuple(range(d)),
        opposite_ancillas=tuple(opp_coords),
        opposite_supports=tuple(opp_supports),
    )


def clique_of(lattice: Lattice, ancilla: int) -> list[tuple[object, int]]:
    """Clique entries of one ancilla: (neighbor or Boundary, shared data qubit)."""
    if not 0 <= ancilla < lattice.n_ancillas:
        raise IndexError(f"ancilla index {ancilla} out of range for {lattice.n_ancillas} ancillas")
    return list(lattice.clique_map[ancilla])


def color_groups(lattice: Lattice) -> list[tuple[int, ...]]:
    """Ancilla indices per color, in the fixed execution order A, B, C, D."""
    return [
        tuple(a for a, col in enumerate(lattice.colors) if col == name)
        for name in COLOR_ORDER
    ]
