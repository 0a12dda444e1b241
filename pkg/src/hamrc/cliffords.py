"""Single-qubit Clifford frames tracked both as matrices and symbolically.

Each frame carries its 2x2 unitary together with the signed axis images
of X, Y, Z under conjugation, so expansions can be conjugated exactly at
the coefficient level while schedules get the concrete matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .pauli import HamExpansion, PauliString

_SQ2 = np.sqrt(2.0)


@dataclass(frozen=True)
class LocalClifford:
    """A single-qubit Clifford with its exact action on the Pauli axes."""

    matrix: np.ndarray
    images: tuple[tuple[int, str], tuple[int, str], tuple[int, str]]  # X, Y, Z

    def image(self, axis: str) -> tuple[int, str]:
        """(sign, axis) of ``U sigma_axis U^dag``; identity maps to itself."""
        if axis == "I":
            return (1, "I")
        return self.images["XYZ".index(axis)]

    def compose(self, inner: "LocalClifford") -> "LocalClifford":
        """Frame equal to applying ``inner`` first, then this frame."""
        imgs = []
        for axis in "XYZ":
            s1, mid = inner.image(axis)
            s2, out = self.image(mid)
            imgs.append((s1 * s2, out))
        return LocalClifford(self.matrix @ inner.matrix, tuple(imgs))

    def dagger(self) -> "LocalClifford":
        inv: dict[str, tuple[int, str]] = {}
        for axis in "XYZ":
            s, out = self.image(axis)
            inv[out] = (s, axis)
        return LocalClifford(
            self.matrix.conj().T, tuple(inv[a] for a in "XYZ")
        )

    def is_identity_action(self) -> bool:
        return all(self.image(a) == (1, a) for a in "XYZ")


def _cliff(matrix, x, y, z) -> LocalClifford:
    m = np.asarray(matrix, dtype=complex)
    m.flags.writeable = False
    return LocalClifford(m, (x, y, z))


CLIFF_ID = _cliff(np.eye(2), (1, "X"), (1, "Y"), (1, "Z"))
CLIFF_HAD = _cliff([[1 / _SQ2, 1 / _SQ2], [1 / _SQ2, -1 / _SQ2]],
                   (1, "Z"), (-1, "Y"), (1, "X"))
CLIFF_S = _cliff([[1, 0], [0, 1j]], (1, "Y"), (-1, "X"), (1, "Z"))
CLIFF_SDG = _cliff([[1, 0], [0, -1j]], (-1, "Y"), (1, "X"), (1, "Z"))
# quarter turns about X: exp(-i pi X / 4) and its inverse
CLIFF_XQ = _cliff([[1 / _SQ2, -1j / _SQ2], [-1j / _SQ2, 1 / _SQ2]],
                  (1, "X"), (1, "Z"), (-1, "Y"))
CLIFF_XQI = _cliff([[1 / _SQ2, 1j / _SQ2], [1j / _SQ2, 1 / _SQ2]],
                   (1, "X"), (-1, "Z"), (1, "Y"))

#: Pauli conjugators: sign -1 exactly on the two anticommuting axes
PAULI_CLIFF = {
    "I": CLIFF_ID,
    "X": _cliff([[0, 1], [1, 0]], (1, "X"), (-1, "Y"), (-1, "Z")),
    "Y": _cliff([[0, -1j], [1j, 0]], (-1, "X"), (1, "Y"), (-1, "Z")),
    "Z": _cliff([[1, 0], [0, -1]], (-1, "X"), (-1, "Y"), (1, "Z")),
}

#: fixed rotation table: AXIS_ROTATION[(a, b)] maps sigma_a -> +sigma_b
AXIS_ROTATION = {
    ("X", "X"): CLIFF_ID,
    ("Y", "Y"): CLIFF_ID,
    ("Z", "Z"): CLIFF_ID,
    ("X", "Z"): CLIFF_HAD,
    ("Z", "X"): CLIFF_HAD,
    ("X", "Y"): CLIFF_S,
    ("Y", "X"): CLIFF_SDG,
    ("Y", "Z"): CLIFF_XQ,
    ("Z", "Y"): CLIFF_XQI,
}


def sign_flip_clifford(axis: str) -> LocalClifford:
    """Pauli conjugator flipping ``sigma_axis`` to ``-sigma_axis``.

    Uses the lexicographically smallest anticommuting axis (X before Y
    before Z), so the choice is deterministic.
    """
    partner = {"X": "Y", "Y": "X", "Z": "X"}[axis]
    return PAULI_CLIFF[partner]


def conjugate_by_cliffords(
    ham: HamExpansion, layer: Mapping[int, LocalClifford]
) -> HamExpansion:
    """Exact coefficient-level conjugation of an expansion by a frame layer.

    Sites absent from ``layer`` are left untouched.  Every term maps to a
    single term with the same coefficient magnitude.
    """
    out: dict[PauliString, float] = {}
    for p, c in ham.items():
        ops = list(p.ops)
        sign = 1
        for site, cliff in layer.items():
            s, axis = cliff.image(ops[site])
            ops[site] = axis
            sign *= s
        q = PauliString("".join(ops))
        out[q] = out.get(q, 0.0) + sign * c
    return HamExpansion(ham.n, out)
