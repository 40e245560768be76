"""Local-unitary invariants: three-tangle, pairwise concurrence, permutation symmetry."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .basisgen import Basis
from .geometry import GeometryReport, basis_bloch_table, classify_geometry
from .qcore import hermitian_eig, num_qubits, partial_trace, psd_sqrt, PAULI_MATS

_YY = np.kron(PAULI_MATS["Y"], PAULI_MATS["Y"])


def three_tangle(psi: np.ndarray) -> float:
    """Genuine tripartite entanglement 4|d1 - 2 d2 + 4 d3| of a three-qubit pure state."""
    psi = np.asarray(psi, dtype=complex)
    if num_qubits(psi.shape[0]) != 3:
        raise ValueError("three_tangle is defined for exactly 3 qubits")
    a = psi.reshape(2, 2, 2)
    d1 = (
        a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2
        + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
        + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2
        + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2
    )
    d2 = (
        a[0, 0, 0] * a[1, 1, 1] * (
            a[0, 1, 1] * a[1, 0, 0] + a[1, 0, 1] * a[0, 1, 0] + a[1, 1, 0] * a[0, 0, 1]
        )
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
        + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
        + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1]
    )
    d3 = (
        a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
        + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0]
    )
    return float(4 * abs(d1 - 2 * d2 + 4 * d3))


def pairwise_concurrence(psi: np.ndarray, pair: tuple[int, int]) -> float:
    """Wootters concurrence of the two-qubit marginal on the given pair.

    Eigenvalues of rho*rho_tilde are taken from the Hermitian similarity
    sqrt(rho) rho_tilde sqrt(rho).
    """
    k, l = pair
    if k == l:
        raise ValueError("pair must consist of two distinct qubits")
    psi = np.asarray(psi, dtype=complex)
    rho = partial_trace(psi, {k, l})
    rho_tilde = _YY @ rho.conj() @ _YY
    root = psd_sqrt(rho)
    lams, _ = hermitian_eig(root @ rho_tilde @ root)
    # floor eigenvalues at the matrix noise scale: sqrt of O(eps) rounding
    # noise would otherwise inject O(1e-8) error into the concurrence
    lams = np.clip(lams, 0.0, None)
    lams[lams < 1e-13 * max(lams[0], 1.0)] = 0.0
    lams = np.sqrt(lams)
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def permutation_operator_apply(psi: np.ndarray, perm: tuple[int, ...]) -> np.ndarray:
    """State with qubit wires permuted: wire i carries what wire perm[i] carried."""
    n = num_qubits(psi.shape[0])
    return psi.reshape([2] * n).transpose(perm).reshape(-1)


def permutation_stabilizer_order(psi: np.ndarray, tol: float = 1e-9) -> int:
    """Number of qubit-wire permutations fixing the state up to global phase."""
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi.shape[0])
    count = 0
    for perm in permutations(range(n)):
        if abs(np.vdot(psi, permutation_operator_apply(psi, perm))) >= 1 - tol:
            count += 1
    return count


@dataclass(frozen=True)
class InvariantFingerprint:
    """Invariant bundle used to group bases into classes."""

    n: int
    tangle: float | None                 # three-qubit only
    concurrence_sq: tuple[float, ...]    # sorted over all qubit pairs
    r: float | None
    chirality_signature: str
    stabilizer_order: int
    conjugate_flag: bool | None = None

    def class_key(self) -> tuple:
        """Key for grouping: LU-invariant fields rounded to 10 decimals.

        The permutation-stabilizer order and the chirality signature are
        recorded but excluded here: both are frame quantities that vary
        across local-Clifford images of one class (a phase gate on a single
        qubit mirrors that qubit's labeled tetra), so keying on them would
        split genuine equivalence classes.
        """
        parts: list = []
        if self.tangle is not None:
            parts.append(round(self.tangle, 10))
        parts.append(tuple(round(c, 10) for c in self.concurrence_sq))
        parts.append(round(self.r, 10) if self.r is not None else None)
        return tuple(parts)

    def to_json_dict(self) -> dict:
        return {
            "tangle": self.tangle,
            "concurrence_sq": list(self.concurrence_sq),
            "r": self.r,
            "chirality": self.chirality_signature,
            "stab_order": self.stabilizer_order,
            "conjugate_flag": self.conjugate_flag,
        }


def invariant_fingerprint(basis: Basis, geometry: GeometryReport | None = None) -> InvariantFingerprint:
    """Fingerprint of an orthonormal basis from its fiducial state."""
    psi = basis.fiducial
    n = basis.n
    if geometry is None:
        geometry = classify_geometry(basis_bloch_table(basis))
    tangle = three_tangle(psi) if n == 3 else None
    conc = sorted(
        round(pairwise_concurrence(psi, (k, l)) ** 2, 10)
        for k, l in combinations(range(1, n + 1), 2)
    )
    return InvariantFingerprint(
        n=n,
        tangle=round(tangle, 10) if tangle is not None else None,
        concurrence_sq=tuple(conc),
        r=round(geometry.r, 10) if geometry.r is not None else None,
        chirality_signature=geometry.chirality_signature(),
        stabilizer_order=permutation_stabilizer_order(psi),
    )
