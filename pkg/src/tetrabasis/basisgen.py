"""Tetrahedral symmetry group, orbit bases, and the reference two-qubit EJM."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fiducial import PhasePolynomial
from .qcore import (
    EPS_NORM,
    PauliString,
    check_capacity,
    identity_string,
    num_qubits,
    pauli_multiply,
)

# Regular tetrahedron vertices on the Bloch sphere, canonical order.
TETRAHEDRON_VERTICES = np.array(
    [
        [1, 1, 1],
        [1, -1, -1],
        [-1, 1, -1],
        [-1, -1, 1],
    ],
    dtype=float,
) / np.sqrt(3)


class NonOrthonormalBasisError(RuntimeError):
    """Operation requires an orthonormal basis but the orbit is degenerate."""


@dataclass(frozen=True)
class TetraGroup:
    """Abelian order-2^n Pauli group generated by Z(i)Z(i+1) and X^(x n).

    ``elements[g]`` is the group element for label g, whose bits (g1..gn,
    g1 most significant) select the ordered generator product
    (Z1Z2)^g1 ... (Z(n-1)Zn)^g(n-1) (X^n)^gn.
    """

    n: int
    elements: tuple[PauliString, ...]

    def __post_init__(self):
        if len(self.elements) != 2**self.n:
            raise ValueError("group must have 2^n elements")

    def element_matrix(self, g: int) -> np.ndarray:
        return self.elements[g].to_matrix()


@lru_cache(maxsize=None)
def build_tetra_group(n: int) -> TetraGroup:
    """Construct G_tetra for n >= 2 qubits with the canonical phase convention."""
    if n < 2:
        raise ValueError("tetrahedral group needs n >= 2")
    check_capacity(2**n)
    generators = []
    for i in range(1, n):
        letters = ["I"] * n
        letters[i - 1] = "Z"
        letters[i] = "Z"
        generators.append(PauliString("".join(letters)))
    generators.append(PauliString("X" * n))

    elements = []
    for g in range(2**n):
        elem = identity_string(n)
        for k in range(n):
            if (g >> (n - 1 - k)) & 1:
                elem = pauli_multiply(elem, generators[k])
        elements.append(elem)
    return TetraGroup(n, tuple(elements))


@lru_cache(maxsize=8)
def _group_element_matrices(n: int) -> tuple[np.ndarray, ...]:
    return tuple(elem.to_matrix() for elem in build_tetra_group(n).elements)


@dataclass(frozen=True)
class Basis:
    """2^n columns, column g = U_g |fiducial> under the canonical label order."""

    n: int
    columns: np.ndarray  # (2^n, 2^n), column j is basis state j
    fiducial: np.ndarray
    group: TetraGroup | None = None
    polynomial: PhasePolynomial | None = None

    def column(self, g: int) -> np.ndarray:
        return self.columns[:, g]

    @property
    def size(self) -> int:
        return self.columns.shape[1]


def orbit_basis(psi: np.ndarray, group: TetraGroup,
                polynomial: PhasePolynomial | None = None) -> Basis:
    """Orbit { U_g |psi> } as a basis; orthonormality is not assumed here."""
    psi = np.asarray(psi, dtype=complex)
    if num_qubits(psi.shape[0]) != group.n:
        raise ValueError("state dimension does not match group qubit count")
    if group == build_tetra_group(group.n):
        matrices = _group_element_matrices(group.n)
    else:
        matrices = tuple(elem.to_matrix() for elem in group.elements)
    cols = np.empty((psi.shape[0], len(group.elements)), dtype=complex)
    for g, mat in enumerate(matrices):
        cols[:, g] = mat @ psi
    return Basis(group.n, cols, psi, group, polynomial)


@dataclass(frozen=True)
class OrthonormalityReport:
    ok: bool
    max_violation: float


def check_orthonormal(basis: Basis, tol: float = EPS_NORM) -> OrthonormalityReport:
    """Orthonormality check; for orbit bases this reduces to fiducial overlaps.

    For a Pauli-group orbit, <col_g|col_h> equals a unit phase times
    <psi|U_(g xor h)|psi>, so the fiducial overlaps carry the whole Gram matrix.
    """
    violation = abs(np.linalg.norm(basis.fiducial) - 1.0)
    if basis.group is not None:
        psi = basis.fiducial
        for g in range(1, basis.size):
            overlap = abs(np.vdot(psi, basis.column(g)))
            violation = max(violation, overlap)
    else:
        gram = basis.columns.conj().T @ basis.columns
        violation = max(violation, float(np.max(np.abs(gram - np.eye(basis.size)))))
    violation = float(violation)
    return OrthonormalityReport(ok=bool(violation <= tol), max_violation=violation)


def measurement_unitary(basis: Basis, tol: float = EPS_NORM) -> np.ndarray:
    """M with M|g> = U_g|psi>; requires an orthonormal basis."""
    report = check_orthonormal(basis, tol)
    if not report.ok:
        raise NonOrthonormalBasisError(
            f"basis is not orthonormal (violation {report.max_violation:.3e})"
        )
    return basis.columns.copy()


def bloch_state(direction: np.ndarray, sign: int = +1, tol: float = EPS_NORM) -> np.ndarray:
    """Qubit eigenstate along a unit Bloch vector (+1) or its antipode (-1)."""
    direction = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(direction) - 1.0) > max(tol, 1e-9):
        raise ValueError("direction must be a unit vector")
    mx, my, mz = direction
    theta = np.arccos(np.clip(mz, -1.0, 1.0))
    phi = np.arctan2(my, mx)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if sign > 0:
        return np.array([c, s * np.exp(1j * phi)], dtype=complex)
    return np.array([s, -c * np.exp(1j * phi)], dtype=complex)


def ejm_reference_basis() -> Basis:
    """The literature two-qubit EJM: column i is a superposition of |m_i,-m_i> and |-m_i,m_i>."""
    a = (np.sqrt(3) + 1) / (2 * np.sqrt(2))
    b = (np.sqrt(3) - 1) / (2 * np.sqrt(2))
    cols = np.empty((4, 4), dtype=complex)
    for i, m in enumerate(TETRAHEDRON_VERTICES):
        plus = bloch_state(m, +1)
        minus = bloch_state(m, -1)
        cols[:, i] = a * np.kron(plus, minus) + b * np.kron(minus, plus)
    return Basis(2, cols, cols[:, 0].copy())


def bases_equal_up_to_relabeling(b1: np.ndarray, b2: np.ndarray, tol: float = 1e-9) -> bool:
    """True when the column sets match up to a permutation and per-column phases."""
    if b1.shape != b2.shape:
        return False
    overlaps = np.abs(b2.conj().T @ b1)
    used = set()
    for j in range(b1.shape[1]):
        matches = [k for k in range(b2.shape[1]) if overlaps[k, j] >= 1 - tol]
        matches = [k for k in matches if k not in used]
        if not matches:
            return False
        used.add(matches[0])
    return True
