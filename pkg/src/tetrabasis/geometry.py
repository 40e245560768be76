"""Bloch-vector extraction and classification of the local basis geometry.

The group orbit constrains each qubit's marginals to an even-sign-change
family (a disphenoid vertex set); classification decides whether that set is
a regular tetrahedron, a planar rectangle, a line, or degenerate, and
compares handedness between qubits.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .basisgen import Basis, bloch_state
from .qcore import EPS_UNITARY, PAULI_MATS, apply_on_qubit, is_unitary, num_qubits, partial_trace

EPS_GEO = 1e-8

GEOMETRY_CLASSES = (
    "regular_tetrahedron",
    "disphenoid",
    "planar_rectangle",
    "collinear",
    "degenerate",
)


class DegenerateGeometryError(RuntimeError):
    """Bloch table does not span enough directions for the requested map."""


class ChiralityInconsistencyError(RuntimeError):
    """No single orthogonal map aligns the two qubits' Bloch tables."""


def bloch_vector(psi: np.ndarray, qubit: int) -> np.ndarray:
    """(<X>, <Y>, <Z>) of one qubit of a pure state."""
    rho = partial_trace(psi, {qubit})
    return np.array(
        [np.trace(rho @ PAULI_MATS[p]).real for p in ("X", "Y", "Z")]
    )


def basis_bloch_table(basis: Basis) -> np.ndarray:
    """Array of shape (n, 2^n, 3): Bloch vector of qubit l in basis column g."""
    table = np.empty((basis.n, basis.size, 3))
    for g in range(basis.size):
        col = basis.column(g)
        for l in range(basis.n):
            table[l, g] = bloch_vector(col, l + 1)
    return table


@dataclass(frozen=True)
class GeometryReport:
    classes: tuple[str, ...]            # per qubit
    lengths: tuple[float, ...]          # per qubit common Bloch length
    r: float | None                     # shared length when all qubits agree
    lines: tuple[tuple[tuple[float, float, float], ...], ...]  # per qubit direction lines
    chirality: dict[tuple[int, int], int | None]               # (k, l) with k < l -> sign
    nonzero_components: bool

    @property
    def all_regular(self) -> bool:
        return all(c == "regular_tetrahedron" for c in self.classes)

    def chirality_signature(self) -> str:
        """Pair signs sorted to a canonical string, '?' for undefined pairs."""
        marks = []
        for sign in self.chirality.values():
            marks.append("?" if sign is None else ("+" if sign > 0 else "-"))
        return "".join(sorted(marks))

    def to_json_dict(self) -> dict:
        return {
            "class": list(self.classes),
            "r": self.r,
            "lines": [[list(v) for v in qubit_lines] for qubit_lines in self.lines],
            "chirality": {f"{k},{l}": s for (k, l), s in self.chirality.items()},
            "nonzero_components": self.nonzero_components,
        }


def _direction_lines(vectors: np.ndarray, tol: float) -> list[np.ndarray]:
    """Group unit vectors into lines (v identified with -v), deterministic order."""
    lines: list[np.ndarray] = []
    for v in vectors:
        for rep in lines:
            if min(np.linalg.norm(v - rep), np.linalg.norm(v + rep)) <= tol:
                break
        else:
            lines.append(_canonical_sign(v))
    return lines


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    for comp in v:
        if abs(comp) > 1e-12:
            return v if comp > 0 else -v
    return v


def classify_geometry(table: np.ndarray, tol: float = EPS_GEO) -> GeometryReport:
    """Per-qubit geometry class, common length, direction lines, and pair chirality."""
    n = table.shape[0]
    classes = []
    lengths = []
    all_lines = []
    nonzero = True
    for l in range(n):
        vecs = table[l]
        nonzero = nonzero and bool(np.min(np.abs(vecs)) > tol)
        norms = np.linalg.norm(vecs, axis=1)
        length = float(np.mean(norms))
        lengths.append(length)
        if np.max(np.abs(norms - length)) > tol or length <= tol:
            classes.append("degenerate")
            all_lines.append(())
            continue
        lines = _direction_lines(vecs / norms[:, None], max(tol, 1e-7))
        all_lines.append(tuple(tuple(float(x) for x in v) for v in lines))
        if len(lines) == 1:
            classes.append("collinear")
        elif len(lines) == 2:
            classes.append("planar_rectangle")
        elif len(lines) == 4:
            dots = [abs(np.dot(a, b)) for i, a in enumerate(lines) for b in lines[i + 1:]]
            if all(abs(d - 1 / 3) <= max(tol, 1e-7) for d in dots):
                classes.append("regular_tetrahedron")
            else:
                classes.append("disphenoid")
        else:
            classes.append("disphenoid")

    spread = max(lengths) - min(lengths)
    r = float(np.mean(lengths)) if spread <= max(tol, 1e-9) else None

    chirality: dict[tuple[int, int], int | None] = {}
    for k in range(1, n + 1):
        for l in range(k + 1, n + 1):
            if classes[k - 1] == "regular_tetrahedron" and classes[l - 1] == "regular_tetrahedron":
                sign, _ = relational_chirality(table, k, l, tol)
                chirality[(k, l)] = sign
            else:
                chirality[(k, l)] = None

    return GeometryReport(
        classes=tuple(classes),
        lengths=tuple(lengths),
        r=r,
        lines=tuple(all_lines),
        chirality=chirality,
        nonzero_components=nonzero,
    )


# Bloch-space action of conjugating by I, X, Y, Z: even sign changes.
_PAULI_FLIPS = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
)


def _labeled_vertices(vectors: np.ndarray, tol: float) -> np.ndarray:
    """The qubit's tetra vertices labeled by the group's local Pauli action.

    Column 0 of the table is the fiducial (group label 0), so its vector
    anchors the orbit; the group acts locally as Pauli conjugations, whose
    Bloch action is the even-sign-change family.  Every table vector must lie
    on that anchored orbit.
    """
    vertices = vectors[0] * _PAULI_FLIPS
    for v in vectors:
        if min(np.linalg.norm(v - w) for w in vertices) > max(tol, 1e-7):
            raise ChiralityInconsistencyError(
                "Bloch table does not carry the sign-change orbit structure"
            )
    return vertices


def relational_chirality(table: np.ndarray, k: int, l: int,
                         tol: float = EPS_GEO) -> tuple[int, np.ndarray]:
    """Orthogonal map aligning the two qubits' group-labeled tetra, and its det sign.

    O carries qubit k's vertex for each local Pauli label onto qubit l's
    vertex for the same label (solved from three labeled vertices, verified
    on the fourth); a -1 sign means mirrored tetrahedra.  Vertices are
    normalized first, so tetra of different sizes compare by shape alone.
    """
    vk = _labeled_vertices(table[k - 1], tol)
    vl = _labeled_vertices(table[l - 1], tol)
    nk, nl = np.linalg.norm(vk[0]), np.linalg.norm(vl[0])
    if nk < max(tol, 1e-9) or nl < max(tol, 1e-9):
        raise DegenerateGeometryError("vanishing Bloch vectors carry no orientation")
    vk = vk / nk
    vl = vl / nl
    mk = vk[:3].T  # columns are the I, X, Y labeled vertices
    ml = vl[:3].T
    if abs(np.linalg.det(mk)) < 1e-9:
        raise DegenerateGeometryError(f"qubit {k} Bloch vectors span rank < 3")
    omap = ml @ np.linalg.inv(mk)
    residual = float(np.linalg.norm(omap @ vk[3] - vl[3]))
    if residual > max(tol, 1e-7):
        raise ChiralityInconsistencyError(
            f"no labeled map aligns qubits {k},{l} (residual {residual:.3e})"
        )
    if np.max(np.abs(omap @ omap.T - np.eye(3))) > 1e-6:
        raise ChiralityInconsistencyError(f"alignment map for qubits {k},{l} is not orthogonal")
    det = float(np.linalg.det(omap))
    return (1 if det > 0 else -1), omap


def conjugate_state(psi: np.ndarray) -> np.ndarray:
    """Entry-wise complex conjugate in the computational basis."""
    return np.conj(np.asarray(psi, dtype=complex))


def apply_local_unitaries(psi: np.ndarray, factors: list[np.ndarray],
                          tol: float = EPS_UNITARY) -> np.ndarray:
    """Apply one single-qubit unitary per qubit: (U_1 x ... x U_n)|psi>."""
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi.shape[0])
    if len(factors) != n:
        raise ValueError(f"expected {n} single-qubit factors, got {len(factors)}")
    for idx, u in enumerate(factors):
        u = np.asarray(u, dtype=complex)
        if u.shape != (2, 2) or not is_unitary(u, max(tol, 1e-9)):
            raise ValueError(f"factor {idx + 1} is not a single-qubit unitary")
        psi = apply_on_qubit(u, psi, idx + 1)
    return psi


def tetra_product_decomposition(psi: np.ndarray, directions: list[np.ndarray]) -> dict[str, complex]:
    """Coefficients of psi in the product basis of +/- eigenstates along the directions.

    Keys are sign patterns such as '++-' (qubit order); the antipodal pair per
    qubit is orthonormal, so the coefficients are plain inner products and
    reconstruction is exact.
    """
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi.shape[0])
    if len(directions) != n:
        raise ValueError(f"expected {n} directions, got {len(directions)}")
    pairs = [(bloch_state(d, +1), bloch_state(d, -1)) for d in directions]
    coeffs: dict[str, complex] = {}
    for pattern in product("+-", repeat=n):
        vec = np.array([1.0], dtype=complex)
        for l, s in enumerate(pattern):
            vec = np.kron(vec, pairs[l][0] if s == "+" else pairs[l][1])
        coeffs["".join(pattern)] = complex(np.vdot(vec, psi))
    return coeffs


def product_state(directions: list[np.ndarray], pattern: str) -> np.ndarray:
    """The product basis state for one sign pattern (helper for reconstruction)."""
    vec = np.array([1.0], dtype=complex)
    for d, s in zip(directions, pattern):
        vec = np.kron(vec, bloch_state(d, +1 if s == "+" else -1))
    return vec
