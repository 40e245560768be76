"""Exhaustive search over phase polynomials and classification of the hits.

Enumerates canonical polynomials (degree >= 2), keeps those whose orbit basis
has regular tetrahedral marginals, fingerprints them, and groups the hits
into equivalence classes with explicit local-Clifford witnesses.
"""

from __future__ import annotations

import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .basisgen import Basis, build_tetra_group, check_orthonormal, orbit_basis
from .entanglement import InvariantFingerprint, invariant_fingerprint
from .fiducial import PhasePolynomial, build_fiducial
from .geometry import GeometryReport, basis_bloch_table, classify_geometry, conjugate_state
from .hierarchy import DEFAULT_CAP, diagonal_clifford_level
from .qcore import CapacityError, apply_on_qubit, num_qubits

FULL_ENUMERATION_LIMIT = 2**23


def canonical_monomials(n: int, min_degree: int = 2) -> list[tuple[int, ...]]:
    """Monomials of degree >= min_degree in canonical (lexicographic) order."""
    monos = []
    for size in range(min_degree, n + 1):
        monos.extend(combinations(range(1, n + 1), size))
    return sorted(monos)


def polynomial_from_coeffs(n: int, m: int, monos: list[tuple[int, ...]],
                           coeffs: tuple[int, ...]) -> PhasePolynomial:
    return PhasePolynomial(n, m, {frozenset(s): c for s, c in zip(monos, coeffs) if c})


def enumerate_polynomials(n: int, m: int, min_degree: int = 2):
    """All (2^m)^(#monomials) coefficient assignments, lexicographic order."""
    if n > 5:
        raise CapacityError("full enumeration supported for n <= 5")
    monos = canonical_monomials(n, min_degree)
    for coeffs in product(range(2**m), repeat=len(monos)):
        yield polynomial_from_coeffs(n, m, monos, coeffs)


def polynomial_space_size(n: int, m: int, min_degree: int = 2) -> int:
    return (2**m) ** len(canonical_monomials(n, min_degree))


@dataclass(frozen=True)
class SearchConfig:
    n: int
    m: int
    require_regular: bool = True
    require_nonzero: bool = False
    min_degree: int = 2
    level_cap: int = DEFAULT_CAP
    jobs: int = 1
    chunk_size: int = 64
    sample: int | None = None      # sampled search for spaces over the full-run limit
    seed: int = 0
    polynomials: tuple[PhasePolynomial, ...] | None = None  # explicit restriction

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("search needs n >= 2")
        if self.m < 1:
            raise ValueError("precision m must be positive")


@dataclass(frozen=True)
class SearchHit:
    polynomial: PhasePolynomial
    geometry: GeometryReport
    fingerprint: InvariantFingerprint
    level: int

    @property
    def key(self) -> str:
        return self.polynomial.to_text()


def evaluate_polynomial_candidate(f: PhasePolynomial) -> SearchHit:
    """Build the orbit basis of f and compute geometry, fingerprint, and level."""
    psi = build_fiducial(f)
    group = build_tetra_group(f.n)
    basis = orbit_basis(psi, group, f)
    report = check_orthonormal(basis)
    if not report.ok:
        raise AssertionError(
            f"orbit of {f.to_text()!r} unexpectedly non-orthonormal "
            f"(violation {report.max_violation:.3e})"
        )
    geometry = classify_geometry(basis_bloch_table(basis))
    fingerprint = invariant_fingerprint(basis, geometry)
    return SearchHit(f, geometry, fingerprint, diagonal_clifford_level(f))


def _passes_filters(hit: SearchHit, cfg: SearchConfig) -> bool:
    if cfg.require_regular and not hit.geometry.all_regular:
        return False
    if cfg.require_nonzero and not hit.geometry.nonzero_components:
        return False
    return True


def _evaluate_chunk(args) -> list[SearchHit]:
    n, m, monos, coeff_chunk, cfg = args
    hits = []
    for coeffs in coeff_chunk:
        hit = evaluate_polynomial_candidate(polynomial_from_coeffs(n, m, monos, coeffs))
        if _passes_filters(hit, cfg):
            hits.append(hit)
    return hits


def _candidate_coeffs(cfg: SearchConfig, monos: list[tuple[int, ...]]):
    size = (2**cfg.m) ** len(monos)
    if cfg.sample is None:
        if size > FULL_ENUMERATION_LIMIT:
            raise CapacityError(
                f"{size} candidates exceed the full-enumeration limit; set a sample limit"
            )
        yield from product(range(2**cfg.m), repeat=len(monos))
    else:
        rng = np.random.default_rng(cfg.seed)
        seen = set()
        while len(seen) < min(cfg.sample, size):
            coeffs = tuple(int(c) for c in rng.integers(0, 2**cfg.m, len(monos)))
            if coeffs not in seen:
                seen.add(coeffs)
                yield coeffs


def search_regular(cfg: SearchConfig) -> list[SearchHit]:
    """Filtered hits over the polynomial space, in deterministic enumeration order."""
    if cfg.polynomials is not None:
        hits = [evaluate_polynomial_candidate(f) for f in cfg.polynomials]
        return [h for h in hits if _passes_filters(h, cfg)]
    monos = canonical_monomials(cfg.n, cfg.min_degree)
    coeff_iter = _candidate_coeffs(cfg, monos)
    if cfg.jobs <= 1:
        hits = []
        for coeffs in coeff_iter:
            hit = evaluate_polynomial_candidate(
                polynomial_from_coeffs(cfg.n, cfg.m, monos, coeffs))
            if _passes_filters(hit, cfg):
                hits.append(hit)
        return hits

    chunks = []
    current = []
    for coeffs in coeff_iter:
        current.append(coeffs)
        if len(current) >= cfg.chunk_size:
            chunks.append(current)
            current = []
    if current:
        chunks.append(current)
    hits = []
    # spawn context: fresh interpreters avoid BLAS state inherited across fork
    context = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=cfg.jobs, mp_context=context) as pool:
        args = [(cfg.n, cfg.m, monos, chunk, cfg) for chunk in chunks]
        for chunk_hits in pool.map(_evaluate_chunk, args):
            hits.extend(chunk_hits)
    return hits


# ---------------------------------------------------------------------------
# single-qubit Clifford representatives and local-Clifford witnesses

_PHASE_GATE = np.array([[1, 0], [0, 1j]], dtype=complex)
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def _phase_canonical(u: np.ndarray) -> bytes:
    flat = u.ravel()
    pivot = flat[np.argmax(np.abs(np.round(flat, 8)))]
    return (np.round(u * (abs(pivot) / pivot), 8) + 0.0).tobytes()


@lru_cache(maxsize=1)
def single_qubit_cliffords() -> tuple[np.ndarray, ...]:
    """The 24 single-qubit Cliffords up to phase, in breadth-first generator order."""
    start = np.eye(2, dtype=complex)
    order = [start]
    seen = {_phase_canonical(start)}
    head = 0
    while head < len(order):
        base = order[head]
        head += 1
        for gate in (_PHASE_GATE, _HADAMARD):
            candidate = base @ gate
            key = _phase_canonical(candidate)
            if key not in seen:
                seen.add(key)
                order.append(candidate)
    assert len(order) == 24
    return tuple(order)


@dataclass(frozen=True)
class Witness:
    """Local-Clifford map carrying a state onto one column of a target basis."""

    clifford_indices: tuple[int, ...]
    conjugated: bool
    column: int
    phase: complex

    def local_unitaries(self) -> list[np.ndarray]:
        cliffs = single_qubit_cliffords()
        return [cliffs[i] for i in self.clifford_indices]

    def apply(self, psi: np.ndarray) -> np.ndarray:
        vec = conjugate_state(psi) if self.conjugated else np.asarray(psi, dtype=complex)
        for qubit, u in enumerate(self.local_unitaries(), start=1):
            vec = apply_on_qubit(u, vec, qubit)
        return vec / self.phase

    def to_json_dict(self) -> dict:
        return {
            "clifford_indices": list(self.clifford_indices),
            "conjugated": self.conjugated,
            "column": self.column,
            "phase": [self.phase.real, self.phase.imag],
        }


def lc_equivalence_witness(psi1: np.ndarray, basis2: Basis, allow_conjugation: bool = False,
                           tol: float = 1e-9) -> Witness | None:
    """First local-Clifford tuple mapping psi1 (or its conjugate) onto a column of basis2.

    Exhausts all 24^n tuples in lexicographic index order (non-conjugated pass
    first); absence of a witness is a definite result for that search space.
    """
    psi1 = np.asarray(psi1, dtype=complex)
    n = num_qubits(psi1.shape[0])
    if n != basis2.n:
        raise ValueError("states act on different qubit counts")
    if n > 4:
        raise CapacityError("witness search supported for n <= 4")
    cliffs = single_qubit_cliffords()
    stack = np.stack(cliffs)  # (24, 2, 2)
    cols_dag = basis2.columns.conj().T

    for conjugated in ((False, True) if allow_conjugation else (False,)):
        base = conjugate_state(psi1) if conjugated else psi1

        def scan(qubit: int, state: np.ndarray) -> Witness | None:
            if qubit == n:
                grouped = state.reshape(-1, 2)
                batch = np.einsum("rb,kab->kra", grouped, stack).reshape(24, -1)
                overlaps = cols_dag @ batch.T  # (columns, 24)
                hits = np.argwhere(np.abs(overlaps) >= 1 - tol)
                if hits.size == 0:
                    return None
                # first tuple = smallest last-qubit index, then smallest column
                order = np.lexsort((hits[:, 0], hits[:, 1]))
                column, last = int(hits[order[0]][0]), int(hits[order[0]][1])
                # mapped state = phase * column, phase = <column|mapped>
                phase = complex(overlaps[column, last])
                return Witness((last,), conjugated, column, phase)
            for idx in range(24):
                result = scan(qubit + 1, apply_on_qubit(cliffs[idx], state, qubit))
                if result is not None:
                    return replace(result, clifford_indices=(idx,) + result.clifford_indices)
            return None

        witness = scan(1, base)
        if witness is not None:
            return witness
    return None


# ---------------------------------------------------------------------------
# grouping hits into classes

@dataclass
class ClassRecord:
    """One equivalence class: shared fingerprint, representatives, witness links."""

    fingerprint: InvariantFingerprint
    representatives: list[PhasePolynomial] = field(default_factory=list)
    witness_links: dict[str, Witness] = field(default_factory=dict)
    conjugate_partner: str | None = None

    @property
    def key(self) -> str:
        return self.representatives[0].to_text()

    def to_json_dict(self) -> dict:
        return {
            "fingerprint": self.fingerprint.to_json_dict(),
            "representatives": [f.to_text() for f in self.representatives],
            "witnesses": {k: w.to_json_dict() for k, w in self.witness_links.items()},
            "conjugate_partner": self.conjugate_partner,
        }


def _hit_basis(hit: SearchHit) -> Basis:
    f = hit.polynomial
    return orbit_basis(build_fiducial(f), build_tetra_group(f.n), f)


def conjugate_partner_key(hit: SearchHit, hits: list[SearchHit], tol: float = 1e-9) -> str | None:
    """Key of the hit whose basis contains this hit's conjugated fiducial as a column."""
    target = conjugate_state(build_fiducial(hit.polynomial))
    for other in hits:
        overlaps = np.abs(_hit_basis(other).columns.conj().T @ target)
        if np.max(overlaps) >= 1 - tol:
            return other.key
    return None


def group_into_classes(hits: list[SearchHit], tol: float = 1e-9) -> list[ClassRecord]:
    """Group hits by fingerprint, split by local-Clifford linkage, pair conjugates.

    Within one fingerprint group, a hit joins the first class whose
    representative basis it maps onto under some pure local-Clifford tuple;
    otherwise it opens a new class.  Conjugation partners are detected by
    matching conjugated fiducials across classes.
    """
    groups: dict[tuple, list[SearchHit]] = {}
    for hit in hits:
        groups.setdefault(hit.fingerprint.class_key(), []).append(hit)

    records: list[ClassRecord] = []
    for key in sorted(groups, key=repr):
        members = groups[key]
        classes: list[tuple[ClassRecord, Basis]] = []
        member_class: dict[str, ClassRecord] = {}
        member_bases: dict[str, Basis] = {}
        for hit in members:
            fid = build_fiducial(hit.polynomial)
            member_bases[hit.key] = _hit_basis(hit)
            for record, rep_basis in classes:
                witness = lc_equivalence_witness(fid, rep_basis, allow_conjugation=False, tol=tol)
                if witness is not None:
                    record.representatives.append(hit.polynomial)
                    record.witness_links[hit.key] = witness
                    member_class[hit.key] = record
                    break
            else:
                record = ClassRecord(fingerprint=hit.fingerprint,
                                     representatives=[hit.polynomial])
                classes.append((record, member_bases[hit.key]))
                member_class[hit.key] = record
        # conjugation pairing: the conjugated fiducial is a column of some
        # member's basis; that member's class is the partner
        for record, _ in classes:
            conj_fid = conjugate_state(build_fiducial(record.representatives[0]))
            for hit in members:
                overlaps = np.abs(member_bases[hit.key].columns.conj().T @ conj_fid)
                if np.max(overlaps) >= 1 - tol:
                    record.conjugate_partner = member_class[hit.key].key
                    break
        ordered = sorted(classes, key=lambda pair: pair[0].key)
        keys_in_order = [record.key for record, _ in ordered]
        for record, _ in ordered:
            flag = None
            if record.conjugate_partner is not None:
                flag = (record.conjugate_partner != record.key
                        and keys_in_order.index(record.conjugate_partner)
                        < keys_in_order.index(record.key))
            record.fingerprint = replace(record.fingerprint, conjugate_flag=flag)
            records.append(record)
    return records
