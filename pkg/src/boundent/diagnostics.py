"""Entanglement diagnostics: negativity, PPT profiles, Dur-Cirac closed forms,
UPB unextendibility, bound-entanglement certification and noise sweeps."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    PSD_TOL,
    Bipartition,
    all_bipartitions,
    hermitian_spectrum,
    n_qubits_of,
    overlap,
    partial_transpose,
    product_factors,
    projector,
)
from .states import DurCiracSpec, _dc_ket

MAX_PROFILE_QUBITS = 8
BISECTION_MAX_ITER = 60


def negativity(rho: np.ndarray, cut: Bipartition) -> float:
    """||rho^T_A||_1 - 1, i.e. twice the summed magnitude of negative PT eigenvalues.

    A Bell pair has negativity 1.
    """
    ev = hermitian_spectrum(partial_transpose(rho, cut))
    return float(2 * np.abs(ev[ev < 0]).sum())


@dataclass(frozen=True)
class CutRecord:
    cut: Bipartition
    min_pt_eigenvalue: float
    negativity: float
    is_ppt: bool

    def to_dict(self) -> dict:
        return {
            "cut": list(self.cut.group_a),
            "min_pt_eigenvalue": self.min_pt_eigenvalue,
            "negativity": self.negativity,
            "is_ppt": self.is_ppt,
        }


@dataclass(frozen=True)
class PptProfile:
    records: tuple[CutRecord, ...]

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, cut: Bipartition) -> CutRecord:
        for r in self.records:
            if r.cut == cut:
                return r
        raise KeyError(str(cut))

    @property
    def ppt_cuts(self) -> list[Bipartition]:
        return [r.cut for r in self.records if r.is_ppt]

    @property
    def all_ppt(self) -> bool:
        return all(r.is_ppt for r in self.records)


def cut_record(rho: np.ndarray, cut: Bipartition, tol: float = PSD_TOL) -> CutRecord:
    ev = hermitian_spectrum(partial_transpose(rho, cut))
    is_ppt = bool(ev[0] >= -tol)
    neg = float(2 * np.abs(ev[ev < 0]).sum())
    if is_ppt:
        # eigen-solver noise below the tolerance is not negativity
        neg = 0.0
    return CutRecord(cut, float(ev[0]), neg, is_ppt)


def ppt_profile(rho: np.ndarray, tol: float = PSD_TOL) -> PptProfile:
    """One :class:`CutRecord` per canonical bipartition."""
    n = n_qubits_of(rho)
    if n > MAX_PROFILE_QUBITS:
        raise ValueError(f"ppt_profile supports at most {MAX_PROFILE_QUBITS} qubits, got {n}")
    return PptProfile(tuple(cut_record(rho, c, tol) for c in all_bipartitions(n)))


def dc_negativity(spec: DurCiracSpec, j: int) -> float:
    """Closed-form negativity max(0, Delta - 2 lambda_j) across I_j."""
    top = (1 << (spec.n_qubits - 1)) - 1
    if not 1 <= j <= top:
        raise ValueError(f"j={j} out of range 1..{top}")
    spec = spec.canonical()
    return max(0.0, spec.delta - 2 * spec.lam(j))


@dataclass(frozen=True)
class UndistillabilityCertificate:
    undistillable: bool
    cover: dict[tuple[int, int], Bipartition]
    uncovered: list[tuple[int, int]] = field(default_factory=list)

    def __bool__(self):
        return self.undistillable

    def to_dict(self) -> dict:
        return {
            "undistillable": self.undistillable,
            "cover": {f"{k},{l}": list(c.group_a) for (k, l), c in self.cover.items()},
            "uncovered": [list(p) for p in self.uncovered],
        }


def _certificate(n: int, ppt_cuts: list[Bipartition]) -> UndistillabilityCertificate:
    cover, uncovered = {}, []
    for k, l in itertools.combinations(range(1, n + 1), 2):
        hit = next((c for c in ppt_cuts if c.separates(k, l)), None)
        if hit is None:
            uncovered.append((k, l))
        else:
            cover[(k, l)] = hit
    return UndistillabilityCertificate(not uncovered, cover, uncovered)


def dc_undistillable(spec: DurCiracSpec) -> UndistillabilityCertificate:
    """Pair-covering test using the cuts I_j with 2 lambda_j >= Delta."""
    spec = spec.canonical()
    n = spec.n_qubits
    ppt = [
        Bipartition.from_dc_index(n, j)
        for j in range(1, 1 << (n - 1))
        if 2 * spec.lam(j) >= spec.delta
    ]
    return _certificate(n, ppt)


def project_to_dc(rho: np.ndarray) -> DurCiracSpec:
    """Dur-Cirac coefficients of an arbitrary state, read off as GHZ-basis overlaps.

    lambda_j is the mean of the Psi_j^+ and Psi_j^- populations, which is
    what keeps the coefficients normalized and makes the map a fixed point
    on Dur-Cirac states. The result is not re-oriented, so ``delta`` can be
    negative for states dominated by Psi_0^-.
    """
    n = n_qubits_of(rho)
    if n < 2:
        raise ValueError("need at least two qubits")
    lp = overlap(_dc_ket(n, 0, 1), rho)
    lm = overlap(_dc_ket(n, 0, -1), rho)
    lambdas = {}
    for j in range(1, 1 << (n - 1)):
        lam = 0.5 * (overlap(_dc_ket(n, j, 1), rho) + overlap(_dc_ket(n, j, -1), rho))
        lambdas[j] = max(lam, 0.0)
    return DurCiracSpec(n, max(lp, 0.0), max(lm, 0.0), lambdas)


def pt_operator(n: int) -> np.ndarray:
    return 2 ** (n - 1) * (projector(_dc_ket(n, 0, 1)) - projector(_dc_ket(n, 0, -1)))


def pt_inequality_value(rho: np.ndarray) -> float:
    """|tr(rho PT_N)|; values above 1 violate the PT inequality."""
    n = n_qubits_of(rho)
    # PT_N only touches the two GHZ basis states
    lp = overlap(_dc_ket(n, 0, 1), rho)
    lm = overlap(_dc_ket(n, 0, -1), rho)
    return abs(2 ** (n - 1) * (lp - lm))


# -- unextendible product bases ---------------------------------------------


def _orthogonal_complement(vectors: list[np.ndarray], tol: float) -> np.ndarray | None:
    """Unit null vector of the rows ``vectors`` in C^2, or None if they have rank 2."""
    if not vectors:
        return np.array([1, 0], dtype=complex)
    m = np.array(vectors)
    _, s, vh = np.linalg.svd(m)
    rank = int(np.sum(s > tol))
    if rank >= 2:
        return None
    return vh[-1].conj()


def find_orthogonal_product(basis: list[np.ndarray], tol: float = 1e-10) -> list[np.ndarray] | None:
    """Search for a product state orthogonal to every member of ``basis``.

    Each member must be cancelled by at least one party whose local factor
    is orthogonal to that member's factor. All assignments of members to
    parties are tried; an assignment is feasible when every party can find
    a local vector orthogonal to the factors assigned to it. Returns the
    local factors of a witness, or None when the set is unextendible.
    """
    if not basis:
        raise ValueError("empty basis")
    factors = [product_factors(psi) for psi in basis]
    n = len(factors[0])
    if any(len(f) != n for f in factors):
        raise ValueError("basis members have different qubit counts")
    for assign in itertools.product(range(n), repeat=len(basis)):
        local = []
        for party in range(n):
            vecs = [factors[i][party] for i, p in enumerate(assign) if p == party]
            # rows <v| so that null vectors w satisfy <v|w> = 0
            w = _orthogonal_complement([v.conj() for v in vecs], tol)
            if w is None:
                break
            local.append(w)
        else:
            return local
    return None


def upb_unextendible(basis: list[np.ndarray], tol: float = 1e-10) -> bool:
    return find_orthogonal_product(basis, tol) is None


# -- certification -----------------------------------------------------------


class EntangledEvidence(str, enum.Enum):
    NEGATIVITY_CUT = "negativity_cut"
    UPB_CONSTRUCTION = "upb_construction"
    ASSERTED_ONLY = "asserted_only"


class Verdict(str, enum.Enum):
    BOUND_ENTANGLED = "bound_entangled"
    DISTILLABLE_POSSIBLE = "distillable_entanglement_possible"
    NO_ENTANGLEMENT_DETECTED = "no_entanglement_detected"


@dataclass(frozen=True)
class BoundEntanglementVerdict:
    entangled_evidence: EntangledEvidence
    negativity_cut: Bipartition | None
    undistillable: UndistillabilityCertificate
    verdict: Verdict
    profile: PptProfile

    def to_dict(self) -> dict:
        return {
            "entangled_evidence": self.entangled_evidence.value,
            "negativity_cut": list(self.negativity_cut.group_a) if self.negativity_cut else None,
            "undistillable": self.undistillable.to_dict(),
            "verdict": self.verdict.value,
        }


def certify_bound_entangled(
    rho: np.ndarray,
    family_hint: str | None = None,
    tol: float = PSD_TOL,
    upb_basis: list[np.ndarray] | None = None,
) -> BoundEntanglementVerdict:
    """Combine NPT evidence of entanglement with a PPT pair cover.

    With ``family_hint="upb"`` and no NPT cut, entanglement is accepted on
    the strength of an unextendible product basis orthogonal to ``rho``.
    PPT states with no such hint get ``asserted_only`` evidence.
    """
    profile = ppt_profile(rho, tol)
    n = n_qubits_of(rho)
    npt = [r for r in profile if not r.is_ppt]
    neg_cut = max(npt, key=lambda r: r.negativity).cut if npt else None
    evidence = EntangledEvidence.ASSERTED_ONLY
    if neg_cut is not None:
        evidence = EntangledEvidence.NEGATIVITY_CUT
    elif family_hint == "upb":
        if upb_basis is None:
            from .states import upb_basis as default_basis

            upb_basis = default_basis()
        orthogonal = all(abs(overlap(psi, rho)) <= tol for psi in upb_basis)
        if orthogonal and upb_unextendible(upb_basis):
            evidence = EntangledEvidence.UPB_CONSTRUCTION
    cert = _certificate(n, profile.ppt_cuts)

    if evidence is EntangledEvidence.ASSERTED_ONLY:
        verdict = Verdict.NO_ENTANGLEMENT_DETECTED
    elif cert.undistillable:
        verdict = Verdict.BOUND_ENTANGLED
    else:
        verdict = Verdict.DISTILLABLE_POSSIBLE
    return BoundEntanglementVerdict(evidence, neg_cut, cert, verdict, profile)


# -- noise -------------------------------------------------------------------


def depolarize(rho: np.ndarray, eps: float) -> np.ndarray:
    """(1 - eps) rho + eps * I / 2**n."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    d = rho.shape[0]
    return (1 - eps) * rho + eps * np.eye(d, dtype=complex) / d


def _entangled_at(rho, cut, eps, tol) -> bool:
    return hermitian_spectrum(partial_transpose(depolarize(rho, eps), cut))[0] < -tol


@dataclass(frozen=True)
class NoiseThreshold:
    eps: float
    lower: float
    upper: float
    iterations: int

    @property
    def width(self) -> float:
        return self.upper - self.lower


def noise_threshold(
    rho: np.ndarray, cut: Bipartition, tol: float = 1e-6, psd_tol: float = PSD_TOL
) -> NoiseThreshold:
    """Depolarizing strength at which the cut becomes PPT, by bisection.

    The bracket ``[lower, upper]`` has the state NPT at ``lower`` and PPT at
    ``upper``; ``eps`` is the midpoint.
    """
    if not _entangled_at(rho, cut, 0.0, psd_tol):
        raise ValueError(f"state is already PPT across {cut}")
    lo, hi = 0.0, 1.0
    it = 0
    while hi - lo > tol and it < BISECTION_MAX_ITER:
        mid = 0.5 * (lo + hi)
        if _entangled_at(rho, cut, mid, psd_tol):
            lo = mid
        else:
            hi = mid
        it += 1
    return NoiseThreshold(0.5 * (lo + hi), lo, hi, it)


def negativity_sweep(rho: np.ndarray, cut: Bipartition, eps_values) -> list[tuple[float, float]]:
    return [(float(e), negativity(depolarize(rho, float(e)), cut)) for e in eps_values]


# -- geometric measure (pure states) -------------------------------------------


@dataclass(frozen=True)
class GeometricMeasureResult:
    max_overlap_sq: float
    factors: tuple[np.ndarray, ...]
    history: tuple[float, ...]

    @property
    def geometric_measure(self) -> float:
        return 1.0 - self.max_overlap_sq


def _contract_except(psi_t: np.ndarray, factors: list[np.ndarray], k: int) -> np.ndarray:
    t = psi_t
    # contract from the last qubit down so axis numbers stay valid
    for q in reversed(range(len(factors))):
        if q == k:
            continue
        t = np.tensordot(t, factors[q].conj(), axes=([q], [0]))
    return t


def geometric_measure_pure(
    psi: np.ndarray, restarts: int = 8, iterations: int = 200, seed: int = 0, tol: float = 1e-14
) -> GeometricMeasureResult:
    """Maximal squared overlap of ``psi`` with a product state.

    Alternating single-qubit updates: with all factors but one fixed, the
    best remaining factor is the normalized partial inner product. Each
    restart starts from random factors drawn from its own child seed.
    """
    n = n_qubits_of(psi)
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise ValueError("psi must be normalized")
    psi_t = psi.reshape((2,) * n)
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        factors = []
        for _ in range(n):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            factors.append(v / np.linalg.norm(v))
        history = []
        for _ in range(iterations):
            for k in range(n):
                v = _contract_except(psi_t, factors, k)
                nv = np.linalg.norm(v)
                if nv > 0:
                    factors[k] = v / nv
            val = float(abs(_full_overlap(psi_t, factors)) ** 2)
            history.append(val)
            if len(history) > 1 and history[-1] - history[-2] < tol:
                break
        if best is None or history[-1] > best.max_overlap_sq:
            best = GeometricMeasureResult(min(history[-1], 1.0), tuple(factors), tuple(history))
    return best


def _full_overlap(psi_t: np.ndarray, factors: list[np.ndarray]) -> complex:
    t = psi_t
    for q in reversed(range(len(factors))):
        t = np.tensordot(t, factors[q].conj(), axes=([q], [0]))
    return complex(t)
