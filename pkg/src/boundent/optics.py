"""Idealized photon-polarization mixing schemes.

A scheme is a list of branches. Each branch emits a pure state from a
source, passes it through switchable local unitaries and partial
polarizers, optionally appends single photons, and fires with a fixed
probability. Post-selecting on every photon being detected renormalizes
the ensemble of filtered outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import HADAMARD, SX, SY, SZ, apply_local, n_qubits_of, projector, tensor, trace_distance
from .states import BB84, ABLSParams, DurCiracSpec, ghz

UNITARY_TOL = 1e-12
PROB_TOL = 1e-12

SQ5 = math.sqrt(5.0)
SCHMIDT_ALPHA = math.sqrt((3 + SQ5) / 6)
SCHMIDT_BETA = math.sqrt((3 - SQ5) / 6)
UPB_U = np.array(
    [
        [(SQ5 - 1) / math.sqrt(10 - 2 * SQ5), math.sqrt(2 / (5 - SQ5))],
        [math.sqrt(2 / (5 - SQ5)), (1 - SQ5) / math.sqrt(10 - 2 * SQ5)],
    ],
    dtype=complex,
)
# H -> V, V -> -H
SXSZ = SX @ SZ


class SchemeError(ValueError):
    pass


@dataclass(frozen=True)
class Source:
    """Pure-state source.

    ``kind`` is ``"ghz"`` (params ``n``, ``sign``), ``"two_photon_schmidt"``
    (params ``alpha``, ``beta`` giving alpha|00> + beta|11>) or
    ``"single_photon"`` (param ``state``, a length-2 amplitude list).
    """

    kind: str
    params: dict = field(default_factory=dict)

    def emit(self) -> np.ndarray:
        if self.kind == "ghz":
            return ghz(int(self.params["n"]), self.params.get("sign", "+"))
        if self.kind == "two_photon_schmidt":
            alpha, beta = float(self.params["alpha"]), float(self.params["beta"])
            if abs(alpha**2 + beta**2 - 1) > 1e-9:
                raise SchemeError(f"Schmidt amplitudes not normalized: {alpha}^2 + {beta}^2 != 1")
            return np.array([alpha, 0, 0, beta], dtype=complex)
        if self.kind == "single_photon":
            v = np.asarray(self.params["state"], dtype=complex)
            if v.shape != (2,) or abs(np.linalg.norm(v) - 1) > 1e-9:
                raise SchemeError("single_photon state must be a normalized 2-vector")
            return v
        raise SchemeError(f"unknown source kind {self.kind!r}")

    @property
    def n_qubits(self) -> int:
        return n_qubits_of(self.emit())


@dataclass(frozen=True)
class LocalUnitary:
    photon: int
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        u = np.asarray(self.matrix, dtype=complex)
        if u.shape != (2, 2) or np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNITARY_TOL:
            raise SchemeError(f"element on photon {self.photon} is not a 2x2 unitary")
        object.__setattr__(self, "matrix", u)


@dataclass(frozen=True)
class PartialPolarizer:
    """Filter diag(sqrt(T_H), sqrt(T_V)) on one photon."""

    photon: int
    t_h: float
    t_v: float

    def __post_init__(self):
        for name, t in (("T_H", self.t_h), ("T_V", self.t_v)):
            if not 0 < t <= 1:
                raise SchemeError(f"{name}={t} outside (0, 1]")

    @property
    def matrix(self) -> np.ndarray:
        return np.diag([math.sqrt(self.t_h), math.sqrt(self.t_v)]).astype(complex)


Element = LocalUnitary | PartialPolarizer


@dataclass(frozen=True)
class Branch:
    p: float
    source: Source
    elements: tuple = ()
    extra_photons: tuple = ()

    def __post_init__(self):
        if self.p < 0:
            raise SchemeError(f"negative branch probability {self.p}")
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "extra_photons", tuple(np.asarray(v, dtype=complex) for v in self.extra_photons))


@dataclass(frozen=True)
class MixingScheme:
    branches: tuple
    n_qubits: int

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if not self.branches:
            raise SchemeError("scheme has no branches")

    def total_probability(self) -> float:
        return sum(b.p for b in self.branches)

    def validate(self):
        total = self.total_probability()
        if abs(total - 1) > PROB_TOL:
            raise SchemeError(f"branch probabilities sum to {total:.12g}")
        for i, b in enumerate(self.branches):
            n = b.source.n_qubits + len(b.extra_photons)
            if n != self.n_qubits:
                raise SchemeError(f"branch {i} produces {n} photons, scheme declares {self.n_qubits}")


def apply_filter(psi: np.ndarray, photon: int, t_h: float, t_v: float) -> tuple[np.ndarray, float]:
    """Pass one photon through a partial polarizer.

    Returns the un-normalized output ket and its squared norm, the
    probability that the photon is transmitted.
    """
    f = PartialPolarizer(photon, t_h, t_v)
    out = apply_local(psi, f.matrix, photon)
    return out, float(np.vdot(out, out).real)


def _strip_phase(psi: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(psi)))
    if psi[i] == 0:
        return psi
    return psi * (abs(psi[i]) / psi[i])


def branch_output(branch: Branch) -> np.ndarray:
    """Filtered, un-normalized output ket of one branch, global phase removed."""
    psi = branch.source.emit()
    n_src = n_qubits_of(psi)
    for el in branch.elements:
        if not 1 <= el.photon <= n_src:
            raise SchemeError(f"element acts on photon {el.photon}, source emits {n_src}")
        psi = apply_local(psi, el.matrix, el.photon)
    if branch.extra_photons:
        psi = tensor(psi, *branch.extra_photons)
    return _strip_phase(psi)


def run_branch(branch: Branch) -> tuple[np.ndarray, float]:
    """Un-normalized output projector and the branch weight ``p * success``."""
    psi = branch_output(branch)
    return projector(psi), branch.p * float(np.vdot(psi, psi).real)


def assemble_mixture(scheme: MixingScheme) -> np.ndarray:
    """Post-selected state: sum_i p_i |out_i><out_i| / sum_i weight_i."""
    scheme.validate()
    acc = np.zeros((1 << scheme.n_qubits,) * 2, dtype=complex)
    total = 0.0
    for b in scheme.branches:
        proj, w = run_branch(b)
        acc += b.p * proj
        total += w
    if total <= 0:
        raise SchemeError("zero total weight: no branch ever produces a coincidence")
    return acc / total


@dataclass(frozen=True)
class SampleResult:
    rho: np.ndarray
    distance: float
    accepted: int
    shots: int
    counts: tuple[int, ...]


def sample_mixture(scheme: MixingScheme, shots: int, seed: int = 0) -> SampleResult:
    """Finite-statistics run: draw branches, reject on filter loss, average accepted projectors."""
    if shots < 1:
        raise SchemeError("shots must be >= 1")
    scheme.validate()
    rng = np.random.default_rng(seed)
    probs = np.array([b.p for b in scheme.branches])
    probs = probs / probs.sum()
    outputs = [branch_output(b) for b in scheme.branches]
    success = np.array([float(np.vdot(v, v).real) for v in outputs])
    fired = rng.multinomial(shots, probs)
    kept = rng.binomial(fired, np.minimum(success, 1.0))
    accepted = int(kept.sum())
    if accepted == 0:
        raise SchemeError("no shot was accepted")
    rho = sum(k * projector(v / math.sqrt(s)) for k, v, s in zip(kept, outputs, success) if k) / accepted
    exact = assemble_mixture(scheme)
    return SampleResult(rho, trace_distance(rho, exact), accepted, shots, tuple(int(k) for k in kept))


# -- builtin schemes -----------------------------------------------------------


def polarizer_for_ratio(photon: int, ratio: float) -> PartialPolarizer:
    """Partial polarizer with T_V / T_H = ratio, the larger transmission set to 1."""
    if ratio >= 1:
        return PartialPolarizer(photon, 1 / ratio, 1.0)
    return PartialPolarizer(photon, 1.0, ratio)


def abls_probabilities(a: float, b: float, c: float) -> dict[str, float]:
    """Firing probabilities for the ABLS scheme.

    ``p_a``, ``p_b``, ``p_c`` are per-sign: each of the two polarity
    settings of a Pockels cell fires with that probability, and
    p_GHZ : p_a T_V^a : p_b T_V^b : p_c T_V^c = 2 : a : b : c.
    """
    weights = {"ghz": 2.0}
    for name, val in (("a", a), ("b", b), ("c", c)):
        t_v = polarizer_for_ratio(1, val * val).t_v
        weights[name] = val / t_v
    total = weights["ghz"] + 2 * (weights["a"] + weights["b"] + weights["c"])
    return {k: v / total for k, v in weights.items()}


def scheme_abls(a: float, b: float, c: float) -> MixingScheme:
    params = ABLSParams(a, b, c)
    probs = abls_probabilities(params.a, params.b, params.c)
    src = Source("ghz", {"n": 3, "sign": "+"})
    branches = [Branch(probs["ghz"], src)]
    for name, val, photon in (("a", params.a, 1), ("b", params.b, 2), ("c", params.c, 3)):
        filt = polarizer_for_ratio(photon, val * val)
        for u, label in ((SX, "sx"), (SXSZ, "sxsz")):
            branches.append(Branch(probs[name], src, (LocalUnitary(photon, u, label), filt)))
    return MixingScheme(tuple(branches), 3)


def ghz_mixture_branch(n: int, j: int, sign: str, p: float) -> Branch:
    """Branch producing Psi_j^{sign} from |GHZ+>: sigma_x where j_k = 1, sigma_z on qubit n for '-'."""
    elements = [LocalUnitary(k, SX, "sx") for k in range(1, n) if j >> (n - 1 - k) & 1]
    if sign == "-":
        elements.append(LocalUnitary(n, SZ, "sz"))
    elif sign != "+":
        raise SchemeError(f"sign must be '+' or '-', got {sign!r}")
    return Branch(p, Source("ghz", {"n": n, "sign": "+"}), tuple(elements))


def scheme_ghz_mixture(n: int, terms) -> MixingScheme:
    """Scheme from explicit ``(j, sign, p)`` terms; ``j = 0`` is the GHZ pair itself."""
    return MixingScheme(tuple(ghz_mixture_branch(n, j, s, p) for j, s, p in terms if p > 0), n)


def scheme_dur_cirac(spec: DurCiracSpec) -> MixingScheme:
    n = spec.n_qubits
    terms = [(0, "+", spec.lambda0_plus), (0, "-", spec.lambda0_minus)]
    for j, lam in spec.lambdas.items():
        terms += [(j, "+", lam), (j, "-", lam)]
    return scheme_ghz_mixture(n, terms)


def scheme_smolin() -> MixingScheme:
    """Smolin state as the even mixture of Psi_0^+, Psi_6^+, Psi_5^+ and Psi_3^+."""
    return scheme_ghz_mixture(4, [(0, "+", 0.25), (6, "+", 0.25), (5, "+", 0.25), (3, "+", 0.25)])


def upb_unitaries() -> list[tuple[np.ndarray, np.ndarray]]:
    """Local unitaries on (signal, idler) turning the Schmidt source into chi_1..chi_4."""
    u, h = UPB_U, HADAMARD
    return [
        (-(u @ SZ), SZ @ u),
        (h @ u, u @ h),
        (SX @ u @ h, SX @ u),
        (SY @ u, SY @ u @ h),
    ]


def scheme_upb() -> MixingScheme:
    src = Source("two_photon_schmidt", {"alpha": SCHMIDT_ALPHA, "beta": SCHMIDT_BETA})
    branches = []
    for (ua, ub), third in zip(upb_unitaries(), BB84):
        elements = (LocalUnitary(1, ua), LocalUnitary(2, ub))
        branches.append(Branch(0.25, src, elements, (third,)))
    return MixingScheme(tuple(branches), 3)


def single_photon_scheme(states, probs) -> MixingScheme:
    return MixingScheme(tuple(Branch(p, Source("single_photon", {"state": list(s)})) for s, p in zip(states, probs)), 1)

