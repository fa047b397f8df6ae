"""Mermin-Klyshko Bell operators and a seeded search over measurement settings.

Normalization: the local-hidden-variable bound is 1 and the quantum
maximum is 2**((n-1)/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .linalg import SX, SY, SZ, n_qubits_of

MAX_BELL_QUBITS = 8
PAULIS = np.array([SX, SY, SZ])
GRID_POINTS = 16


def bloch_vector(theta: float, phi: float) -> np.ndarray:
    return np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])


@dataclass(frozen=True)
class MeasurementSettings:
    """Two Bloch directions per party, stored as an ``(n, 4)`` angle array.

    Row ``k`` is ``(theta, phi, theta', phi')`` for the unprimed and primed
    observables of party ``k + 1``.
    """

    angles: np.ndarray

    def __post_init__(self):
        a = np.array(self.angles, dtype=float)
        if a.ndim != 2 or a.shape[1] != 4 or a.shape[0] < 1:
            raise ValueError(f"angles must have shape (n, 4), got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    @property
    def n_qubits(self) -> int:
        return self.angles.shape[0]

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Unit vectors ``(a, a')``, each of shape ``(n, 3)``."""
        a = np.array([bloch_vector(t, p) for t, p, _, _ in self.angles])
        ap = np.array([bloch_vector(t, p) for _, _, t, p in self.angles])
        return a, ap

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "MeasurementSettings":
        # uniform on the sphere: cos(theta) uniform in [-1, 1]
        theta = np.arccos(rng.uniform(-1, 1, size=(n, 2)))
        phi = rng.uniform(0, 2 * np.pi, size=(n, 2))
        return cls(np.stack([theta[:, 0], phi[:, 0], theta[:, 1], phi[:, 1]], axis=1))

    @classmethod
    def equatorial(cls, phis: np.ndarray, phis_primed: np.ndarray) -> "MeasurementSettings":
        n = len(phis)
        half = np.full(n, np.pi / 2)
        return cls(np.stack([half, np.asarray(phis), half, np.asarray(phis_primed)], axis=1))

    def to_dict(self) -> dict:
        return {"angles": self.angles.tolist()}


def _observable(v: np.ndarray) -> np.ndarray:
    return np.tensordot(v, PAULIS, axes=1)


def mk_operator_from_vectors(a: np.ndarray, ap: np.ndarray) -> np.ndarray:
    """MK operator for (possibly non-unit) direction vectors; linear in each party's pair."""
    b = _observable(a[0])
    bp = _observable(ap[0])
    for k in range(1, a.shape[0]):
        s = _observable(a[k] + ap[k])
        d = _observable(a[k] - ap[k])
        sp = _observable(ap[k] + a[k])
        dp = _observable(ap[k] - a[k])
        b, bp = (
            0.5 * (np.kron(b, s) + np.kron(bp, d)),
            0.5 * (np.kron(bp, sp) + np.kron(b, dp)),
        )
    return b


def mk_operator(settings: MeasurementSettings) -> np.ndarray:
    """B_n from B_1 = a_1.sigma and
    B_n = 1/2 B_{n-1} (a_n + a'_n).sigma + 1/2 B'_{n-1} (a_n - a'_n).sigma,
    with B' obtained by swapping primed and unprimed settings."""
    if settings.n_qubits < 2:
        raise ValueError("MK operator needs at least two parties")
    return mk_operator_from_vectors(*settings.vectors())


def mk_value(rho: np.ndarray, settings: MeasurementSettings) -> float:
    """tr(rho B_n)."""
    n = n_qubits_of(rho)
    if n != settings.n_qubits:
        raise ValueError(f"state has {n} qubits, settings describe {settings.n_qubits}")
    val = np.sum(mk_operator(settings).T * rho)
    return float(val.real)


def correlation_tensor(rho: np.ndarray) -> np.ndarray:
    """T[i_1..i_n] = tr(rho sigma_{i_1} x ... x sigma_{i_n}) with i in (x, y, z)."""
    n = n_qubits_of(rho)
    t = rho.reshape((2,) * (2 * n))
    # contract one qubit at a time; the new Pauli axis goes to the end
    for k in range(n):
        rows = n - k
        # axes 0 and rows are the row/column index of the current leading qubit
        t = np.tensordot(PAULIS, t, axes=([2, 1], [0, rows]))
        t = np.moveaxis(t, 0, -1)
    return t.real


class _FastMK:
    """Evaluates tr(rho B_n) from the correlation tensor instead of 2^n x 2^n matrices."""

    def __init__(self, rho: np.ndarray):
        self.T = correlation_tensor(rho)
        self.n = self.T.ndim

    def value(self, a: np.ndarray, ap: np.ndarray) -> float:
        m, mp = a[0], ap[0]
        for k in range(1, self.n):
            s, d = a[k] + ap[k], a[k] - ap[k]
            m, mp = (
                0.5 * (np.multiply.outer(m, s) + np.multiply.outer(mp, d)),
                0.5 * (np.multiply.outer(mp, s) - np.multiply.outer(m, d)),
            )
        return float(np.sum(self.T * m))

    def party_coefficients(self, a: np.ndarray, ap: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Gradients g, g' with value = g.a_k + g'.a'_k (the value is linear in party k's pair)."""
        g = np.empty(3)
        gp = np.empty(3)
        a = a.copy()
        ap = ap.copy()
        for i in range(3):
            e = np.zeros(3)
            e[i] = 1.0
            a[k], ap[k] = e, np.zeros(3)
            g[i] = self.value(a, ap)
            a[k], ap[k] = np.zeros(3), e
            gp[i] = self.value(a, ap)
        return g, gp


def _maximize_angle(f, x0: float) -> float:
    """Dense grid over one period followed by a golden-section refinement."""
    grid = x0 + np.linspace(0, 2 * np.pi, GRID_POINTS, endpoint=False)
    vals = np.array([f(x) for x in grid])
    i = int(np.argmax(vals))
    step = 2 * np.pi / GRID_POINTS
    lo, mid, hi = grid[i] - step, grid[i], grid[i] + step
    # flat directions (zero gradient) have no strict bracket
    if not (f(lo) < vals[i] and f(hi) < vals[i]):
        return float(grid[i])
    res = minimize_scalar(lambda x: -f(x), bracket=(lo, mid, hi), method="golden", tol=1e-10)
    return float(res.x) if -res.fun >= vals[i] else float(grid[i])


@dataclass(frozen=True)
class BellSearchResult:
    best_value: float
    settings: MeasurementSettings
    restart_values: tuple[float, ...]
    histories: tuple[tuple[float, ...], ...]

    @property
    def violation(self) -> bool:
        return self.best_value > 1.0


def _ascend(fast: _FastMK, settings: MeasurementSettings, iterations: int, tol: float):
    ang = settings.angles.copy()
    a = np.array([bloch_vector(t, p) for t, p in ang[:, :2]])
    ap = np.array([bloch_vector(t, p) for t, p in ang[:, 2:]])
    current = fast.value(a, ap)
    history = [current]
    for _ in range(iterations):
        start = current
        for k in range(fast.n):
            g, gp = fast.party_coefficients(a, ap, k)
            for col, (vec, grad) in ((0, (a, g)), (1, (ap, gp))):
                ti, pi = 2 * col, 2 * col + 1
                th, ph = ang[k, ti], ang[k, pi]
                # value is affine in this party's direction, so each angle is a 1-d sinusoid
                base = current - grad @ vec[k]
                th_new = _maximize_angle(lambda t: grad @ bloch_vector(t, ph), th)
                ph_new = _maximize_angle(lambda p: grad @ bloch_vector(th_new, p), ph)
                cand = bloch_vector(th_new, ph_new)
                new_val = base + grad @ cand
                if new_val > current:
                    ang[k, ti], ang[k, pi] = th_new, ph_new
                    vec[k] = cand
                    current = new_val
        current = fast.value(a, ap)
        history.append(max(current, history[-1]))
        if current - start < tol:
            break
    return current, MeasurementSettings(ang), tuple(history)


def mk_optimize(
    rho: np.ndarray, restarts: int = 16, iterations: int = 200, seed: int = 0, tol: float = 1e-13
) -> BellSearchResult:
    """Multi-start coordinate ascent of tr(rho B_n) over all 4n angles.

    Each restart draws random settings from its own child of ``seed`` and
    sweeps the parties in order, re-optimizing each angle by grid search
    plus golden-section refinement. Results are deterministic in
    ``(seed, restarts, iterations)``.
    """
    n = n_qubits_of(rho)
    if n > MAX_BELL_QUBITS:
        raise ValueError(f"Bell search supports at most {MAX_BELL_QUBITS} qubits, got {n}")
    if n < 2:
        raise ValueError("Bell search needs at least two qubits")
    fast = _FastMK(rho)
    best = None
    values, histories = [], []
    for child in np.random.SeedSequence(seed).spawn(restarts):
        start = MeasurementSettings.random(n, np.random.default_rng(child))
        val, settings, hist = _ascend(fast, start, iterations, tol)
        values.append(val)
        histories.append(hist)
        if best is None or val > best[0]:
            best = (val, settings)
    return BellSearchResult(best[0], best[1], tuple(values), tuple(histories))


def mermin_settings(n: int) -> MeasurementSettings:
    """Equatorial settings reaching the GHZ maximum 2**((n-1)/2) for |GHZ+>.

    a_k = sigma_x and a'_k = sigma_y on every party except the last, which is
    rotated by -pi/4 * (n - 1) so that all product phases align.
    """
    phis = np.zeros(n)
    phis_p = np.full(n, np.pi / 2)
    phis[-1] -= np.pi / 4 * (n - 1)
    phis_p[-1] -= np.pi / 4 * (n - 1)
    return MeasurementSettings.equatorial(phis, phis_p)


def mk_quantum_bound(n: int) -> float:
    return 2 ** ((n - 1) / 2)

