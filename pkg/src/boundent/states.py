"""Constructors for the bound-entangled state families and their pure components.

Photon polarization H/V maps to |0>/|1>. Bell states follow
Phi+- = (|00> +- |11>)/sqrt2 and Psi+- = (|01> +- |10>)/sqrt2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    KET0,
    KET1,
    KET_MINUS,
    KET_PLUS,
    SX,
    ket,
    local_operator,
    projector,
    tensor,
)

NORM_TOL = 1e-12
SQ2 = math.sqrt(2.0)


def _sign(sign) -> int:
    if sign in ("+", +1, 1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def _check_fraction(x: float, name: str = "x"):
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x}")


def bell_states() -> dict[str, np.ndarray]:
    return {
        "phi+": (ket("00") + ket("11")) / SQ2,
        "phi-": (ket("00") - ket("11")) / SQ2,
        "psi+": (ket("01") + ket("10")) / SQ2,
        "psi-": (ket("01") - ket("10")) / SQ2,
    }


def ghz(n: int, sign="+") -> np.ndarray:
    """(|0...0> +- |1...1>)/sqrt2 on ``n >= 2`` qubits."""
    if n < 2:
        raise ValueError(f"GHZ needs n >= 2, got {n}")
    s = _sign(sign)
    out = np.zeros(1 << n, dtype=complex)
    out[0] = 1 / SQ2
    out[-1] = s / SQ2
    return out


def ghz_like(n: int, j: int, sign="+") -> np.ndarray:
    """(|j_1..j_{n-1} 0> +- |~j_1..~j_{n-1} 1>)/sqrt2 for ``1 <= j < 2**(n-1)``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not 1 <= j <= (1 << (n - 1)) - 1:
        raise ValueError(f"j={j} out of range 1..{(1 << (n - 1)) - 1}")
    return _dc_ket(n, j, _sign(sign))


def _dc_ket(n: int, j: int, s: int) -> np.ndarray:
    # j = 0 gives the GHZ pair itself
    full = (1 << n) - 1
    lo = j << 1
    out = np.zeros(1 << n, dtype=complex)
    out[lo] = 1 / SQ2
    out[full ^ lo] = s / SQ2
    return out


def smolin_bell() -> np.ndarray:
    """Equal mixture of the four Bell-pair products Psi_i(AB) x Psi_i(CD)."""
    return sum(tensor(projector(b), projector(b)) for b in bell_states().values()) / 4


def smolin_ghz_components() -> list[np.ndarray]:
    """The four orthogonal GHZ states X_0..X_3."""
    return [
        (ket("0000") + ket("1111")) / SQ2,
        (ket("0011") + ket("1100")) / SQ2,
        (ket("0101") + ket("1010")) / SQ2,
        (ket("0110") + ket("1001")) / SQ2,
    ]


def smolin_ghz() -> np.ndarray:
    return sum(projector(x) for x in smolin_ghz_components()) / 4


@dataclass(frozen=True)
class ABLSParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"ABLS parameter {name} must be positive, got {getattr(self, name)}")

    @property
    def flag_entangled(self) -> bool:
        """False on the abc = 1 boundary, where the family is separable."""
        return not math.isclose(self.a * self.b * self.c, 1.0, rel_tol=1e-12)

    @property
    def norm(self) -> float:
        a, b, c = self.a, self.b, self.c
        return 2 + a + 1 / a + b + 1 / b + c + 1 / c


def abls_components(params: ABLSParams) -> dict[str, np.ndarray]:
    """Un-normalized kets psi_{a,b,c}^{+-}; keys like ``"c+"``."""
    out = {}
    for name, val, lo, hi in (
        ("a", params.a, "100", "011"),
        ("b", params.b, "010", "101"),
        ("c", params.c, "001", "110"),
    ):
        for s, tag in ((1, "+"), (-1, "-")):
            out[name + tag] = math.sqrt(val / 2) * ket(lo) + s / math.sqrt(2 * val) * ket(hi)
    return out


def abls(params: ABLSParams) -> np.ndarray:
    """Three-qubit ABLS state, written as GHZ weight 2 plus six diagonal terms."""
    a, b, c = params.a, params.b, params.c
    rho = 2 * projector(ghz(3))
    for bits, w in (("001", c), ("110", 1 / c), ("010", b), ("101", 1 / b), ("100", a), ("011", 1 / a)):
        rho[int(bits, 2), int(bits, 2)] += w
    return rho / params.norm


def abls_mixture(params: ABLSParams) -> np.ndarray:
    """Same state assembled from the psi^{+-} components."""
    rho = 2 * projector(ghz(3))
    for v in abls_components(params).values():
        rho = rho + projector(v)
    return rho / params.norm


@dataclass(frozen=True)
class DurCiracSpec:
    """Coefficients of a GHZ-diagonal Dur-Cirac state.

    ``lambdas`` maps ``j`` in ``1..2**(n-1)-1`` to the shared weight of
    Psi_j^+ and Psi_j^-; missing keys are zero.
    """

    n_qubits: int
    lambda0_plus: float
    lambda0_minus: float = 0.0
    lambdas: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError(f"n_qubits must be >= 2, got {self.n_qubits}")
        top = (1 << (self.n_qubits - 1)) - 1
        clean = {}
        for j, lam in self.lambdas.items():
            j = int(j)
            if not 1 <= j <= top:
                raise ValueError(f"lambda index {j} out of range 1..{top}")
            if lam < 0:
                raise ValueError(f"lambda_{j} is negative ({lam})")
            if lam != 0:
                clean[j] = float(lam)
        object.__setattr__(self, "lambdas", dict(sorted(clean.items())))
        if self.lambda0_plus < 0 or self.lambda0_minus < 0:
            raise ValueError("lambda0 coefficients must be non-negative")

    @property
    def delta(self) -> float:
        return self.lambda0_plus - self.lambda0_minus

    def total(self) -> float:
        return self.lambda0_plus + self.lambda0_minus + 2 * sum(self.lambdas.values())

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.total() - 1) <= tol

    def lam(self, j: int) -> float:
        return self.lambdas.get(j, 0.0)

    def canonical(self) -> "DurCiracSpec":
        """Orientation with delta >= 0 (swap the two GHZ weights if needed)."""
        if self.delta >= 0:
            return self
        return DurCiracSpec(self.n_qubits, self.lambda0_minus, self.lambda0_plus, self.lambdas)

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "lambda0_plus": self.lambda0_plus,
            "lambda0_minus": self.lambda0_minus,
            "lambdas": {str(j): v for j, v in self.lambdas.items()},
        }


def dur_cirac(spec: DurCiracSpec) -> np.ndarray:
    if not spec.is_normalized():
        raise ValueError(f"Dur-Cirac coefficients sum to {spec.total()!r}, not 1")
    n = spec.n_qubits
    rho = spec.lambda0_plus * projector(_dc_ket(n, 0, 1))
    rho = rho + spec.lambda0_minus * projector(_dc_ket(n, 0, -1))
    for j, lam in spec.lambdas.items():
        rho = rho + lam * (projector(_dc_ket(n, j, 1)) + projector(_dc_ket(n, j, -1)))
    return rho


def dur_spec(n: int, x: float) -> DurCiracSpec:
    """Coefficients of the x-family of Dur states.

    G_k^{+-} is Psi_j^{+-} for the single-bit index of qubit ``k < n``; for
    ``k = n`` it is the all-ones index up to a sign.
    """
    if n < 3:
        raise ValueError(f"Dur states need n >= 3, got {n}")
    _check_fraction(x)
    w = (1 - x) / (2 * n)
    lambdas = {1 << (n - 1 - k): w for k in range(1, n)}
    lambdas[(1 << (n - 1)) - 1] = w
    return DurCiracSpec(n, x, 0.0, lambdas)


def g_state(n: int, k: int, sign="+") -> np.ndarray:
    """(|u_k> +- |v_k>)/sqrt2 with u_k = |0..1_k..0> and v_k its complement."""
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    s = _sign(sign)
    u = 1 << (n - k)
    out = np.zeros(1 << n, dtype=complex)
    out[u] = 1 / SQ2
    out[((1 << n) - 1) ^ u] = s / SQ2
    return out


def dur_state(n: int, x: float) -> np.ndarray:
    """x |GHZ><GHZ| + (1-x)/(2n) sum_k (P_k + Pbar_k)."""
    if n < 3:
        raise ValueError(f"Dur states need n >= 3, got {n}")
    _check_fraction(x)
    rho = x * projector(ghz(n))
    full = (1 << n) - 1
    for k in range(1, n + 1):
        u = 1 << (n - k)
        rho[u, u] += (1 - x) / (2 * n)
        rho[full ^ u, full ^ u] += (1 - x) / (2 * n)
    return rho


def dur_state_g_mixture(n: int, x: float) -> np.ndarray:
    """Dur x-family rebuilt from the G_k^{+-} GHZ-like states."""
    _check_fraction(x)
    rho = x * projector(ghz(n))
    for k in range(1, n + 1):
        for s in "+-":
            rho = rho + (1 - x) / (2 * n) * projector(g_state(n, k, s))
    return rho


def llk_indices(n: int) -> list[int]:
    """J_n = {3, 6, ..., 3 * 2**(n-3)}."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    return [3 << m for m in range(n - 2)]


def llk_spec(n: int, x: float) -> DurCiracSpec:
    if n < 4:
        raise ValueError(f"LLK states need n >= 4, got {n}")
    _check_fraction(x)
    w = (1 - x) / (2 * (n - 2))
    return DurCiracSpec(n, x, 0.0, {j: w for j in llk_indices(n)})


def llk_state(n: int, x: float) -> np.ndarray:
    return dur_cirac(llk_spec(n, x))


def chi3_spec(x: float) -> DurCiracSpec:
    _check_fraction(x)
    w = (1 - x) / 4
    return DurCiracSpec(3, x, 0.0, {1: w, 3: w})


def chi3(x: float) -> np.ndarray:
    return dur_cirac(chi3_spec(x))


def upb_basis() -> list[np.ndarray]:
    """SHIFTS UPB: |000>, |1,+,->, |-,1,+>, |+,-,1>."""
    return [
        tensor(KET0, KET0, KET0),
        tensor(KET1, KET_PLUS, KET_MINUS),
        tensor(KET_MINUS, KET1, KET_PLUS),
        tensor(KET_PLUS, KET_MINUS, KET1),
    ]


def cyclic_shift(psi: np.ndarray) -> np.ndarray:
    """Move the state of party A to B, B to C and C to A."""
    n = int(np.log2(psi.shape[0]))
    t = psi.reshape((2,) * n)
    # new axis k holds old axis k-1
    return np.moveaxis(t, -1, 0).reshape(-1)


def upb_state() -> np.ndarray:
    """Normalized projector onto the complement of the SHIFTS UPB."""
    rho = np.eye(8, dtype=complex)
    for psi in upb_basis():
        rho = rho - projector(psi)
    return rho / 4


def upb_two_qubit_factors() -> list[np.ndarray]:
    """Two-qubit factors chi_i on parties AB of the separable decomposition."""
    return [
        np.array([0, 1, -1, 1], dtype=complex) / math.sqrt(3),
        np.array([3, 1, -1, 1], dtype=complex) / math.sqrt(12),
        np.array([0, 1, 2, 1], dtype=complex) / math.sqrt(6),
        np.array([0, 2, 1, -1], dtype=complex) / math.sqrt(6),
    ]


BB84 = (KET0, KET1, KET_PLUS, KET_MINUS)


def upb_phi_decomposition() -> list[np.ndarray]:
    """phi_i = chi_i x (|0>, |1>, |+>, |->)_i, each product across AB:C."""
    return [tensor(chi, b) for chi, b in zip(upb_two_qubit_factors(), BB84)]


def maximally_mixed(n: int) -> np.ndarray:
    return np.eye(1 << n, dtype=complex) / (1 << n)


def pauli_x_on(n: int, k: int) -> np.ndarray:
    return local_operator(SX, k, n)
