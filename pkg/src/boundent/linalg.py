"""Dense linear algebra over qubit registers.

Kets are 1-d complex arrays of length ``2**n`` and operators are
``2**n x 2**n`` complex arrays. Basis order is big-endian: qubit 1 is the
most significant bit of the basis index, so ``|q1 q2 ... qN>`` sits at
index ``q1*2**(N-1) + ... + qN``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
MAX_QUBITS = 10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


class InvalidStateError(ValueError):
    """Raised when an array violates a density-matrix invariant.

    ``invariant`` names the violated property (``"shape"``, ``"hermiticity"``,
    ``"trace"`` or ``"psd"``).
    """

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"{invariant}: {detail}")
        self.invariant = invariant


def n_qubits_of(arr: np.ndarray) -> int:
    """Number of qubits of a ket or square operator; raises on bad shapes."""
    dim = arr.shape[0]
    if arr.ndim not in (1, 2) or (arr.ndim == 2 and arr.shape[1] != dim):
        raise InvalidStateError("shape", f"expected a vector or square matrix, got {arr.shape}")
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise InvalidStateError("shape", f"dimension {dim} is not a power of two")
    return n


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of kets or operators, left factor most significant."""
    return reduce(np.kron, factors)


def ket(bits: str) -> np.ndarray:
    """Computational-basis ket from a bit string, e.g. ``ket("0110")``."""
    out = np.zeros(1 << len(bits), dtype=complex)
    out[int(bits, 2)] = 1.0
    return out


def projector(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def local_operator(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Embed a single-qubit operator acting on ``qubit`` (1-based) into ``n`` qubits."""
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} out of range 1..{n}")
    return tensor(*(op if k == qubit else I2 for k in range(1, n + 1)))


def apply_local(psi: np.ndarray, op: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a 2x2 operator to one qubit of a ket without forming the full matrix."""
    n = n_qubits_of(psi)
    if not 1 <= qubit <= n:
        raise ValueError(f"qubit {qubit} out of range 1..{n}")
    t = psi.reshape((2,) * n)
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [qubit - 1])), 0, qubit - 1)
    return t.reshape(-1)


@dataclass(frozen=True)
class Bipartition:
    """Split of qubits ``1..n`` into two non-empty groups.

    ``mask`` has bit ``k-1`` set when qubit ``k`` belongs to group A. The
    canonical form keeps qubit ``n`` in group B, so a cut and its complement
    compare equal after :meth:`from_qubits`.
    """

    n_qubits: int
    mask: int

    def __post_init__(self):
        full = (1 << self.n_qubits) - 1
        if self.n_qubits < 2:
            raise ValueError("a bipartition needs at least two qubits")
        if self.mask <= 0 or self.mask >= full:
            raise ValueError(f"group A must be a non-empty proper subset (mask={self.mask})")
        if self.mask >> (self.n_qubits - 1) & 1:
            object.__setattr__(self, "mask", full ^ self.mask)

    @classmethod
    def from_qubits(cls, n_qubits: int, group_a: Iterable[int]) -> "Bipartition":
        mask = 0
        for q in group_a:
            if not 1 <= q <= n_qubits:
                raise ValueError(f"qubit {q} out of range 1..{n_qubits}")
            mask |= 1 << (q - 1)
        return cls(n_qubits, mask)

    @classmethod
    def from_dc_index(cls, n_qubits: int, j: int) -> "Bipartition":
        """The cut I_j: qubits ``k`` with binary digit ``j_k = 1`` (j_1 most significant)."""
        if not 1 <= j <= (1 << (n_qubits - 1)) - 1:
            raise ValueError(f"j={j} out of range 1..{(1 << (n_qubits - 1)) - 1}")
        return cls.from_qubits(n_qubits, dc_index_qubits(n_qubits, j))

    @property
    def group_a(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.n_qubits + 1) if self.mask >> (k - 1) & 1)

    @property
    def group_b(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.n_qubits + 1) if not self.mask >> (k - 1) & 1)

    @property
    def dc_index(self) -> int:
        """Inverse of :meth:`from_dc_index`."""
        n = self.n_qubits
        return sum(1 << (n - 1 - k) for k in self.group_a)

    def separates(self, k: int, l: int) -> bool:
        return (self.mask >> (k - 1) & 1) != (self.mask >> (l - 1) & 1)

    def __str__(self) -> str:
        a = ",".join(map(str, self.group_a))
        b = ",".join(map(str, self.group_b))
        return f"{{{a}}}:{{{b}}}"


def dc_index_qubits(n_qubits: int, j: int) -> tuple[int, ...]:
    return tuple(k for k in range(1, n_qubits) if j >> (n_qubits - 1 - k) & 1)


def all_bipartitions(n_qubits: int) -> list[Bipartition]:
    """Every canonical bipartition, ordered by group-A size then lexicographically."""
    cuts = []
    for size in range(1, n_qubits):
        for group in itertools.combinations(range(1, n_qubits + 1), size):
            if n_qubits in group:
                continue
            cuts.append(Bipartition.from_qubits(n_qubits, group))
    return cuts


def partial_transpose(rho: np.ndarray, cut: Bipartition) -> np.ndarray:
    """Transpose the indices of the qubits in ``cut.group_a``."""
    n = n_qubits_of(rho)
    if n != cut.n_qubits:
        raise ValueError(f"operator has {n} qubits, cut has {cut.n_qubits}")
    t = rho.reshape((2,) * (2 * n))
    perm = list(range(2 * n))
    for k in cut.group_a:
        perm[k - 1], perm[n + k - 1] = perm[n + k - 1], perm[k - 1]
    return t.transpose(perm).reshape(rho.shape)


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced operator on the qubits in ``keep`` (1-based, kept in ascending order)."""
    n = n_qubits_of(rho)
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    if keep[0] < 1 or keep[-1] > n:
        raise ValueError(f"keep {keep} out of range 1..{n}")
    traced = [k for k in range(1, n + 1) if k not in keep]
    t = rho.reshape((2,) * (2 * n))
    # trace the highest qubit first so earlier axis numbers stay valid
    for k in reversed(traced):
        m = t.ndim // 2
        t = np.trace(t, axis1=k - 1, axis2=m + k - 1)
    d = 1 << len(keep)
    return t.reshape(d, d)


def hermitian_spectrum(op: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian operator."""
    op = np.asarray(op)
    dev = np.max(np.abs(op - op.conj().T)) if op.size else 0.0
    if dev > tol:
        raise ValueError(f"operator is not Hermitian (max deviation {dev:.3e})")
    return np.linalg.eigvalsh(op)


def check_density(rho: np.ndarray, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Validate a density matrix; return it unchanged or raise :class:`InvalidStateError`."""
    rho = np.asarray(rho, dtype=complex)
    n = n_qubits_of(rho)
    if rho.ndim != 2:
        raise InvalidStateError("shape", "density matrix must be two-dimensional")
    if n > MAX_QUBITS:
        raise InvalidStateError("shape", f"{n} qubits exceeds the supported maximum {MAX_QUBITS}")
    dev = np.max(np.abs(rho - rho.conj().T))
    if dev > HERMITIAN_TOL:
        raise InvalidStateError("hermiticity", f"max |rho - rho^dagger| = {dev:.3e}")
    tr = np.trace(rho).real
    if abs(tr - 1) > TRACE_TOL:
        raise InvalidStateError("trace", f"trace {tr!r} differs from 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -psd_tol:
        raise InvalidStateError("psd", f"minimum eigenvalue {lo:.3e}")
    return rho


def trace_norm(op: np.ndarray) -> float:
    return float(np.sum(np.abs(hermitian_spectrum(op))))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return 0.5 * trace_norm(a - b)


def overlap(psi: np.ndarray, rho: np.ndarray) -> float:
    """Expectation <psi|rho|psi> (real part)."""
    if psi.shape[0] != rho.shape[0]:
        raise ValueError(f"dimension mismatch {psi.shape[0]} vs {rho.shape[0]}")
    return float(np.vdot(psi, rho @ psi).real)


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.vdot(rho, rho)))


def product_factors(psi: np.ndarray, tol: float = 1e-10) -> list[np.ndarray]:
    """Split a fully-product ket into normalized single-qubit factors.

    Factors carry no particular global phase; their tensor product equals
    ``psi`` up to a phase and the norm of ``psi``. Raises ``ValueError`` if
    ``psi`` is entangled across any qubit.
    """
    n = n_qubits_of(psi)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("zero vector has no product decomposition")
    rest = psi / norm
    factors = []
    for k in range(n - 1):
        m = rest.reshape(2, -1)
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        if s[1] > tol:
            raise ValueError(f"ket is entangled across qubit {k + 1} (second singular value {s[1]:.3e})")
        factors.append(u[:, 0])
        rest = s[0] * vh[0]
    factors.append(rest / np.linalg.norm(rest))
    return factors
