"""End-pair two-spin states, fully entangled fraction and nested Bell targets."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ProfileKind, build_profile, hopping_matrix, spin_hamiltonian
from .fermions import CorrelationMatrix, InitialStateSpec, InitKind

VALIDITY_TOL = 1e-9

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_X = _PAULI[0]


@dataclass(frozen=True)
class TwoSpinXState:
    """X-shaped two-qubit state in the basis (uu, ud, du, dd).

    ``flip_second`` marks a state stored in a frame where the second spin was
    rotated by sigma^x; the lab-frame matrix undoes it. Local rotations do not
    change the fully entangled fraction.
    """

    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho23: complex
    flip_second: bool = False

    def __post_init__(self):
        pops = np.array([self.rho11, self.rho22, self.rho33, self.rho44])
        if pops.min() < -VALIDITY_TOL or abs(pops.sum() - 1) > VALIDITY_TOL:
            raise ValueError(f"populations {pops} do not form a probability distribution")
        if abs(self.rho23) ** 2 > self.rho22 * self.rho33 + VALIDITY_TOL:
            raise ValueError("coherence violates positivity |rho23|^2 <= rho22 rho33")

    def matrix(self, lab_frame: bool = True) -> np.ndarray:
        rho = np.diag([self.rho11, self.rho22, self.rho33, self.rho44]).astype(complex)
        rho[1, 2] = self.rho23
        rho[2, 1] = np.conj(self.rho23)
        if lab_frame and self.flip_second:
            U = np.kron(np.eye(2), _X)
            rho = U @ rho @ U
        return rho


def end_pair_state(C: CorrelationMatrix, init: InitialStateSpec) -> TwoSpinXState:
    """Reduced state of the two chain ends from the Gaussian correlations."""
    Cm = C.C
    N = Cm.shape[0]
    a = float(Cm[0, 0].real)
    b = float(Cm[N - 1, N - 1].real)
    g = complex(Cm[0, N - 1])
    g2 = abs(g) ** 2
    if init.kind is InitKind.BELL_SERIES:
        if C.f is None:
            raise ValueError("Bell-series coherence needs the propagator stored with C")
        f = C.f
        delta = complex(f[0].conj() @ init.string_table.T @ f[N - 1])
        rho23 = np.conj(delta)
    else:
        rho23 = (-1) ** (init.M + 1) * np.conj(g)
    return TwoSpinXState(
        a * b - g2,
        a * (1 - b) + g2,
        b * (1 - a) + g2,
        (1 - a) * (1 - b) - g2,
        complex(rho23),
        flip_second=init.kind is InitKind.FM_DOUBLE_QUANTUM and N % 2 == 0,
    )


def fully_entangled_fraction(rho: TwoSpinXState) -> float:
    return max((rho.rho11 + rho.rho44) / 2, (rho.rho22 + rho.rho33) / 2 + abs(rho.rho23))


def fef_neel_branches(alpha: float, beta: float, gamma_abs: float) -> float:
    """The same quantity written in terms of the end correlations."""
    return max((alpha * beta + (alpha - 1) * (beta - 1)) / 2 - gamma_abs ** 2,
               (alpha + beta) / 2 - alpha * beta + gamma_abs * (1 + gamma_abs))


def correlation_tensor(rho: np.ndarray) -> np.ndarray:
    """T_ij = Tr[rho sigma_i x sigma_j]."""
    return np.array([[np.trace(rho @ np.kron(si, sj)).real for sj in _PAULI] for si in _PAULI])


def fully_entangled_fraction_matrix(rho: np.ndarray) -> float:
    """Fully entangled fraction of an arbitrary two-qubit density matrix.

    Maximally entangled states have correlation tensors that are improper
    rotations, so F = (1 + s1 + s2 - sign(det T) s3) / 4 with s the singular
    values of T.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("expected a 4x4 density matrix")
    if not np.allclose(rho, rho.conj().T, atol=1e-9) or abs(np.trace(rho) - 1) > 1e-8:
        raise ValueError("not a valid density matrix")
    if np.linalg.eigvalsh(rho).min() < -1e-7:
        raise ValueError("density matrix is not positive semidefinite")
    T = correlation_tensor(rho)
    s = np.linalg.svd(T, compute_uv=False)
    return float((1 + s[0] + s[1] - np.sign(np.linalg.det(T)) * s[2]) / 4)


def end_to_end_F_closed_form(amplitude: float) -> float:
    """(1 + |f_N1(2t)|)^2 / 4."""
    if not -1e-12 <= amplitude <= 1 + 1e-12:
        raise ValueError(f"transfer amplitude must lie in [0, 1], got {amplitude}")
    return (1 + amplitude) ** 2 / 4


def is_purifiable(F: float) -> bool:
    return F > 0.5


def pseudo_pure_F(zeta: float, F_pure: float = 1.0) -> float:
    """FEF after mixing with the identity: zeta/4 + (1 - zeta) F_pure."""
    if not 0 <= zeta <= 1:
        raise ValueError(f"initialisation error zeta must lie in [0, 1], got {zeta}")
    return zeta / 4 + (1 - zeta) * F_pure


@dataclass(frozen=True)
class NestedBellTarget:
    N: int
    pairs: tuple
    phases: tuple
    center: int | None

    def state(self) -> np.ndarray:
        """Spin-basis state vector (site 0 most significant, 0 bit = up)."""
        N = self.N
        if N > 20:
            raise ValueError("state vector too large")
        if N % 2:
            pair = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
        else:
            pair = np.array([0, 1, -1j, 0]) / np.sqrt(2)
        # build in the order (pair0a, pair0b, pair1a, ..., center) then permute
        order = [s for p in self.pairs for s in p]
        psi = np.ones(1, dtype=complex)
        for _ in self.pairs:
            psi = np.kron(psi, pair)
        if self.center is not None:
            psi = np.kron(psi, np.array([1, 0], dtype=complex))
            order.append(self.center)
        perm = np.argsort(order)
        return np.transpose(psi.reshape([2] * N), perm).reshape(-1)


def nested_bell_target(N: int) -> NestedBellTarget:
    """Mirror pairs (k, N-1-k): (ud - i du)/sqrt2 for even N, (ud + du)/sqrt2
    around a central up spin for odd N."""
    if N < 2:
        raise ValueError("need at least two sites")
    pairs = tuple((k, N - 1 - k) for k in range(N // 2))
    # fermionic phases e^{i a_k} = i^(N-1) (-1)^k for the 0-based pair index k
    phases = tuple(complex(1j ** (N - 1) * (-1) ** k) for k in range(N // 2))
    return NestedBellTarget(N, pairs, phases, N // 2 if N % 2 else None)


def bell_generation_fidelity(N: int) -> float:
    """|<Xi| exp(-i H t*/2) |Neel>|^2 on the fully engineered chain."""
    from . import exact

    if N > exact.MAX_STATE_SITES:
        raise ValueError(f"N={N} exceeds the exact-engine limit of {exact.MAX_STATE_SITES}")
    profile = build_profile(ProfileKind.FULLY_ENGINEERED, N)
    H = exact.build_spin_hamiltonian(spin_hamiltonian("xx", hopping_matrix(profile)))
    psi = exact.evolve_state(H, exact.initial_state("neel", N), np.pi * N / 4)
    return float(abs(np.vdot(nested_bell_target(N).state(), psi)) ** 2)
