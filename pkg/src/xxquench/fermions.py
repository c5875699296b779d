"""Free-fermion dynamics of quadratic XX chains.

Sites are 0-based in this module: site ``k`` here is site ``k + 1`` in the
usual physics labelling, so the Neel state has particles (spin up) on even
``k``. The propagator is ``f(t) = exp(-i t A)`` and correlation matrices are
``C_nm(t) = <c_n^dag(t) c_m(t)>``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .chain import HoppingMatrix, sign_matrix

EIG_CLAMP_TOL = 1e-9


class InitKind(str, enum.Enum):
    NEEL = "neel"
    FM_DOUBLE_QUANTUM = "fm-dq"
    BELL_SERIES = "bell-series"


@dataclass(frozen=True)
class Spectrum:
    """Orthogonal eigenbasis ``g`` (rows are eigenvectors) and ascending energies."""

    g: np.ndarray
    E: np.ndarray
    quadratic: bool = True

    @property
    def N(self) -> int:
        return len(self.E)

    def amplitudes(self, t, rows=None, cols=None) -> np.ndarray:
        """Entries of f(t) for the given rows/cols, vectorised over ``t``.

        Returns an array of shape ``t.shape + (len(rows), len(cols))``.
        """
        g = self.g
        gr = g if rows is None else g[:, rows]
        gc = g if cols is None else g[:, cols]
        phase = np.exp(-1j * np.multiply.outer(np.asarray(t, dtype=float), self.E))
        return np.einsum("mk,...m,ml->...kl", gr, phase, gc)


@dataclass(frozen=True)
class Propagator:
    f: np.ndarray
    t: float

    @property
    def N(self) -> int:
        return self.f.shape[0]


@dataclass(frozen=True)
class InitialStateSpec:
    """Initial Gaussian state: particle number ``M``, ``C(0)`` and, for the
    Bell series, the table of ``<c_l c_m^dag prod_i(-sigma^z_i)>`` values."""

    kind: InitKind
    N: int
    M: int
    C0: np.ndarray
    string_table: np.ndarray | None = None


@dataclass(frozen=True)
class CorrelationMatrix:
    C: np.ndarray
    init: InitKind
    t: float
    f: np.ndarray | None = None

    @property
    def N(self) -> int:
        return self.C.shape[0]


def diagonalize(hopping: HoppingMatrix | np.ndarray) -> Spectrum:
    if isinstance(hopping, HoppingMatrix):
        A, quadratic = hopping.A, hopping.tridiagonal
    else:
        A = np.asarray(hopping, dtype=float)
        quadratic = bool(np.all(np.triu(A, 2) == 0))
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("hopping matrix must be square")
    if not np.allclose(A, A.T, rtol=0, atol=1e-14):
        raise ValueError("hopping matrix must be symmetric")
    if quadratic:
        E, v = scipy.linalg.eigh_tridiagonal(np.diag(A).copy(), np.diag(A, 1).copy())
    else:
        E, v = np.linalg.eigh(A)
    return Spectrum(v.T.copy(), E, quadratic)


def propagator(spec: Spectrum, t: float) -> Propagator:
    return Propagator(spec.amplitudes(t), float(t))


def initial_state_spec(kind, N: int) -> InitialStateSpec:
    """Correlation data of the Neel, polarised (double-quantum) or Bell-series state.

    The polarised state evolving under the double-quantum Hamiltonian is the
    Neel evolution followed by sigma^x on every second site, so it shares the
    Neel correlation matrix in that rotated frame.
    """
    kind = InitKind(kind)
    if N < 2:
        raise ValueError("need at least two sites")
    if kind in (InitKind.NEEL, InitKind.FM_DOUBLE_QUANTUM):
        C0 = (np.eye(N) + sign_matrix(N)) / 2
        return InitialStateSpec(kind, N, (N + 1) // 2, C0)
    if N % 2:
        raise ValueError("Bell-series initial state needs an even number of sites")
    C0 = np.eye(N) / 2
    table = np.eye(N) / 2
    for l in range(0, N, 2):
        C0[l, l + 1] = C0[l + 1, l] = -0.5
        table[l, l + 1] = table[l + 1, l] = 0.5
    table *= (-1) ** (N // 2)
    return InitialStateSpec(kind, N, N // 2, C0, table)


def quench_correlations(spec: Spectrum, init: InitialStateSpec, t: float) -> CorrelationMatrix:
    """Wick-evolved ``C(t) = f*(t) C(0) f(t)^T``."""
    if not spec.quadratic:
        raise ValueError("couplings beyond nearest neighbours are not quadratic; use the exact engine")
    if spec.N != init.N:
        raise ValueError(f"spectrum has {spec.N} sites but initial state has {init.N}")
    f = spec.amplitudes(t)
    C = f.conj() @ init.C0 @ f.T
    return CorrelationMatrix(C, init.kind, float(t), f)


def neel_correlations_via_transfer(spec: Spectrum, t: float) -> np.ndarray:
    """Neel correlations from single-particle amplitudes at twice the time:
    ``C_nm(t) = [delta_nm + (-1)^n f_nm(2t)] / 2`` (0-based ``n``)."""
    f2 = spec.amplitudes(2 * t)
    return (np.eye(spec.N) + sign_matrix(spec.N) @ f2) / 2


def _binary_entropy_bits(lam: np.ndarray) -> float:
    lam = lam[(lam > 0) & (lam < 1)]
    return float(-np.sum(lam * np.log2(lam) + (1 - lam) * np.log2(1 - lam)))


def block_entropy(C: CorrelationMatrix | np.ndarray, block) -> float:
    """Von Neumann entropy (bits) of a block of sites of a Gaussian state."""
    Cm = C.C if isinstance(C, CorrelationMatrix) else np.asarray(C)
    idx = np.asarray(list(block), dtype=int)
    if idx.size == 0:
        raise ValueError("block must contain at least one site")
    if idx.min() < 0 or idx.max() >= Cm.shape[0]:
        raise ValueError("block lies outside the chain")
    lam = np.linalg.eigvalsh(Cm[np.ix_(idx, idx)])
    if lam.min() < -EIG_CLAMP_TOL or lam.max() > 1 + EIG_CLAMP_TOL:
        raise ValueError(f"correlation eigenvalues {lam.min():.3g}..{lam.max():.3g} outside [0, 1]")
    return _binary_entropy_bits(np.clip(lam, 0.0, 1.0))


def multiparticle_amplitude(f: Propagator | np.ndarray, targets, sources) -> complex:
    """Amplitude <targets| e^{-iHt} |sources> for sets of occupied sites."""
    fm = f.f if isinstance(f, Propagator) else np.asarray(f)
    targets = list(targets)
    sources = list(sources)
    if len(targets) != len(sources):
        raise ValueError("target and source sets must have equal size")
    for s in (targets, sources):
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ValueError("site sets must be strictly increasing")
    if not targets:
        return 1.0 + 0j
    return complex(np.linalg.det(fm[np.ix_(targets, sources)]))


def wigner_small_d(two_j: int, beta: float) -> np.ndarray:
    """Wigner d^j(beta) for j = two_j/2, rows/cols ordered m = j, j-1, ..., -j.

    Built up one half-spin at a time from d^(1/2) (symmetric tensor powers).
    Each step averages the row and column expansions so every weight is
    bounded by one, which keeps the recursion stable for large j.
    """
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    d = np.ones((1, 1))
    for n in range(1, two_j + 1):
        a = np.arange(n + 1)[:, None]
        b = np.arange(n + 1)[None, :]
        pad = np.zeros((n + 2, n + 2))
        pad[1:n + 1, 1:n + 1] = d  # pad[a + 1, b + 1] = d^{n-1}[a, b]
        same, up = pad[1:, 1:], pad[:-1, 1:]
        left, diag = pad[1:, :-1], pad[:-1, :-1]
        d = (c * np.sqrt((n - a) * (n - b)) * same + s * np.sqrt(a * (n - b)) * up
             - s * np.sqrt((n - a) * b) * left + c * np.sqrt(a * b) * diag) / n
    return d


def wigner_D(two_j: int, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Wigner D^j(alpha, beta, gamma), rows/cols ordered m = j, ..., -j."""
    m = two_j / 2 - np.arange(two_j + 1)
    return np.exp(-1j * m * alpha)[:, None] * wigner_small_d(two_j, beta) * np.exp(-1j * m * gamma)[None, :]


def wigner_d_propagator_matrix(N: int, t: float) -> np.ndarray:
    """f(t) of the fully engineered chain as a rotation of a spin (N-1)/2.

    Site k (0-based) carries magnetic number m = -s + k, so the D matrix,
    stored with descending m, is read with both indices reversed.
    """
    if N < 1:
        raise ValueError("need at least one site")
    D = wigner_D(N - 1, np.pi / 2, -2 * t / N, -np.pi / 2)
    return D[::-1, ::-1]


def wigner_d_propagator(N: int, t: float, target: int, source: int) -> complex:
    if not (0 <= target < N and 0 <= source < N):
        raise ValueError("site index outside the chain")
    return complex(wigner_d_propagator_matrix(N, t)[target, source])
