"""Brute-force simulation in the full 2^N spin Hilbert space.

Basis convention: basis index bit ``N-1-k`` holds site ``k`` (site 0 is the
most significant bit, i.e. the leftmost tensor factor) and a 0 bit means
spin up (sigma^z = +1). Spin up is a Jordan-Wigner particle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .chain import Model, SpinHamiltonianSpec

MAX_STATE_SITES = 14
MAX_DENSITY_SITES = 10
LINDBLAD_MAX_STEP = 0.005

_SX = sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex))
_SY = sp.csr_matrix(np.array([[0, -1j], [1j, 0]]))
_SZ = sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex))
_SP = sp.csr_matrix(np.array([[0, 1], [0, 0]], dtype=complex))  # |up><down|
_SM = sp.csr_matrix(np.array([[0, 0], [1, 0]], dtype=complex))
_ID = sp.identity(2, dtype=complex, format="csr")


def _check_state_size(N: int, limit: int = MAX_STATE_SITES):
    if N > limit:
        raise ValueError(f"N={N} exceeds the exact-engine limit of {limit} sites "
                         f"(2^{N} amplitudes); use the free-fermion engine")
    if N < 1:
        raise ValueError("need at least one site")


def site_bits(N: int) -> np.ndarray:
    """(2^N, N) array of spin-down indicators, column k for site k."""
    idx = np.arange(2 ** N)
    return (idx[:, None] >> (N - 1 - np.arange(N))[None, :]) & 1


def local_operator(N: int, ops: dict) -> sp.csr_matrix:
    """Tensor product with ``ops[k]`` on site k and identity elsewhere."""
    out = sp.identity(1, dtype=complex, format="csr")
    for k in range(N):
        out = sp.kron(out, ops.get(k, _ID), format="csr")
    return out


def build_spin_hamiltonian(spec: SpinHamiltonianSpec) -> sp.csr_matrix:
    """Sparse Hamiltonian (units of J) of an XX, double-quantum or XXZ model.

    Each unordered pair (n, m) contributes (A_nm/2)(XX + YY) for XX/XXZ and
    (A_nm/2)(XX - YY) for the double-quantum model.
    """
    N = spec.N
    _check_state_size(N)
    A = spec.coupling
    dim = 2 ** N
    idx = np.arange(dim)
    down = site_bits(N)
    rows, cols, vals = [], [], []
    diag = np.zeros(dim)
    for n in range(N):
        for m in range(n + 1, N):
            a = A[n, m]
            if a == 0:
                continue
            mask = (1 << (N - 1 - n)) | (1 << (N - 1 - m))
            differ = down[:, n] != down[:, m]
            sel = differ if spec.model in (Model.XX, Model.XXZ) else ~differ
            src = idx[sel]
            rows.append(src ^ mask)
            cols.append(src)
            vals.append(np.full(src.size, a))
    if spec.model is Model.XXZ:
        sz = 1 - 2 * down
        for n, d in enumerate(spec.bond_anisotropy()):
            diag += 0.5 * d * sz[:, n] * sz[:, n + 1]
    if spec.model is Model.DOUBLE_QUANTUM and spec.field != 0:
        diag -= spec.field * (1 - 2 * down).sum(axis=1)
    rows.append(idx)
    cols.append(idx)
    vals.append(diag)
    H = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(dim, dim)).tocsr()
    H.sum_duplicates()
    H.eliminate_zeros()
    return H.astype(complex)


def total_magnetization(N: int) -> sp.csr_matrix:
    return sp.diags((1 - 2 * site_bits(N)).sum(axis=1).astype(complex), format="csr")


def parity(N: int) -> sp.csr_matrix:
    """prod_k sigma^z_k."""
    return sp.diags(np.prod(1 - 2 * site_bits(N), axis=1).astype(complex), format="csr")


def jw_annihilator(N: int, n: int) -> sp.csr_matrix:
    """c_n = prod_{k<n}(-sigma^z_k) sigma^-_n, built from explicit Pauli products."""
    ops = {k: -_SZ for k in range(n)}
    ops[n] = _SM
    return local_operator(N, ops)


def initial_state(kind: str, N: int) -> np.ndarray:
    """Neel (up on sites 0, 2, ...), fully polarised (``fm``) or Bell-series state."""
    _check_state_size(N)
    kind = {"fm-dq": "fm"}.get(kind, kind)
    psi = np.zeros(2 ** N, dtype=complex)
    if kind == "neel":
        bits = [k % 2 for k in range(N)]
        psi[int("".join(map(str, bits)), 2)] = 1.0
    elif kind == "fm":
        psi[0] = 1.0
    elif kind == "bell-series":
        if N % 2:
            raise ValueError("Bell-series initial state needs an even number of sites")
        singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
        psi = np.ones(1, dtype=complex)
        for _ in range(N // 2):
            psi = np.kron(psi, singlet)
    else:
        raise ValueError(f"unknown initial state {kind!r}")
    return psi


def _check_hermitian(H):
    diff = H - H.conj().T
    err = abs(diff).max() if sp.issparse(diff) else np.abs(diff).max()
    if err > 1e-12:
        raise ValueError(f"Hamiltonian is not Hermitian (max deviation {err:.3g})")


def _components(H) -> np.ndarray:
    n, labels = connected_components(sp.csr_matrix(abs(H) > 0), directed=False)
    return labels


class ExactEvolver:
    """exp(-iHt) psi0 by dense diagonalisation of H on the subspace reachable from psi0."""

    def __init__(self, H, psi0: np.ndarray):
        H = sp.csr_matrix(H)
        _check_hermitian(H)
        psi0 = np.asarray(psi0, dtype=complex)
        if psi0.shape != (H.shape[0],):
            raise ValueError("state and Hamiltonian dimensions differ")
        labels = _components(H)
        support = np.flatnonzero(np.abs(psi0) > 0)
        self.subspace = np.flatnonzero(np.isin(labels, np.unique(labels[support])))
        Hs = H[self.subspace][:, self.subspace].toarray()
        self.energies, self.vectors = np.linalg.eigh(Hs)
        self.coeffs = self.vectors.conj().T @ psi0[self.subspace]
        self.dim = H.shape[0]

    def state(self, t: float) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[self.subspace] = self.vectors @ (np.exp(-1j * self.energies * t) * self.coeffs)
        return psi


def evolve_state(H, psi0: np.ndarray, t: float) -> np.ndarray:
    return ExactEvolver(H, psi0).state(t)


def reduced_density(state: np.ndarray, sites) -> np.ndarray:
    """Partial trace of a state vector or density matrix onto ``sites`` (in that order)."""
    sites = list(sites)
    state = np.asarray(state)
    N = int(round(math.log2(state.shape[0])))
    if len(set(sites)) != len(sites):
        raise ValueError("sites must be distinct")
    if any(not 0 <= s < N for s in sites):
        raise ValueError(f"site index outside chain of {N} sites")
    rest = [k for k in range(N) if k not in sites]
    k = len(sites)
    if state.ndim == 1:
        psi = np.transpose(state.reshape([2] * N), sites + rest).reshape(2 ** k, -1)
        return psi @ psi.conj().T
    rho = state.reshape([2] * (2 * N))
    rho = np.transpose(rho, sites + rest + [N + s for s in sites] + [N + r for r in rest])
    rho = rho.reshape(2 ** k, 2 ** (N - k), 2 ** k, 2 ** (N - k))
    return np.einsum("ajbj->ab", rho)


def entanglement_entropy(state: np.ndarray, block) -> float:
    """Von Neumann entropy in bits of a block of a pure state."""
    block = list(block)
    N = int(round(math.log2(state.shape[0])))
    rest = [k for k in range(N) if k not in block]
    psi = np.transpose(state.reshape([2] * N), block + rest).reshape(2 ** len(block), -1)
    p = np.linalg.svd(psi, compute_uv=False) ** 2
    p = p[p > 1e-16]
    return float(-np.sum(p * np.log2(p)))


def jw_correlations(psi: np.ndarray) -> np.ndarray:
    """<psi| c_n^dag c_m |psi> with explicit Jordan-Wigner string operators."""
    N = int(round(math.log2(psi.shape[0])))
    _check_state_size(N, MAX_DENSITY_SITES)
    phis = np.array([jw_annihilator(N, n) @ psi for n in range(N)])
    return phis.conj() @ phis.T


@dataclass
class LindbladResult:
    rho: np.ndarray
    t: float
    steps: int
    richardson_error: float | None


class _BlockLindblad:
    """rho' = -i[H, rho] + gamma sum_i (Z_i rho Z_i - rho), integrated block by block.

    Blocks are pairs of H-invariant sectors; pure dephasing acts elementwise as
    -2 gamma * (Hamming distance of the two basis states), so sector blocks
    never mix.
    """

    def __init__(self, H, rho0: np.ndarray, gamma: float):
        H = sp.csr_matrix(H)
        _check_hermitian(H)
        rho0 = np.asarray(rho0, dtype=complex)
        dim = H.shape[0]
        N = int(round(math.log2(dim)))
        _check_state_size(N, MAX_DENSITY_SITES)
        if rho0.shape != (dim, dim):
            raise ValueError("density matrix and Hamiltonian dimensions differ")
        labels = _components(H)
        sectors = [np.flatnonzero(labels == c) for c in np.unique(labels)]
        bits = np.arange(dim)
        self.dim = dim
        self.blocks = []
        for P in sectors:
            for Q in sectors:
                block = rho0[np.ix_(P, Q)]
                if not np.any(block):
                    continue
                ham = _popcount(bits[P][:, None] ^ bits[Q][None, :], N)
                self.blocks.append((P, Q, H[P][:, P].tocsr(), H[Q][:, Q].T.tocsr(),
                                    -2.0 * gamma * ham, block.copy()))

    @staticmethod
    def _rhs(HP, HQt, damp, r):
        # HQt is the transpose of the sparse Q-sector Hamiltonian
        return -1j * (HP @ r - (HQt @ r.T).T) + damp * r

    def advance(self, states, dt: float, nsteps: int):
        out = []
        for (P, Q, HP, HQ, damp, _), r in zip(self.blocks, states):
            for _ in range(nsteps):
                k1 = self._rhs(HP, HQ, damp, r)
                k2 = self._rhs(HP, HQ, damp, r + 0.5 * dt * k1)
                k3 = self._rhs(HP, HQ, damp, r + 0.5 * dt * k2)
                k4 = self._rhs(HP, HQ, damp, r + dt * k3)
                r = r + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            out.append(r)
        return out

    def initial(self):
        return [b[-1] for b in self.blocks]

    def assemble(self, states) -> np.ndarray:
        rho = np.zeros((self.dim, self.dim), dtype=complex)
        for (P, Q, *_), r in zip(self.blocks, states):
            rho[np.ix_(P, Q)] = r
        return rho


def _popcount(x: np.ndarray, nbits: int) -> np.ndarray:
    return sum((x >> k) & 1 for k in range(nbits)).astype(float)


def _n_steps(t: float, steps: int | None) -> int:
    need = max(1, math.ceil(abs(t) / LINDBLAD_MAX_STEP - 1e-9))
    return need if steps is None else max(int(steps), need)


def evolve_lindblad(H, rho0: np.ndarray, gamma: float, t: float, steps: int | None = None,
                    check: bool = True, tol: float = 1e-6) -> LindbladResult:
    """Dephasing master equation by fixed-step RK4 (step at most 0.005/J).

    With ``check`` the run is repeated at half the step and the Richardson
    estimate of the error must stay below ``tol``.
    """
    if gamma < 0:
        raise ValueError("dephasing rate must be non-negative")
    if t < 0:
        raise ValueError("time must be non-negative")
    model = _BlockLindblad(H, rho0, gamma)
    n = _n_steps(t, steps)
    coarse = model.advance(model.initial(), t / n, n)
    err = None
    if check:
        fine = model.advance(model.initial(), t / (2 * n), 2 * n)
        err = max((np.abs(a - b).max() for a, b in zip(coarse, fine)), default=0.0) * 16 / 15
        if err > tol:
            raise RuntimeError(f"RK4 Richardson error {err:.3g} exceeds tolerance {tol:.3g}; "
                               f"increase steps (used {n})")
        coarse = fine
    return LindbladResult(model.assemble(coarse), t, n, err)


def lindblad_trajectory(H, rho0: np.ndarray, gamma: float, times, observe, steps_per_unit: int | None = None):
    """Evaluate ``observe(rho)`` at increasing ``times`` along one RK4 run."""
    if gamma < 0:
        raise ValueError("dephasing rate must be non-negative")
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0) or times[0] < 0:
        raise ValueError("times must be non-negative and increasing")
    h = LINDBLAD_MAX_STEP if steps_per_unit is None else min(LINDBLAD_MAX_STEP, 1.0 / steps_per_unit)
    model = _BlockLindblad(H, rho0, gamma)
    states = model.initial()
    t_now = 0.0
    out = []
    for t in times:
        span = t - t_now
        if span > 0:
            n = max(1, math.ceil(span / h - 1e-9))
            states = model.advance(states, span / n, n)
            t_now = t
        out.append(observe(model.assemble(states)))
    return out
