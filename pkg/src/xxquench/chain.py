"""Coupling profiles, hopping matrices and spin-Hamiltonian specifications.

All energies are in units of the coupling scale J and all times in units of
1/J. A hopping matrix ``A`` is the single-particle generator of the
Jordan-Wigner fermion Hamiltonian ``H = sum_nm A_nm c_n^dag c_m``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class ProfileKind(str, enum.Enum):
    UNIFORM = "uniform"
    FULLY_ENGINEERED = "pst"
    MINIMALLY_ENGINEERED = "minimal"


class Model(str, enum.Enum):
    XX = "xx"
    DOUBLE_QUANTUM = "dq"
    XXZ = "xxz"


class NoiseVariant(str, enum.Enum):
    NMR_FILTER = "nmr"
    ION_LONG_RANGE = "ion"
    DEPHASING = "dephasing"
    XXZ_ANISOTROPY = "xxz"


@dataclass(frozen=True)
class CouplingProfile:
    kind: ProfileKind
    N: int
    j: np.ndarray
    boundary: float | None = None

    def __post_init__(self):
        j = np.asarray(self.j, dtype=float)
        j.setflags(write=False)
        object.__setattr__(self, "j", j)
        if self.N < 2:
            raise ValueError(f"need at least two sites, got N={self.N}")
        if j.shape != (self.N - 1,):
            raise ValueError(f"expected {self.N - 1} couplings, got shape {j.shape}")
        if np.any(j <= 0):
            raise ValueError("couplings must be strictly positive")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "N": self.N,
            "j": self.j.tolist(),
            "boundary": self.boundary,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CouplingProfile":
        return cls(ProfileKind(d["kind"]), int(d["N"]), np.asarray(d["j"]), d.get("boundary"))


@dataclass(frozen=True)
class HoppingMatrix:
    A: np.ndarray
    tridiagonal: bool

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("hopping matrix must be square")
        if not np.allclose(A, A.T, rtol=0, atol=1e-14):
            raise ValueError("hopping matrix must be symmetric")
        if np.any(np.diag(A) != 0):
            raise ValueError("hopping matrix must have zero diagonal")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def N(self) -> int:
        return self.A.shape[0]

    def to_dict(self) -> dict:
        return {"N": self.N, "tridiagonal": self.tridiagonal, "A": self.A.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "HoppingMatrix":
        return cls(np.asarray(d["A"], dtype=float), bool(d["tridiagonal"]))


@dataclass(frozen=True)
class SpinHamiltonianSpec:
    """Spin model on the sites of ``coupling`` (a symmetric real matrix).

    ``anisotropy`` is either a scalar or a per-bond vector of length N-1 and
    multiplies ``sigma^z sigma^z`` on nearest neighbours with the same J/2
    prefactor as the hopping terms.
    """

    model: Model
    coupling: np.ndarray
    anisotropy: float | np.ndarray = 0.0
    field: float = 0.0

    def __post_init__(self):
        A = np.array(self.coupling, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or not np.allclose(A, A.T, atol=1e-14):
            raise ValueError("coupling matrix must be square and symmetric")
        A.setflags(write=False)
        object.__setattr__(self, "coupling", A)
        if self.model is not Model.XXZ and np.any(np.asarray(self.anisotropy) != 0):
            raise ValueError("anisotropy is only defined for the XXZ model")
        if self.model is not Model.DOUBLE_QUANTUM and self.field != 0:
            raise ValueError("a magnetic field is only defined for the double-quantum model")

    @property
    def N(self) -> int:
        return self.coupling.shape[0]

    def bond_anisotropy(self) -> np.ndarray:
        d = np.broadcast_to(np.asarray(self.anisotropy, dtype=float), (self.N - 1,))
        return np.array(d)


@dataclass(frozen=True)
class NoiseConfig:
    variant: NoiseVariant
    eps: float = 0.0
    two_chain: bool = True
    interchain_spacing: float = 3.0
    seed: int = 0
    gamma: float = 0.0
    jz: float = 0.0

    def __post_init__(self):
        if self.eps < 0:
            raise ValueError("error strength eps must be non-negative")
        if self.gamma < 0:
            raise ValueError("dephasing rate gamma must be non-negative")
        if self.interchain_spacing <= 0:
            raise ValueError("interchain spacing must be positive")

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "eps": self.eps,
            "two_chain": self.two_chain,
            "interchain_spacing": self.interchain_spacing,
            "seed": self.seed,
            "gamma": self.gamma,
            "jz": self.jz,
        }


def build_profile(kind, N: int, boundary: float | None = None) -> CouplingProfile:
    """Coupling profile of the given kind on ``N`` sites.

    ``boundary`` is the end coupling j' of the minimally engineered chain
    and must be omitted for the other kinds.
    """
    kind = ProfileKind(kind)
    if N < 2:
        raise ValueError(f"need at least two sites, got N={N}")
    if kind is ProfileKind.MINIMALLY_ENGINEERED:
        if boundary is None:
            raise ValueError("minimally engineered profile requires a boundary coupling")
        if not 0 < boundary <= 1:
            raise ValueError(f"boundary coupling must lie in (0, 1], got {boundary}")
    elif boundary is not None:
        raise ValueError(f"boundary coupling is not a parameter of the {kind.value} profile")

    n = np.arange(1, N)
    if kind is ProfileKind.UNIFORM:
        j = np.full(N - 1, 0.5)
    elif kind is ProfileKind.FULLY_ENGINEERED:
        j = np.sqrt(n * (N - n)) / N
    else:
        j = np.full(N - 1, 0.5)
        j[0] = j[-1] = boundary
    return CouplingProfile(kind, N, j, boundary)


def hopping_matrix(profile: CouplingProfile) -> HoppingMatrix:
    A = np.diag(profile.j, 1)
    return HoppingMatrix(A + A.T, tridiagonal=True)


def sign_matrix(N: int) -> np.ndarray:
    """diag((-1)^(n+1)) for sites n = 1..N."""
    return np.diag((-1.0) ** np.arange(N))


def chain_positions(N: int, two_chain: bool, spacing: float = 3.0) -> np.ndarray:
    """Site coordinates with unit intrachain spacing.

    The second chain, if present, runs parallel to the first at
    perpendicular distance ``spacing`` with sites aligned one to one.
    """
    x = np.arange(N, dtype=float)
    pos = np.stack([x, np.zeros(N)], axis=1)
    if two_chain:
        pos = np.concatenate([pos, np.stack([x, np.full(N, float(spacing))], axis=1)])
    return pos


def dipolar_amplitudes(positions: np.ndarray) -> np.ndarray:
    """1/d^3 between all pairs of sites, zero on the diagonal."""
    d = np.linalg.norm(positions[:, None, :] - positions[None, :, :], axis=-1)
    b = np.zeros_like(d)
    off = ~np.eye(len(d), dtype=bool)
    b[off] = d[off] ** -3.0
    return b


def nmr_perturbed_matrix(profile: CouplingProfile, config: NoiseConfig,
                         rng: np.random.Generator | None = None) -> HoppingMatrix:
    """Clean couplings plus ``eps * b_nm * F_nm`` with random filter errors.

    ``F`` is symmetric with entries uniform in [-1, 1]. With ``two_chain``
    the result is 2N x 2N: both chains carry the same profile and the first
    N indices are the chain of interest. ``rng`` overrides ``config.seed``.
    """
    if config.variant is not NoiseVariant.NMR_FILTER:
        raise ValueError(f"expected an NMR noise config, got {config.variant.value}")
    if config.eps < 0:
        raise ValueError("error strength eps must be non-negative")
    N = profile.N
    clean = hopping_matrix(profile).A
    if config.two_chain:
        A = np.zeros((2 * N, 2 * N))
        A[:N, :N] = clean
        A[N:, N:] = clean
    else:
        A = clean.copy()
    if rng is None:
        rng = np.random.default_rng(config.seed)
    b = dipolar_amplitudes(chain_positions(N, config.two_chain, config.interchain_spacing))
    F = rng.uniform(-1.0, 1.0, size=A.shape)
    F = np.triu(F, 1)
    F = F + F.T
    A = A + config.eps * b * F
    return HoppingMatrix(A, tridiagonal=not config.two_chain and config.eps == 0)


def trap_frequencies_squared(profile: CouplingProfile) -> np.ndarray:
    """Squared local trap frequencies w_n^2 with 1/(w_n^2 w_{n+1}^2) = j_n.

    The chain of N-1 products is closed by mirror symmetry; for odd N the
    central site takes the value a symmetric pair of bonds would give it.
    """
    j = profile.j
    N = profile.N
    if not np.allclose(j, j[::-1]):
        raise ValueError("trap frequencies require a mirror-symmetric profile")
    x = np.empty(N)
    if N % 2 == 0:
        c = N // 2 - 1  # 0-based left-of-centre site; bond c joins the two central sites
        x[c] = x[c + 1] = np.sqrt(1.0 / j[c])
        left = c
    else:
        c = N // 2
        x[c] = np.sqrt(1.0 / j[c - 1])
        left = c
    for n in range(left - 1, -1, -1):
        x[n] = 1.0 / (j[n] * x[n + 1])
    x[N - left:] = x[:left][::-1]
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise ValueError("trap frequency recurrence produced non-positive values")
    return x


def ion_longrange_matrix(profile: CouplingProfile) -> HoppingMatrix:
    """All-to-all couplings 1/(w_n^2 w_m^2 |n-m|^3) matching j_n on nearest neighbours."""
    if np.any(profile.j <= 0):
        raise ValueError("ion long-range couplings need strictly positive j_n")
    x = trap_frequencies_squared(profile)
    idx = np.arange(profile.N)
    dist = np.abs(idx[:, None] - idx[None, :]).astype(float)
    A = np.zeros((profile.N, profile.N))
    off = dist > 0
    A[off] = 1.0 / (np.outer(x, x)[off] * dist[off] ** 3)
    return HoppingMatrix(A, tridiagonal=profile.N == 2)


def spin_hamiltonian(model, hopping: HoppingMatrix | np.ndarray, *,
                     anisotropy: float | np.ndarray = 0.0, field: float = 0.0) -> SpinHamiltonianSpec:
    A = hopping.A if isinstance(hopping, HoppingMatrix) else hopping
    return SpinHamiltonianSpec(Model(model), A, anisotropy, field)
