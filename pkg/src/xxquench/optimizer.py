"""Boundary-coupling optimisation, peak times and seeded noise ensembles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import exact
from .chain import (
    CouplingProfile,
    Model,
    NoiseConfig,
    NoiseVariant,
    ProfileKind,
    build_profile,
    hopping_matrix,
    ion_longrange_matrix,
    nmr_perturbed_matrix,
    spin_hamiltonian,
)
from .entanglement import (
    end_pair_state,
    fully_entangled_fraction,
    fully_entangled_fraction_matrix,
)
from .fermions import Spectrum, diagonalize, initial_state_spec, quench_correlations

INV_PHI = (math.sqrt(5) - 1) / 2


class OptimizationError(RuntimeError):
    pass


def golden_section_max(f, a: float, b: float, tol: float = 1e-8):
    """Maximum of a unimodal ``f`` on [a, b]; returns (x, f(x))."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def grid_then_golden(f, a: float, b: float, n_grid: int, tol: float, vf=None):
    """Scan ``n_grid`` points, then golden-section around the best one.

    ``vf`` optionally evaluates ``f`` on a whole array at once.
    """
    xs = np.linspace(a, b, n_grid)
    ys = vf(xs) if vf is not None else np.array([f(x) for x in xs])
    i = int(np.argmax(ys))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n_grid - 1)]
    x, y = golden_section_max(f, lo, hi, tol)
    if ys[i] > y:
        return xs[i], ys[i]
    return x, y


def arrival_amplitude(spec: Spectrum, t) -> np.ndarray:
    """|f_N1(t)|, vectorised over t."""
    g1, gN = spec.g[:, 0], spec.g[:, -1]
    w = g1 * gN
    phase = np.exp(-1j * np.multiply.outer(np.asarray(t, dtype=float), spec.E))
    return np.abs(phase @ w)


def max_arrival(spec: Spectrum, t_lo: float, t_hi: float, tol: float = 1e-6):
    """Largest |f_N1(t)| on [t_lo, t_hi]; returns (t, amplitude)."""
    n_grid = max(64, int((t_hi - t_lo) / 0.1))
    return grid_then_golden(lambda t: float(arrival_amplitude(spec, t)), t_lo, t_hi, n_grid, tol,
                            vf=lambda ts: arrival_amplitude(spec, ts))


@dataclass(frozen=True)
class OptimizationResult:
    N: int
    j_opt: float
    f_max: float
    t_star: float
    F: float

    def to_dict(self) -> dict:
        return {"N": self.N, "j_opt": self.j_opt, "f_max": self.f_max, "t_star": self.t_star, "F": self.F}


def boundary_objective(N: int, j: float, tol: float = 1e-6):
    spec = diagonalize(hopping_matrix(build_profile(ProfileKind.MINIMALLY_ENGINEERED, N, j)))
    return max_arrival(spec, 0.7 * N, 1.6 * N, tol)


def optimal_boundary_coupling(N: int, tolerance: float = 1e-6, n_grid: int = 40) -> OptimizationResult:
    """Maximise max_t |f_N1(t)| over the end coupling j' of a minimally engineered chain.

    The inner time search covers t in [0.7N, 1.6N]; both searches end in a
    golden-section refinement.
    """
    if N < 3:
        raise ValueError("boundary optimisation needs N >= 3")
    cache = {}

    def objective(j):
        if j not in cache:
            cache[j] = boundary_objective(N, j, tolerance)
        return cache[j][1]

    js = np.linspace(1.0 / n_grid, 1.0, n_grid)
    ys = np.array([objective(j) for j in js])
    if np.ptp(ys) < 1e-12:
        raise OptimizationError(f"flat landscape for N={N}: |f_N1| = {ys[0]:.6g} for all j'")
    i = int(np.argmax(ys))
    lo, hi = js[max(i - 1, 0)], js[min(i + 1, n_grid - 1)]
    j_opt, f_max = golden_section_max(objective, lo, hi, tolerance)
    if ys[i] > f_max:
        j_opt, f_max = js[i], ys[i]
    t_star = cache[j_opt][0]
    return OptimizationResult(N, float(j_opt), float(f_max), float(t_star), (1 + f_max) ** 2 / 4)


def fit_power_law(Ns, values):
    """Slope and prefactor of a least-squares line in log-log coordinates."""
    slope, intercept = np.polyfit(np.log(Ns), np.log(values), 1)
    return float(slope), float(np.exp(intercept))


def transfer_time_estimate(N: int, kind) -> tuple[float, float]:
    """(t*, t*/2): exact mirror time for the fully engineered chain, the
    ballistic arrival N + 2.29 N^(1/3) for the optimal minimal chain, and the
    Airy-front arrival N + 0.81 N^(1/3) of the uniform chain."""
    kind = ProfileKind(kind)
    if N < 2:
        raise ValueError("need at least two sites")
    if kind is ProfileKind.FULLY_ENGINEERED:
        t = math.pi * N / 2
    elif kind is ProfileKind.MINIMALLY_ENGINEERED:
        t = N + 2.29 * N ** (1 / 3)
    else:
        t = N + 0.81 * N ** (1 / 3)
    return t, t / 2


@dataclass(frozen=True)
class PeakResult:
    t_peak: float
    F_peak: float
    half_width: float
    window_90: tuple


def _crossings(t, y, i, level):
    """Interpolated times left and right of index ``i`` where ``y`` drops below ``level``."""
    left = right = np.nan
    for k in range(i, 0, -1):
        if y[k - 1] < level <= y[k]:
            left = t[k - 1] + (level - y[k - 1]) * (t[k] - t[k - 1]) / (y[k] - y[k - 1])
            break
    for k in range(i, len(y) - 1):
        if y[k + 1] < level <= y[k]:
            right = t[k] + (y[k] - level) * (t[k + 1] - t[k]) / (y[k] - y[k + 1])
            break
    return left, right


def peak_search(t, F, baseline: float = 0.0, min_rel_height: float = 0.9) -> PeakResult:
    """First local maximum of a sampled series, with threshold windows.

    Only maxima reaching ``min_rel_height`` of the series maximum (measured
    above ``baseline``) count, which skips ripples before the main peak. The
    width is taken at half the peak height above ``baseline``; the window is
    where the series stays above 90% of the peak value. Unresolved edges are NaN.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(F, dtype=float)
    if len(t) < 3 or len(t) != len(y):
        raise ValueError("need at least three (t, F) samples of equal length")
    thresh = baseline + min_rel_height * (y.max() - baseline)
    interior = np.flatnonzero((y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:])) + 1
    interior = interior[y[interior] >= thresh]
    if interior.size == 0:
        raise ValueError("series has no interior peak (monotone or flat)")
    i = int(interior[0])
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    h0, h1 = t[i] - t[i - 1], t[i + 1] - t[i]
    # parabola through three (possibly unevenly spaced) points
    denom = h0 * h1 * (h0 + h1)
    a = (h0 * (y2 - y1) - h1 * (y1 - y0)) / denom
    b = (h0 ** 2 * (y2 - y1) + h1 ** 2 * (y1 - y0)) / denom
    if a < 0:
        dx = -b / (2 * a)
        tp, Fp = t[i] + dx, y1 + b * dx / 2
    else:
        tp, Fp = t[i], y1
    l5, r5 = _crossings(t, y, i, baseline + 0.5 * (Fp - baseline))
    l9, r9 = _crossings(t, y, i, 0.9 * Fp)
    return PeakResult(float(tp), float(Fp), float(r5 - l5), (float(l9), float(r9)))


def end_fef_series(profile: CouplingProfile, init: str, times) -> np.ndarray:
    """F_{1,N}(t) of the clean quadratic chain on a time grid."""
    spec = diagonalize(hopping_matrix(profile))
    ini = initial_state_spec(init, profile.N)
    return np.array([fully_entangled_fraction(end_pair_state(quench_correlations(spec, ini, t), ini))
                     for t in times])


# ---------------------------------------------------------------- ensembles


@dataclass(frozen=True)
class Scenario:
    profile: CouplingProfile
    init: str = "neel"

    @property
    def N(self) -> int:
        return self.profile.N

    def model(self, config: NoiseConfig) -> Model:
        if config.variant is NoiseVariant.NMR_FILTER:
            return Model.DOUBLE_QUANTUM
        if config.variant is NoiseVariant.XXZ_ANISOTROPY:
            return Model.XXZ
        return Model.XX

    def initial_kind(self, config: NoiseConfig) -> str:
        return "fm" if config.variant is NoiseVariant.NMR_FILTER else self.init

    def peak_window(self) -> tuple[float, float]:
        half = transfer_time_estimate(self.N, self.profile.kind)[1]
        return 0.8 * half, 1.2 * half


@dataclass
class EnsembleSummary:
    config: NoiseConfig
    realizations: int
    seed: int
    mean: np.ndarray
    stderr: np.ndarray
    t_prime: np.ndarray
    samples: np.ndarray = field(repr=False)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "realizations": self.realizations,
            "seed": self.seed,
            "mean": self.mean.tolist(),
            "stderr": self.stderr.tolist(),
            "t_prime": self.t_prime.tolist(),
            **self.extra,
        }


def realization_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for one realization, independent of run order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def mirror_pairs(N: int):
    return [(k, N - 1 - k) for k in range(N // 2)]


def realization_hamiltonian(scenario: Scenario, config: NoiseConfig, rng=None):
    """Sparse spin Hamiltonian for one noise realization."""
    p = scenario.profile
    v = config.variant
    if v is NoiseVariant.NMR_FILTER:
        A = nmr_perturbed_matrix(p, config, rng)
        return exact.build_spin_hamiltonian(spin_hamiltonian(Model.DOUBLE_QUANTUM, A))
    if v is NoiseVariant.ION_LONG_RANGE:
        return exact.build_spin_hamiltonian(spin_hamiltonian(Model.XX, ion_longrange_matrix(p)))
    if v is NoiseVariant.XXZ_ANISOTROPY:
        return exact.build_spin_hamiltonian(
            spin_hamiltonian(Model.XXZ, hopping_matrix(p), anisotropy=config.jz * p.j))
    return exact.build_spin_hamiltonian(spin_hamiltonian(Model.XX, hopping_matrix(p)))


def _initial_vector(scenario: Scenario, config: NoiseConfig, total_sites: int) -> np.ndarray:
    psi = exact.initial_state(scenario.initial_kind(config), scenario.N)
    if total_sites > scenario.N:
        psi = np.kron(psi, exact.initial_state(scenario.initial_kind(config), total_sites - scenario.N))
    return psi


def pure_peak_fef(H, psi0: np.ndarray, N: int, window, tol: float = 1e-5, n_grid: int = 41):
    """t' maximising F_{1,N} in ``window`` and F of every mirror pair there."""
    ev = exact.ExactEvolver(H, psi0)

    def F_end(t):
        return fully_entangled_fraction_matrix(exact.reduced_density(ev.state(t), [0, N - 1]))

    tp, _ = grid_then_golden(F_end, window[0], window[1], n_grid, tol)
    psi = ev.state(tp)
    return tp, np.array([fully_entangled_fraction_matrix(exact.reduced_density(psi, pr))
                         for pr in mirror_pairs(N)])


def dephasing_peak_fef(H, psi0: np.ndarray, N: int, gamma: float, window, dt: float = 0.02,
                       t_fixed: float | None = None):
    """Pair FEFs at the grid time maximising F_{1,N} under dephasing.

    Returns (t', F_pairs(t'), F_pairs(t_fixed)); the last is None unless a
    fixed reading time (e.g. the clean t') is given.
    """
    rho0 = np.outer(psi0, psi0.conj())
    times = np.arange(window[0], window[1] + dt / 2, dt)
    if t_fixed is not None:
        times = np.sort(np.append(times, t_fixed))
    pairs = mirror_pairs(N)
    obs = exact.lindblad_trajectory(
        H, rho0, gamma, times,
        lambda rho: np.array([fully_entangled_fraction_matrix(exact.reduced_density(rho, pr)) for pr in pairs]))
    obs = np.array(obs)
    i = int(np.argmax(obs[:, 0]))
    fixed = None
    if t_fixed is not None:
        fixed = obs[int(np.flatnonzero(times == t_fixed)[0])]
    return float(times[i]), obs[i], fixed


def ensemble_run(scenario: Scenario, config: NoiseConfig, realizations: int = 100,
                 seed: int | None = None) -> EnsembleSummary:
    """Mean and standard error of the mirror-pair FEFs at t' over noise realizations.

    Only the NMR filter model is random; the other variants are evaluated once.
    """
    if realizations < 1:
        raise ValueError("need at least one realization")
    seed = config.seed if seed is None else seed
    N = scenario.N
    random = config.variant is NoiseVariant.NMR_FILTER and config.eps > 0
    runs = realizations if random else 1
    window = scenario.peak_window()
    samples, tps = [], []
    extra = {}
    for r in range(runs):
        rng = realization_rng(seed, r)
        H = realization_hamiltonian(scenario, config, rng)
        total = int(round(math.log2(H.shape[0])))
        psi0 = _initial_vector(scenario, config, total)
        if config.variant is NoiseVariant.DEPHASING:
            t_clean, _ = pure_peak_fef(H, psi0, N, window)
            tp, F, F_fixed = dephasing_peak_fef(H, psi0, N, config.gamma, window, t_fixed=t_clean)
            extra = {"t_clean": t_clean, "F_at_clean_t": F_fixed.tolist()}
        else:
            tp, F = pure_peak_fef(H, psi0, N, window)
        samples.append(F)
        tps.append(tp)
    samples = np.array(samples)
    if runs == 1:
        samples = np.repeat(samples, realizations, axis=0)
        tps = tps * realizations
    mean = samples.mean(axis=0)
    if runs > 1:
        stderr = samples.std(axis=0, ddof=1) / np.sqrt(realizations)
    else:
        stderr = np.zeros_like(mean)  # deterministic: every realization is identical
    return EnsembleSummary(config, realizations, seed, mean, stderr, np.array(tps), samples, extra)
