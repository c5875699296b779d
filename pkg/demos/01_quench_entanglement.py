# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
# ---

# %% [markdown]
# # Entanglement from a Néel quench
#
# An XX chain prepared in |↑↓↑↓…⟩ is free-fermion solvable: the whole state
# is fixed by the two-point correlation matrix C(t), which costs O(N²) per time
# instead of 2^N. Here we follow the half-chain entropy on a chain whose
# couplings transfer states perfectly, and check the state reached halfway
# to the mirror time against the exact product of Bell pairs.

# %%
import numpy as np

from xxquench import exact
from xxquench.chain import build_profile, hopping_matrix, spin_hamiltonian
from xxquench.entanglement import bell_generation_fidelity, nested_bell_target
from xxquench.fermions import (
    block_entropy,
    diagonalize,
    initial_state_spec,
    quench_correlations,
    wigner_d_propagator_matrix,
)

# %% [markdown]
# ## Half-chain entropy, N = 51
#
# The coupling profile j_n = sqrt(n(N-n))/N gives an equally spaced spectrum,
# so every excitation reaches its mirror site at t* = πN/2. Halfway there the
# entropy peaks at ⌊N/2⌋ = 25 bits: each spin is maximally entangled with its
# mirror partner.

# %%
N = 51
profile = build_profile("pst", N)
spec = diagonalize(hopping_matrix(profile))
init = initial_state_spec("neel", N)
t_star = np.pi * N / 2

for t in np.linspace(0, t_star, 9):
    S = block_entropy(quench_correlations(spec, init, t), range(N // 2))
    print(f"t = {t:7.2f}   S = {S:7.3f} bits")

# %% [markdown]
# The same propagator is a spin-(N-1)/2 rotation, so Wigner-D matrices give
# it in closed form. The two routes agree to rounding.

# %%
for t in (3.0, t_star / 2, t_star):
    gap = np.abs(spec.amplitudes(t) - wigner_d_propagator_matrix(N, t)).max()
    print(f"t = {t:7.2f}   max |f_spectral - f_wigner| = {gap:.1e}")

# %% [markdown]
# ## The nested Bell state, checked by brute force
#
# For small N the exact engine evolves all 2^N amplitudes. The overlap with
# the product of mirror Bell pairs is one to machine precision.

# %%
for N in range(2, 11):
    print(f"N = {N:2d}   fidelity = {bell_generation_fidelity(N):.15f}")

N = 8
H = exact.build_spin_hamiltonian(spin_hamiltonian("xx", hopping_matrix(build_profile("pst", N))))
psi = exact.evolve_state(H, exact.initial_state("neel", N), np.pi * N / 4)
target = nested_bell_target(N)
print("pairs:", target.pairs)
print("entropy of sites 0..3:", round(exact.entanglement_entropy(psi, range(4)), 12))
