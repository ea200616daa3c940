"""Relation between the extensive size and excluded collapse-model times.

In the diffusive limit of a momentum-kick collapse model, the purity-loss
rate is proportional to the commutator bound F2, and an experiment that
keeps coherence for a time tau excludes model times up to

    tau_e ~ tau (sigma_q m_u a0 / m_e hbar)^2 N_ext.

Near a critical length of 100 nm the constant terms cancel and the
exponent reduces to log10(N_ext) + log10(tau).
"""

import numpy as np
from scipy.linalg import expm

from macrosize import quantum
from macrosize.catalog import NHParams, nh_mu, nh_rate
from macrosize.fisher import sub_qfi_f2

print("Exclusion exponent for a molecule-interferometry-scale experiment")
params = NHParams(n_ext=1.4e14, coherence_time=3.8e-3, critical_length=100e-9)
result = nh_mu(params)
print(f"  N_ext = {params.n_ext:.1e}, tau = {params.coherence_time:.1e} s")
print(f"  mu (full)       = {result['mu']:.3f}")
print(f"  mu (simplified) = {result['mu_simplified']:.3f}")
print(f"  excluded tau_e  = {result['tau_e']:.3e} s")

print()
print("Purity-loss consistency on a random 10-level state:")
dim = 10
rng = np.random.default_rng(1)
g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
rho = g @ g.conj().T
rho /= np.trace(rho).real
_a, q_op, _p = quantum.fock_operators(dim, nu=0.5)
c = 0.5
eye = np.eye(dim, dtype=complex)
q2 = q_op @ q_op
liouville = -c * (np.kron(eye, q2) + np.kron(q2.T, eye) - 2.0 * np.kron(q_op.T, q_op))
dt = 1e-5


def purity(t):
    rho_t = (expm(liouville * t) @ rho.reshape(-1, order="F")).reshape(dim, dim, order="F")
    return float(np.real(np.trace(rho_t @ rho_t)))


rate_fd = -(purity(dt) - purity(-dt)) / (2 * dt)
rate_f2 = c * sub_qfi_f2(rho, q_op).value
print(f"  finite-difference purity rate: {rate_fd:.10f}")
print(f"  c * F2 closed form:            {rate_f2:.10f}")
print(f"  relative gap: {abs(rate_fd - rate_f2) / rate_f2:.2e}")

print()
print("Model decoherence rate for a physical parameter set:")
result = nh_rate(rho, q_op, sigma_q=1e-27, tau_e=1e8)
print(f"  purity-loss rate {result['purity_loss_rate']:.3e} 1/s "
      f"(gamma = {result['gamma']:.3e} 1/s)")
print(f"  {result['note']}")
