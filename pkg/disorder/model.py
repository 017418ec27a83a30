from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from hamiltonian import assemble_hamiltonian
from .distributions import CouplingDistribution, constant_omega, sample_omega
from .placement import CenterPlacement
from .potential import alloy_basis, assemble_random_potential
from .profiles import SingleSiteProfile


@dataclass(eq=False)
class DisorderModel:
    """H_omega = H0 + lam V_omega restricted to one box, with everything needed to sample it."""
    grid: object
    background: object
    profile: SingleSiteProfile
    centers: CenterPlacement
    distribution: CouplingDistribution
    overrides: Dict[Tuple[int, ...], CouplingDistribution] = field(default_factory=dict)
    omega_override: Optional[float] = None
    ergodic: bool = False

    def __post_init__(self):
        self.basis = alloy_basis(self.grid, self.centers, self.profile)
        self._zero = constant_omega(self.centers.sites, 0.0)
        envelopes = assemble_random_potential(self.grid, self.centers, self.profile, self._zero, 0.0, self.basis)
        self.u_envelope = envelopes.u_envelope
        self.w_indicator = envelopes.w_indicator

    @property
    def sites(self):
        return self.centers.sites

    def distributions(self):
        return [self.overrides.get(tuple(int(c) for c in s), self.distribution) for s in self.sites]

    @property
    def support_max(self):
        return max(mu.support_max for mu in self.distributions())

    def omega(self, master_seed, sample_index):
        if self.omega_override is not None:
            return constant_omega(self.sites, self.omega_override, master_seed, sample_index)
        return sample_omega(self.distribution, self.sites, master_seed, sample_index, self.overrides)

    def potential(self, omega, lam):
        return assemble_random_potential(self.grid, self.centers, self.profile, omega, lam, self.basis)

    def hamiltonian(self, extra=None, mask=None):
        return assemble_hamiltonian(self.grid, self.background, extra, mask)

    def operator_for(self, omega, lam):
        return self.hamiltonian(self.potential(omega, lam).v_omega)

    def random_operator(self, lam, master_seed, sample_index):
        return self.operator_for(self.omega(master_seed, sample_index), lam)

    def coupled_operator(self, t):
        """H_{0,L}(t) = H0 + t U_L."""
        return self.hamiltonian(t * self.u_envelope)

    def eta_operator(self, lam):
        """All couplings at the top of their support; dominates every sample from above."""
        eta = np.array([mu.support_max for mu in self.distributions()])
        return self.hamiltonian(lam * (self.basis.profiles @ eta).reshape(self.grid.shape))
