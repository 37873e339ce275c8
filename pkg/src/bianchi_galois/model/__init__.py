"""The axisymmetric Bianchi IX model: flow, Taub family and variational equations."""

from .physics import (Linearization, ModelParams, ModelState, einstein_point, gamma_constraint,
                      hamiltonian, jacobian, linearize, taub_acceleration, taub_energy, taub_state,
                      vector_field)
from .ve import (MuCandidate, VEPath, VESuite, XiValues, ave_residual, build_ve_suite, c1_poly,
                 c2_poly, psi_basis_eval, xi_eval)

__all__ = ["Linearization", "ModelParams", "ModelState", "einstein_point", "gamma_constraint",
           "hamiltonian", "jacobian", "linearize", "taub_acceleration", "taub_energy", "taub_state",
           "vector_field", "MuCandidate", "VEPath", "VESuite", "XiValues", "ave_residual",
           "build_ve_suite", "c1_poly", "c2_poly", "psi_basis_eval", "xi_eval"]
