"""Lattice checks of Chern-Simons, Chern-Pontryagin and Maurer-Cartan identities."""
from ._backend import BACKEND
from .clebsch import (ClebschPotentials, abelian_cs_group_identity, assemble_potential,
                      clebsch_from_su2, cs_surface_vector, helicity_boundary_check)
from .groupfield import (EulerAngleField, GroupElementField, MaurerCartanField,
                         flatness_residual, from_euler, maurer_cartan, winding_number)
from .lattice import (GridSpec, ScalarField, VectorField, convergence_order,
                      convergence_study, partial_derivative, surface_flux, volume_integral)
from .liealg import (ClosureError, LieAlgebraSpec, SymmetricPairSpec, check_symmetric_pair,
                     structure_constants)
from .projection import ProjectedConnection, cs_coincidence_check, project_connection
from .topo import (FieldStrength, GaugePotential, cp_density_2d, cp_density_4d, cs_1d,
                   cs_current, cs_density_3d, divergence_identity_residual, field_strength,
                   helicity)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ClebschPotentials", "ClosureError", "EulerAngleField", "FieldStrength",
    "GaugePotential", "GridSpec", "GroupElementField", "LieAlgebraSpec", "MaurerCartanField",
    "ProjectedConnection", "ScalarField", "SymmetricPairSpec", "VectorField",
    "abelian_cs_group_identity", "assemble_potential", "check_symmetric_pair",
    "clebsch_from_su2", "convergence_order", "convergence_study", "cp_density_2d",
    "cp_density_4d", "cs_1d", "cs_coincidence_check", "cs_current", "cs_density_3d",
    "cs_surface_vector", "divergence_identity_residual", "field_strength",
    "flatness_residual", "from_euler", "helicity", "helicity_boundary_check",
    "maurer_cartan", "partial_derivative", "project_connection", "structure_constants",
    "surface_flux", "volume_integral", "winding_number",
]
