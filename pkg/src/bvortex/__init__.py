"""Boundary-vortex workbench.

Computes the renormalized energy of two-jump boundary configurations on
planar domains, solves the associated boundary-reaction problem by spectral
Dirichlet-to-Neumann reduction, and verifies the energy expansions,
minimizer locations, and stability predictions at desk scale.
"""

__version__ = "0.1.0"

from .errors import (BVortexError, CapabilityError, ConfigError,
                     ConvergenceError, GeometryError, QuadratureError)
from .geometry import (BoundaryPoint, DomainSpec, boundary_point,
                       boundary_weights, disk_to_halfplane,
                       regular_polygon_map, sc_derivative_magnitude, sc_map)
from .nonlinearity import Nonlinearity, builtin_nonlinearity
from .renorm import (CriticalPoint, EnergyLandscape, certificate_threshold,
                     find_local_minima, landscape, polygon_minima_certificate,
                     rectangle_hessian_at_midpoint, rectangle_phi,
                     renorm_w_conformal, renorm_w_green, three_tanh_root,
                     uniform_polygon_spec)
from .layer import (LayerProfile, cf_closed_form, cf_rescaled, compute_cf,
                    explicit_sine_profile, half_laplacian_apply,
                    homoclinic_probe, layer_energy_truncated,
                    layer_explicit_sine, solve_layer)
from .solver import (BoundaryField, Branch, SolutionRecord, boundary_field,
                     continuation, dtn_apply, initial_guess, newton_solve,
                     residual, stability_spectrum)
from .diagnostics import (ExpansionFit, gamma_expansion_check, total_energy,
                          transition_set, truncated_u0_energy,
                          u0_expansion_fit, vortex_vs_minimizer)
