"""
qsgeom: axisymmetric quasi-spherical collar metrics, quasi-local mass
functionals, and convex surfaces of revolution.
"""

from . import (collar_builder, convex_revolution, mass, quasi_spherical,
               ricci_paths, sphere_geometry)
from .collar_builder import (CobordismResult, MonotoneReport,
                             ThresholdReport, build_psc_cobordism,
                             monotone_increase_collar,
                             no_fill_in_threshold, spin_bound)
from .convex_revolution import (DilationResult, EnclosureReport,
                                Prop51Report, RevolutionProfile, diameter,
                                dilation, embed, enclosure_check,
                                prop51_check, steiner_area,
                                total_mean_curvature)
from .mass import (BartnikTriple, ByReport, MassCurve, SchwarzschildData,
                   ah_boundary_value, ah_mass_curve, brown_york,
                   by_large_sphere_limit, lambda_plus_kappa_round,
                   lambda_plus_round, schwarzschild_sphere_data)
from .quasi_spherical import (CollarSolution, CurvatureReconstruction,
                              EvolutionSeries, SolverOptions,
                              comparison_bounds,
                              reconstruct_scalar_curvature,
                              slice_mean_curvature, solve_generic,
                              solve_hyperbolic,
                              total_mean_curvature_evolution)
from .ricci_paths import (ConformalMetric, FlowPath, deturck_field,
                          monotone_scaled_path, psc_connecting_path,
                          ricci_deturck_flow, ricci_flow)
from .sphere_geometry import (AxisymField, EuclideanFoliation,
                              ExponentialScaled, HyperbolicFoliation,
                              LinearWarped, MetricPath, RoundMetric,
                              RoundScaling, Slice, SphereGrid, WarpedMetric,
                              background_scalar_curvature, build_grid,
                              integrate, laplace_beltrami, scalar_curvature,
                              slice_geometry, sphere_volume)

__version__ = "0.1.0"
