#pragma once

#include <vector>

#include "spt/landau.hpp"
#include "spt/model_catalog.hpp"

namespace spt {

struct MinimizeOptions {
  /// Coarse start grid: points_per_axis over [-half_width, half_width] per
  /// searched coordinate.
  double grid_half_width = 3.0;
  int grid_points_per_axis = 9;
  /// The coarse grid is skipped when the searched subspace is larger than this.
  std::size_t max_grid_dimension = 3;
  /// Samples for the one-dimensional candidate scans.
  int line_scan_points = 801;
  int max_polish_iterations = 200;
  /// Stop the polish when the gradient norm drops below this.
  double gradient_tolerance = 1e-12;
  /// Stop when both the phi decrease and the step length stall below this.
  double decrease_tolerance = 1e-12;
  /// Polished minima whose phi differs from the best by less than this are
  /// reported as degenerate.
  double tie_tolerance = 1e-10;
};

struct MinimizeResult {
  /// Canonical representative: the copy with u >= 0, v >= 0 when one exists.
  CoherentPoint z_min;
  double phi_min = 0.0;
  /// |z_min|^2.
  double order_parameter = 0.0;
  bool hessian_positive_definite = false;
  /// Symmetry copies and coexisting minima within tie_tolerance, z_min included.
  std::vector<CoherentPoint> degenerate_minima;
  /// False when the polish hit the iteration cap and the grid fallback ran.
  bool polish_converged = true;
  int starts = 0;
};

/// Global minimum of the Landau potential by deterministic multi-start:
/// the origin, closed-form and one-dimensional scan candidates, and a coarse
/// grid, each polished by a saddle-free Newton iteration on the analytic
/// gradient. The Dicke family and the Rabi-Stark-Hubbard model are searched
/// with v = 0, which holds for every stable parameter set; the anisotropic
/// model is searched over the full (u, v) plane.
/// Throws UnstableModel for unstable parameters.
MinimizeResult minimize(const ModelSpec& model, const MinimizeOptions& options = {});

enum class OracleSubspace {
  /// All 2M coordinates; limited to dimension 4.
  full,
  /// The subspace minimize searches (u only for Dicke and RSH).
  reduced,
};

/// Exhaustive scan of the grid {k * step : |k * step| <= half_width}^d with no
/// polish. Test oracle for minimize.
MinimizeResult brute_force_oracle(const ModelSpec& model, double box_half_width, double step,
                                  OracleSubspace subspace = OracleSubspace::full);

enum class HessianClass { positive_definite, indefinite, singular };

struct HessianReport {
  HessianClass kind = HessianClass::positive_definite;
  /// Ascending eigenvalues of the symmetrized finite-difference Hessian.
  std::vector<double> eigenvalues;
};

/// Classifies the Hessian at a stationary point. Throws DomainError when
/// |grad phi(z)| >= 1e-6.
HessianReport hessian_check(const ModelSpec& model, const CoherentPoint& z,
                            double singular_tolerance = 1e-8);

}  // namespace spt
