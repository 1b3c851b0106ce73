#pragma once

#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spt/gmlp_optimizer.hpp"
#include "spt/landau.hpp"
#include "spt/model_catalog.hpp"

namespace spt {

/// Order parameter below which a point is normal phase.
inline constexpr double kNormalPhaseThreshold = 1e-10;

enum class Phase { NP, SP, SP_u, SP_v, unstable };

std::string_view phase_label(Phase phase);

struct PhasePoint {
  CouplingVector coupling;
  Phase phase = Phase::NP;
  double order_parameter = 0.0;
  CoherentPoint z_min;
  double free_energy = 0.0;
  /// Anisotropic model on the gamma1 = gamma2 diagonal in the SP: the
  /// minimizer is a continuum and no u/v type is assigned.
  bool degenerate = false;
  /// Failed stability inequality for unstable points.
  std::string note;
};

/// Wraps minimize and assigns the phase label. Unstable models are labelled
/// `unstable` instead of throwing.
PhasePoint classify(const ModelSpec& model, const MinimizeOptions& options = {});

inline bool is_superradiant(Phase p) { return p == Phase::SP || p == Phase::SP_u || p == Phase::SP_v; }

enum class TransitionOrder { first, second, none };

std::string_view order_label(TransitionOrder order);

struct BoundaryOptions {
  /// Bisection stops when the bracket is narrower than this (in t).
  double tolerance = 1e-9;
  /// Coarse samples used to bracket the first superradiant point.
  int coarse_samples = 32;
  /// |z_c|^2 at or above this marks a first-order transition.
  double order_threshold = 1e-6;
  /// Relative offset of the two superradiant-side probes used to extrapolate z_c.
  double probe_offset = 1e-4;
  MinimizeOptions minimize;
};

struct BoundaryCrossing {
  /// Coupling vector along the scanned line is origin + t * direction.
  std::vector<double> origin;
  std::vector<double> direction;
  /// Critical t; equals |lambda_c| for radial scans with a unit direction.
  double critical_t = std::numeric_limits<double>::quiet_NaN();
  /// |lambda| at the crossing.
  double critical_magnitude = std::numeric_limits<double>::quiet_NaN();
  /// Superradiant-side minimizer extrapolated to the boundary; zero for
  /// second-order transitions.
  CoherentPoint z_c;
  double zc_norm2 = 0.0;
  TransitionOrder transition_order = TransitionOrder::none;
  /// Upper end of the scanned t range (clipped at the stability limit for
  /// radial scans).
  double scanned_max = 0.0;
};

/// Boundary along the ray t * direction / |direction|, t in (0, max_magnitude].
/// Relies on the radial theorem: NP at the origin, at most one NP -> SP switch.
/// `prototype` fixes the family, mode count and temperature; its couplings are
/// ignored. Direction components must be nonnegative.
BoundaryCrossing radial_boundary(const ModelSpec& prototype, std::span<const double> direction,
                                 double max_magnitude, const BoundaryOptions& options = {});

/// Boundary along an arbitrary line origin + t * direction, t in [0, max_t].
/// Brackets the first superradiant coarse sample and bisects inside it.
BoundaryCrossing line_boundary(const ModelSpec& prototype, std::span<const double> origin,
                               std::span<const double> direction, double max_t,
                               const BoundaryOptions& options = {});

/// Boundary along one named parameter (see SweepAxis) in [min, max], other
/// parameters fixed at their values in `base`. critical_t is the parameter
/// value at the crossing; origin is the coupling vector at min.
BoundaryCrossing parameter_boundary(const ModelSpec& base, std::string_view parameter, double min, double max,
                                    const BoundaryOptions& options = {});

struct AnalyticBoundary {
  /// Dicke: sum gamma^2 + gamma'^2 - 1;  RSH: gamma^2 + J~ + U~ - 1;
  /// ARS: max(gamma1, gamma2)^2 + U~ - 1. Negative in the NP.
  double residual = 0.0;
  /// One-photon coupling magnitude at which the boundary is met with the
  /// other parameters fixed: |gamma| (Dicke), gamma (RSH), max(gamma1, gamma2)
  /// (ARS). U~ = 0 gives the Jaynes-Cummings value 1, gamma' = 0 the
  /// multimode Rabi value |gamma| = 1.
  double critical_gamma = 0.0;
  bool superradiant = false;
};

/// Closed-form boundary. Throws DomainError for Dicke models with unequal
/// gamma' (use radial_boundary there).
AnalyticBoundary analytic_boundary(const ModelSpec& model);

/// Closed-form |lambda_c| along a unit direction; +inf when the ray never
/// reaches the boundary before the stability limit.
double analytic_radial_critical(const ModelSpec& prototype, std::span<const double> direction);

struct ClosedFormOrder {
  double total = 0.0;
  std::vector<double> per_mode;
};

/// Closed-form order parameters:
///   multimode Rabi (all gamma' = 0): u_nu^2 = (1 - gamma^-4) gamma_nu^2 / 4,
///   RSH: (gamma^2 + J~ + U~ - 1) / ((1 - J~ + U~)(1 - J~ - U~)),
///   ARS with gamma1 = gamma2 = gamma: (gamma^2 + U~ - 1) / ((1 - U~)(1 + U~)).
/// Zero on the normal side. For the two Stark models the expression is the
/// nonzero root of phi(u) = phi(0), which vanishes linearly at the boundary
/// with twice the slope of the minimizer itself.
/// Throws DomainError outside these regimes.
ClosedFormOrder closed_form_order_parameter(const ModelSpec& model);

struct FirstOrderJump {
  /// Per-mode u_nu at the boundary: gamma_nu gamma' / (1 - gamma'^2).
  std::vector<double> u_c;
  double norm2 = 0.0;
};

/// Superradiant-side minimizer on the Dicke boundary with equal gamma'.
/// Throws DomainError for unequal gamma', gamma' outside [0, 1), or when
/// |sum gamma^2 + gamma'^2 - 1| exceeds boundary_tolerance.
FirstOrderJump first_order_jump(const ModelSpec& model, double boundary_tolerance = 1e-3);

struct SweepAxis {
  /// Parameter path: gamma[i], gamma_prime[i], gamma[*], gamma_prime[*]
  /// (Dicke); gamma, j_tilde, u_tilde (RSH); gamma1, gamma2, u_tilde (ARS).
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  double value(int index) const;
};

/// Sets one named parameter. Throws ConfigError for unknown names.
ModelSpec apply_parameter(const ModelSpec& model, std::string_view parameter, double value);

struct SweepResult {
  std::vector<double> axis_values;
  PhasePoint point;
  /// Non-empty when classification threw.
  std::string error;
};

/// Classifies every grid point, row-major over the axes (last axis fastest).
/// Any axis with count 0 gives an empty result. Throws ConfigError for
/// malformed grids or more than 1e6 points.
std::vector<SweepResult> sweep(const ModelSpec& base, const std::vector<SweepAxis>& axes, int workers = 0,
                               const MinimizeOptions& options = {});

}  // namespace spt
