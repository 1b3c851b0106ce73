#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "spt/model_catalog.hpp"

namespace spt {

/// Rescaled coherent-state coordinates u_nu = Re(alpha_nu)/sqrt(eta_nu),
/// v_nu = Im(alpha_nu)/sqrt(eta_nu). The flat layout is (u_1..u_M, v_1..v_M).
struct CoherentPoint {
  std::vector<double> u;
  std::vector<double> v;

  static CoherentPoint zeros(std::size_t modes);
  static CoherentPoint from_flat(std::span<const double> z);

  std::size_t modes() const { return u.size(); }
  std::vector<double> flat() const;
  /// |z|^2 = sum(u^2 + v^2), the rescaled mean photon number.
  double norm2() const;
};

struct PotentialValue {
  /// Reduced free energy per qubit in units of Omega.
  double phi = 0.0;
  /// Auxiliary field xi; set for the Dicke family only.
  std::optional<double> xi;
};

/// Landau potential of one model, evaluated on flat coordinates.
///
/// All three families share the structure
///     phi(z) = Q(z) - G(sqrt(D(z)))
/// with Q quadratic in z, D >= 1 the squared qubit splitting in units of
/// Omega/2, G(E) = E/2 at zero temperature and
/// G(E) = ln[2 cosh(beta_omega E / 2)] / beta_omega at finite temperature.
///
///   Dicke: Q = sum(u^2 + v^2),      D = 1 + xi^2,
///          xi = 2 sum[gamma u + gamma' (u^2 - v^2)]
///   RSH:   Q = (1 - J~) u^2 + v^2,  D = (1 + 2 U~ s)^2 + 4 gamma^2 u^2
///   ARS:   Q = u^2 + v^2,           D = (1 + 2 U~ s)^2 + 4 gamma1^2 u^2 + 4 gamma2^2 v^2
/// where s = u^2 + v^2. The finite-temperature form of the two Stark models
/// follows from the same qubit trace.
class LandauPotential {
 public:
  /// Validates the model and rejects unstable parameters with UnstableModel.
  explicit LandauPotential(const ModelSpec& model);

  /// Skips the stability check. Used for finite-difference probes that may
  /// step across the stability boundary.
  static LandauPotential unchecked(const ModelSpec& model);

  const ModelSpec& model() const { return model_; }
  std::size_t dimension() const { return 2 * modes_; }

  double value(std::span<const double> z) const;
  /// phi(z) - phi(0), evaluated without cancellation near the origin.
  double excess(std::span<const double> z) const;
  /// Value at the origin: -1/2 at zero temperature.
  double origin_value() const;
  void gradient(std::span<const double> z, std::span<double> out) const;
  /// Dicke auxiliary field; zero for the other families.
  double xi(std::span<const double> z) const;

 private:
  struct Tag {};
  LandauPotential(const ModelSpec& model, Tag);

  // Q, D - 1 and optionally their gradients.
  void evaluate(std::span<const double> z, double& q, double& d_minus_one, double* grad_q,
                double* grad_d) const;
  double g_excess(double d_minus_one) const;

  ModelSpec model_;
  std::size_t modes_ = 1;
  double beta_ = 0.0;  // 0 means zero temperature
};

PotentialValue potential(const ModelSpec& model, const CoherentPoint& z);

/// Analytic gradient, flat layout (d/du_1..d/du_M, d/dv_1..d/dv_M).
std::vector<double> gradient(const ModelSpec& model, const CoherentPoint& z);

/// lambda . grad_lambda phi at fixed z, by central differences on the
/// coupling components (relative step 1e-5). Zero components contribute zero.
double coupling_virial(const ModelSpec& model, const CoherentPoint& z);

/// |z . grad_z phi - 2|z|^2 - lambda . grad_lambda phi|.
double radial_identity_residual(const ModelSpec& model, const CoherentPoint& z);

}  // namespace spt
