#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spt {

// Mean-field code works on dimensionless couplings only. Raw frequencies and
// coupling constants live in the exact-diagonalization layer (fock_ed.hpp).

/// Multimode Dicke model with one- and two-photon qubit-field terms.
///   gamma[nu]       = 2 g_nu / sqrt(Omega * omega_nu)
///   gamma_prime[nu] = 2 g'_nu / omega_nu
/// qubit_count is carried along for the ED layer; mean-field results are
/// per-qubit rescaled and do not depend on it.
struct MultimodeDicke12 {
  std::vector<double> gamma;
  std::vector<double> gamma_prime;
  int qubit_count = 1;

  std::size_t mode_count() const { return gamma.size(); }
};

/// On-site effective Rabi-Stark-Hubbard model after the hopping decoupling.
///   gamma = 2 g / sqrt(Omega * omega), j_tilde = 4 J / omega, u_tilde = U / omega
struct RabiStarkHubbard {
  double gamma = 0.0;
  double j_tilde = 0.0;
  double u_tilde = 0.0;
};

/// Anisotropic Rabi-Stark model.
///   gamma1 = (g1 + g2) / sqrt(Omega * omega), gamma2 = (g1 - g2) / sqrt(Omega * omega)
struct AnisotropicRabiStark {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double u_tilde = 0.0;
};

enum class ModelFamily { multimode_dicke, rabi_stark_hubbard, anisotropic_rabi_stark };

std::string_view family_name(ModelFamily family);

struct ZeroTemperature {};

/// beta_omega is the inverse temperature in units of the qubit frequency.
struct FiniteTemperature {
  double beta_omega = 0.0;
};

using ThermalParams = std::variant<ZeroTemperature, FiniteTemperature>;
using ModelVariant = std::variant<MultimodeDicke12, RabiStarkHubbard, AnisotropicRabiStark>;

struct ModelSpec {
  ModelVariant model;
  ThermalParams thermal = ZeroTemperature{};

  ModelFamily family() const;
  /// Number of field modes (M for the Dicke family, 1 otherwise).
  std::size_t mode_count() const;
  /// Dimension of the coherent-state search space: 2M or 2.
  std::size_t search_dimension() const { return 2 * mode_count(); }
  bool zero_temperature() const { return std::holds_alternative<ZeroTemperature>(thermal); }
};

/// Throws DomainError for non-finite or negative couplings, empty or
/// mismatched mode lists, and non-positive beta_omega.
void validate(const ModelSpec& model);

/// Ordered coupling components lambda and their Euclidean norm.
///   Dicke: (gamma_1..gamma_M, sqrt(gamma'_1)..sqrt(gamma'_M))
///   RSH:   (gamma, sqrt(J~), sqrt(U~))
///   ARS:   (gamma1, gamma2, sqrt(U~))
struct CouplingVector {
  std::vector<double> components;

  double magnitude() const;
};

CouplingVector coupling_vector(const ModelSpec& model);

/// Inverse of coupling_vector: builds a model of the same family, mode count,
/// qubit count and thermal parameters whose coupling vector is `components`.
/// Components may be any finite reals; squared entries make the round trip
/// well defined for the square-root slots.
ModelSpec with_coupling(const ModelSpec& prototype, std::span<const double> components);

struct Stability {
  bool stable = true;
  /// Smallest slack of the strict inequalities; <= 0 when unstable.
  double margin = 0.0;
  /// Which inequality failed, empty when stable.
  std::string reason;
};

/// Strict lower-boundedness conditions of the Landau potential:
///   Dicke: gamma'_nu < 1 for all nu;  RSH: 1 - J~ - U~ > 0;  ARS: U~ < 1.
/// Boundary-equal parameters are unstable with zero margin.
Stability stability_check(const ModelSpec& model);

}  // namespace spt
