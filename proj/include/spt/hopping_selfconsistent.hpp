#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spt/fock_ed.hpp"

namespace spt {

struct SelfConsistentOptions {
  int initial_levels = 64;
  /// Stop adding levels once (last term) * (levels left) < tail_tolerance * sum.
  double tail_tolerance = 1e-6;
  /// E1 - E0 below this (in units of Omega) is treated as a degenerate ground
  /// state.
  double degeneracy_tolerance = 1e-9;
};

struct SelfConsistentResult {
  /// Critical hopping in the 4 J / omega normalization.
  double j_tilde_critical = 0.0;
  /// omega * sum_n |<n|a + a^|GS>|^2 / (E_n - E_g)
  double spectral_sum = 0.0;
  int terms_used = 0;
  /// Magnitude of the last included term.
  double truncation_estimate = 0.0;
  std::vector<double> partial_sums;
};

/// Linear response of the decoupled on-site problem to the hopping field.
/// With H_J = -J [4 psi (a + a^) - 4 psi^2] the response <a + a^> = 8 J S psi
/// closes at 4 J = 1 / S, so J~_c = 1 / (omega S), where S is the static
/// susceptibility sum. g = U = 0 gives exactly J~_c = 1.
/// `raw` is the bare Rabi-Stark model (its j and psi are ignored).
/// Throws DomainError for a degenerate ground state ("beyond NP
/// self-consistency regime"). Levels double up to the full truncated space.
SelfConsistentResult critical_hopping(const RabiStarkRaw& raw, const EDConfig& config,
                                      const SelfConsistentOptions& options = {});

/// Same, from dimensionless gamma and u_tilde at frequency ratio eta.
SelfConsistentResult critical_hopping(double gamma, double u_tilde, double eta, const EDConfig& config,
                                      const SelfConsistentOptions& options = {});

struct MeanfieldComparison {
  double gamma = 0.0;
  double j_tilde_spectral = 0.0;
  /// 1 - gamma^2 - u_tilde; empty when not positive.
  std::optional<double> j_tilde_meanfield;
  /// |spectral - meanfield| / meanfield; empty when meanfield is empty.
  std::optional<double> relative_difference;
  int terms_used = 0;
  std::string error;
};

std::vector<MeanfieldComparison> compare_with_meanfield(const std::vector<double>& gammas, double u_tilde, double eta,
                                                        const EDConfig& config, int workers = 0,
                                                        const SelfConsistentOptions& options = {});

}  // namespace spt
