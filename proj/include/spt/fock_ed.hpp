#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spt/lanczos.hpp"
#include "spt/model_catalog.hpp"

namespace spt {

// Raw Hamiltonian parameters. Energies are in arbitrary but common units;
// from_dimensionless uses Omega = 1.
//
//   Dicke:  H = sum_nu [ g_nu/sqrt(N) (a+a^) + g'_nu/N (a^2 + a^2^) ] sum_i sx_i
//               + sum_nu omega_nu a^a + Omega/2 sum_i sz_i
//   Rabi-Stark (on-site, decoupled hopping with real psi):
//           H = omega a^a + (Omega/2 + U a^a) sz + g (a+a^) sx - J [4 psi (a+a^) - 4 psi^2]
//   Anisotropic Rabi-Stark:
//           H = g1 (a^ s- + a s+) + g2 (a s- + a^ s+) + omega a^a + (Omega/2 + U a^a) sz

struct DickeRaw {
  std::vector<double> g;
  std::vector<double> g_prime;
  std::vector<double> omega;
  double big_omega = 1.0;
  int qubits = 1;
};

struct RabiStarkRaw {
  double g = 0.0;
  double u = 0.0;
  double omega = 1.0;
  double big_omega = 1.0;
  /// Hopping J and the mean field psi = <a>; J = 0 is the bare model.
  double j = 0.0;
  double psi = 0.0;
};

struct AnisotropicRaw {
  double g1 = 0.0;
  double g2 = 0.0;
  double u = 0.0;
  double omega = 1.0;
  double big_omega = 1.0;
};

using RawModel = std::variant<DickeRaw, RabiStarkRaw, AnisotropicRaw>;

/// Raw parameters for a dimensionless model at frequency ratios eta
/// (eta_nu = N Omega / omega_nu for Dicke, Omega / omega otherwise), Omega = 1.
RawModel from_dimensionless(const ModelSpec& model, const std::vector<double>& eta);

std::size_t raw_mode_count(const RawModel& raw);
int raw_qubit_count(const RawModel& raw);
double raw_big_omega(const RawModel& raw);

/// Product basis ordered qubit_1 x ... x qubit_N x mode_1 x ... x mode_M, the
/// last factor fastest. Qubit state 0 is spin up.
class FockBasis {
 public:
  FockBasis(int qubits, std::vector<int> n_cut);

  std::size_t dimension() const { return dim_; }
  int qubits() const { return qubits_; }
  const std::vector<int>& n_cut() const { return n_cut_; }
  std::size_t mode_count() const { return n_cut_.size(); }
  std::size_t mode_block() const { return mode_block_; }

  std::size_t index(std::size_t qubit_config, const std::vector<int>& photons) const;
  /// Photon number of `mode` in basis state `idx`.
  int photons(std::size_t idx, std::size_t mode) const;
  std::size_t qubit_config(std::size_t idx) const { return idx / mode_block_; }
  /// True when qubit `q` (0-based from the most significant factor) is up.
  bool qubit_up(std::size_t idx, int q) const;

 private:
  int qubits_;
  std::vector<int> n_cut_;
  std::vector<std::size_t> strides_;
  std::size_t mode_block_ = 1;
  std::size_t dim_ = 0;
};

struct EDConfig {
  /// Photon numbers 0..n_cut-1 per mode; a single entry is broadcast.
  std::vector<int> n_cut{40};
  /// Frequency ratios used to rescale photon numbers; one per mode.
  std::vector<double> eta;
  int n_levels = 2;
  /// Dimensions up to this use the dense solver.
  std::size_t dense_threshold = 4000;
  std::size_t memory_budget_bytes = std::size_t{4} << 30;
  LanczosOptions lanczos;
};

/// Per-mode cutoffs with the broadcast rule applied. Throws DomainError for
/// n_cut < 2 and DimensionMismatch for a count that matches neither 1 nor
/// the mode count.
std::vector<int> resolved_n_cut(const EDConfig& config, std::size_t modes);

/// Rough peak memory of assembly plus eigensolve.
std::size_t estimated_memory_bytes(const RawModel& raw, const EDConfig& config);

/// Real symmetric Hamiltonian in the product basis. Throws BudgetExceeded
/// when the estimate exceeds the budget.
SparseMatrix build_hamiltonian(const RawModel& raw, const EDConfig& config);

struct SpectralResult {
  std::vector<double> energies;
  /// One column per level.
  Eigen::MatrixXd states;
  std::vector<double> residuals;
  double norm_estimate = 0.0;
  std::string method;
  /// Set by truncation_convergence.
  std::optional<bool> converged;
};

/// Dense solve up to the configured threshold, thick-restart Lanczos above.
SpectralResult lowest_eigenpairs(const SparseMatrix& h, int n_levels, const EDConfig& config = {});

/// <a^_nu a_nu> / eta_nu, indexed [level][mode].
std::vector<std::vector<double>> rescaled_photon_numbers(const SpectralResult& spectrum, const RawModel& raw,
                                                         const EDConfig& config);

struct Quadratures {
  /// <(a + a^)^2> / (4 eta)
  std::vector<double> u2;
  /// -<(a - a^)^2> / (4 eta)
  std::vector<double> v2;
};

/// Quadrature variances per level and mode. Both are even under the parity
/// symmetry, so they are insensitive to mixing inside a degenerate doublet.
std::vector<Quadratures> quadratures(const SpectralResult& spectrum, const RawModel& raw, const EDConfig& config);

/// Diagonal of Pi = (-1)^(sum_nu n_nu + number of up qubits).
Eigen::VectorXd parity_diagonal(const FockBasis& basis);

/// <Pi> per level. Throws DomainError for Dicke models with g' != 0, where
/// the symmetry is absent.
std::vector<double> parity_expectations(const SpectralResult& spectrum, const RawModel& raw, const EDConfig& config);

struct TruncationReport {
  bool converged = false;
  /// Per-mode cutoffs of the last solve.
  std::vector<int> n_cut;
  std::vector<double> ground_energies;
  std::vector<std::vector<double>> photon_numbers;
  std::string note;
};

/// Doubles every n_cut until |dE0| < 1e-8 Omega and every rescaled photon
/// number moves by less than 1e-6, or until max_n_cut or the memory budget
/// stops the schedule.
TruncationReport truncation_convergence(const RawModel& raw, const EDConfig& config, int max_n_cut = 1024);

struct EDSolution {
  SpectralResult spectrum;
  std::vector<std::vector<double>> photon_numbers;
  std::vector<Quadratures> quadratures;
  /// Empty when the model lacks the parity symmetry.
  std::vector<double> parity;
};

/// Build, solve, and evaluate all observables.
EDSolution solve(const RawModel& raw, const EDConfig& config);

}  // namespace spt
