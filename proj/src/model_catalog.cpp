#include "spt/model_catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail/overloaded.hpp"
#include "spt/errors.hpp"

namespace spt {

namespace {

using detail::overloaded;

void require_nonnegative(double value, const char* name) {
  if (!std::isfinite(value)) throw DomainError(std::string(name) + " must be finite");
  if (value < 0.0) throw DomainError(std::string(name) + " must be nonnegative");
}

double checked_sqrt(double value, const char* name) {
  if (!(value >= 0.0)) throw DomainError(std::string("square root of negative ") + name);
  return std::sqrt(value);
}

std::string format_slack(const char* what, double slack) {
  std::ostringstream os;
  os << what << " = " << slack;
  return os.str();
}

}  // namespace

std::string_view family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::multimode_dicke:
      return "multimode_dicke";
    case ModelFamily::rabi_stark_hubbard:
      return "rabi_stark_hubbard";
    case ModelFamily::anisotropic_rabi_stark:
      return "anisotropic_rabi_stark";
  }
  return "unknown";
}

ModelFamily ModelSpec::family() const {
  return std::visit(overloaded{
                        [](const MultimodeDicke12&) { return ModelFamily::multimode_dicke; },
                        [](const RabiStarkHubbard&) { return ModelFamily::rabi_stark_hubbard; },
                        [](const AnisotropicRabiStark&) { return ModelFamily::anisotropic_rabi_stark; },
                    },
                    model);
}

std::size_t ModelSpec::mode_count() const {
  if (const auto* dicke = std::get_if<MultimodeDicke12>(&model)) return dicke->mode_count();
  return 1;
}

void validate(const ModelSpec& spec) {
  std::visit(overloaded{
                 [](const MultimodeDicke12& m) {
                   if (m.gamma.empty()) throw DomainError("mode_count must be at least 1");
                   if (m.gamma.size() != m.gamma_prime.size())
                     throw DomainError("gamma and gamma_prime must have the same length");
                   if (m.qubit_count < 1) throw DomainError("qubit_count must be positive");
                   for (double g : m.gamma) require_nonnegative(g, "gamma");
                   for (double g : m.gamma_prime) require_nonnegative(g, "gamma_prime");
                 },
                 [](const RabiStarkHubbard& m) {
                   require_nonnegative(m.gamma, "gamma");
                   require_nonnegative(m.j_tilde, "j_tilde");
                   require_nonnegative(m.u_tilde, "u_tilde");
                 },
                 [](const AnisotropicRabiStark& m) {
                   require_nonnegative(m.gamma1, "gamma1");
                   require_nonnegative(m.gamma2, "gamma2");
                   require_nonnegative(m.u_tilde, "u_tilde");
                 },
             },
             spec.model);
  if (const auto* finite = std::get_if<FiniteTemperature>(&spec.thermal)) {
    if (!std::isfinite(finite->beta_omega) || finite->beta_omega <= 0.0)
      throw DomainError("beta_omega must be finite and positive");
  }
}

double CouplingVector::magnitude() const {
  double sum = 0.0;
  for (double c : components) sum += c * c;
  return std::sqrt(sum);
}

CouplingVector coupling_vector(const ModelSpec& spec) {
  CouplingVector out;
  std::visit(overloaded{
                 [&](const MultimodeDicke12& m) {
                   out.components = m.gamma;
                   for (double gp : m.gamma_prime) out.components.push_back(checked_sqrt(gp, "gamma_prime"));
                 },
                 [&](const RabiStarkHubbard& m) {
                   out.components = {m.gamma, checked_sqrt(m.j_tilde, "j_tilde"),
                                     checked_sqrt(m.u_tilde, "u_tilde")};
                 },
                 [&](const AnisotropicRabiStark& m) {
                   out.components = {m.gamma1, m.gamma2, checked_sqrt(m.u_tilde, "u_tilde")};
                 },
             },
             spec.model);
  return out;
}

ModelSpec with_coupling(const ModelSpec& prototype, std::span<const double> c) {
  ModelSpec out = prototype;
  std::visit(overloaded{
                 [&](MultimodeDicke12& m) {
                   const std::size_t modes = m.mode_count();
                   if (c.size() != 2 * modes) throw DimensionMismatch("coupling vector length must be 2M");
                   for (std::size_t i = 0; i < modes; ++i) {
                     m.gamma[i] = c[i];
                     m.gamma_prime[i] = c[modes + i] * c[modes + i];
                   }
                 },
                 [&](RabiStarkHubbard& m) {
                   if (c.size() != 3) throw DimensionMismatch("coupling vector length must be 3");
                   m.gamma = c[0];
                   m.j_tilde = c[1] * c[1];
                   m.u_tilde = c[2] * c[2];
                 },
                 [&](AnisotropicRabiStark& m) {
                   if (c.size() != 3) throw DimensionMismatch("coupling vector length must be 3");
                   m.gamma1 = c[0];
                   m.gamma2 = c[1];
                   m.u_tilde = c[2] * c[2];
                 },
             },
             out.model);
  return out;
}

Stability stability_check(const ModelSpec& spec) {
  Stability out;
  std::visit(overloaded{
                 [&](const MultimodeDicke12& m) {
                   out.margin = 1.0;
                   std::size_t worst = 0;
                   for (std::size_t i = 0; i < m.gamma_prime.size(); ++i) {
                     const double slack = 1.0 - m.gamma_prime[i];
                     if (i == 0 || slack < out.margin) {
                       out.margin = slack;
                       worst = i;
                     }
                   }
                   if (!(out.margin > 0.0)) {
                     out.stable = false;
                     out.reason = format_slack(("1 - gamma_prime[" + std::to_string(worst) + "]").c_str(),
                                               out.margin);
                   }
                 },
                 [&](const RabiStarkHubbard& m) {
                   out.margin = 1.0 - m.j_tilde - m.u_tilde;
                   if (!(out.margin > 0.0)) {
                     out.stable = false;
                     out.reason = format_slack("1 - j_tilde - u_tilde", out.margin);
                   }
                 },
                 [&](const AnisotropicRabiStark& m) {
                   out.margin = 1.0 - m.u_tilde;
                   if (!(out.margin > 0.0)) {
                     out.stable = false;
                     out.reason = format_slack("1 - u_tilde", out.margin);
                   }
                 },
             },
             spec.model);
  return out;
}

}  // namespace spt
