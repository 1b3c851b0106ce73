#include "spt/landau.hpp"

#include <cmath>

#include "spt/errors.hpp"

namespace spt {

CoherentPoint CoherentPoint::zeros(std::size_t modes) {
  return CoherentPoint{std::vector<double>(modes, 0.0), std::vector<double>(modes, 0.0)};
}

CoherentPoint CoherentPoint::from_flat(std::span<const double> z) {
  if (z.size() % 2 != 0) throw DimensionMismatch("flat coherent point must have even length");
  const std::size_t m = z.size() / 2;
  return CoherentPoint{std::vector<double>(z.begin(), z.begin() + m),
                       std::vector<double>(z.begin() + m, z.end())};
}

std::vector<double> CoherentPoint::flat() const {
  std::vector<double> out(u);
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

double CoherentPoint::norm2() const {
  double sum = 0.0;
  for (double x : u) sum += x * x;
  for (double x : v) sum += x * x;
  return sum;
}

LandauPotential::LandauPotential(const ModelSpec& model, Tag) : model_(model) {
  validate(model_);
  modes_ = model_.mode_count();
  if (const auto* finite = std::get_if<FiniteTemperature>(&model_.thermal)) beta_ = finite->beta_omega;
}

LandauPotential::LandauPotential(const ModelSpec& model) : LandauPotential(model, Tag{}) {
  const Stability st = stability_check(model_);
  if (!st.stable) throw UnstableModel("Landau potential unbounded below: " + st.reason);
}

LandauPotential LandauPotential::unchecked(const ModelSpec& model) { return LandauPotential(model, Tag{}); }

void LandauPotential::evaluate(std::span<const double> z, double& q, double& d_minus_one, double* grad_q,
                               double* grad_d) const {
  if (z.size() != 2 * modes_) throw DimensionMismatch("coherent point dimension does not match model");

  if (const auto* m = std::get_if<MultimodeDicke12>(&model_.model)) {
    const std::size_t n = modes_;
    double xi = 0.0;
    q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = z[i];
      const double v = z[n + i];
      xi += m->gamma[i] * u + m->gamma_prime[i] * (u * u - v * v);
      q += u * u + v * v;
    }
    xi *= 2.0;
    d_minus_one = xi * xi;
    if (grad_q) {
      for (std::size_t i = 0; i < 2 * n; ++i) grad_q[i] = 2.0 * z[i];
      for (std::size_t i = 0; i < n; ++i) {
        grad_d[i] = 4.0 * xi * (m->gamma[i] + 2.0 * m->gamma_prime[i] * z[i]);
        grad_d[n + i] = -8.0 * xi * m->gamma_prime[i] * z[n + i];
      }
    }
    return;
  }

  const double u = z[0];
  const double v = z[1];
  const double s = u * u + v * v;
  double stark = 0.0;
  double gu2 = 0.0;  // squared couplings of the u and v quadratures
  double gv2 = 0.0;
  double hop = 0.0;
  if (const auto* m = std::get_if<RabiStarkHubbard>(&model_.model)) {
    stark = m->u_tilde;
    gu2 = m->gamma * m->gamma;
    hop = m->j_tilde;
  } else {
    const auto& a = std::get<AnisotropicRabiStark>(model_.model);
    stark = a.u_tilde;
    gu2 = a.gamma1 * a.gamma1;
    gv2 = a.gamma2 * a.gamma2;
  }
  q = (1.0 - hop) * u * u + v * v;
  d_minus_one = 4.0 * stark * s + 4.0 * stark * stark * s * s + 4.0 * gu2 * u * u + 4.0 * gv2 * v * v;
  if (grad_q) {
    grad_q[0] = 2.0 * (1.0 - hop) * u;
    grad_q[1] = 2.0 * v;
    const double lin = 8.0 * stark * (1.0 + 2.0 * stark * s);
    grad_d[0] = (lin + 8.0 * gu2) * u;
    grad_d[1] = (lin + 8.0 * gv2) * v;
  }
}

// G(E) - G(1) for E = sqrt(1 + d_minus_one).
double LandauPotential::g_excess(double d_minus_one) const {
  const double e = std::sqrt(1.0 + d_minus_one);
  const double half_shift = 0.5 * d_minus_one / (e + 1.0);
  if (beta_ == 0.0) return half_shift;
  return half_shift + (std::log1p(std::exp(-beta_ * e)) - std::log1p(std::exp(-beta_))) / beta_;
}

double LandauPotential::origin_value() const {
  if (beta_ == 0.0) return -0.5;
  // ln[2 cosh(x)] = |x| + ln(1 + e^{-2|x|})
  return -(0.5 + std::log1p(std::exp(-beta_)) / beta_);
}

double LandauPotential::excess(std::span<const double> z) const {
  double q = 0.0;
  double dm1 = 0.0;
  evaluate(z, q, dm1, nullptr, nullptr);
  return q - g_excess(dm1);
}

double LandauPotential::value(std::span<const double> z) const { return origin_value() + excess(z); }

void LandauPotential::gradient(std::span<const double> z, std::span<double> out) const {
  const std::size_t n = dimension();
  if (out.size() != n) throw DimensionMismatch("gradient buffer has wrong length");
  double gq[64];
  double gd[64];
  std::vector<double> heap;
  double* pq = gq;
  double* pd = gd;
  if (n > 64) {
    heap.resize(2 * n);
    pq = heap.data();
    pd = heap.data() + n;
  }
  double q = 0.0;
  double dm1 = 0.0;
  evaluate(z, q, dm1, pq, pd);
  const double e = std::sqrt(1.0 + dm1);
  const double g_prime = beta_ == 0.0 ? 0.5 : 0.5 * std::tanh(0.5 * beta_ * e);
  const double scale = g_prime / (2.0 * e);
  for (std::size_t i = 0; i < n; ++i) out[i] = pq[i] - scale * pd[i];
}

double LandauPotential::xi(std::span<const double> z) const {
  const auto* m = std::get_if<MultimodeDicke12>(&model_.model);
  if (!m) return 0.0;
  if (z.size() != 2 * modes_) throw DimensionMismatch("coherent point dimension does not match model");
  double xi = 0.0;
  for (std::size_t i = 0; i < modes_; ++i) {
    const double u = z[i];
    const double v = z[modes_ + i];
    xi += m->gamma[i] * u + m->gamma_prime[i] * (u * u - v * v);
  }
  return 2.0 * xi;
}

PotentialValue potential(const ModelSpec& model, const CoherentPoint& z) {
  const LandauPotential landau(model);
  if (z.v.size() != z.u.size()) throw DimensionMismatch("u and v must have the same length");
  const auto flat = z.flat();
  PotentialValue out;
  out.phi = landau.value(flat);
  if (model.family() == ModelFamily::multimode_dicke) out.xi = landau.xi(flat);
  return out;
}

std::vector<double> gradient(const ModelSpec& model, const CoherentPoint& z) {
  const LandauPotential landau(model);
  if (z.v.size() != z.u.size()) throw DimensionMismatch("u and v must have the same length");
  const auto flat = z.flat();
  std::vector<double> out(flat.size());
  landau.gradient(flat, out);
  return out;
}

double coupling_virial(const ModelSpec& model, const CoherentPoint& z) {
  const auto flat = z.flat();
  const auto lambda = coupling_vector(model).components;
  double sum = 0.0;
  std::vector<double> probe = lambda;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] == 0.0) continue;
    const double h = 1e-5 * std::abs(lambda[i]);
    probe[i] = lambda[i] + h;
    const double up = LandauPotential::unchecked(with_coupling(model, probe)).value(flat);
    probe[i] = lambda[i] - h;
    const double down = LandauPotential::unchecked(with_coupling(model, probe)).value(flat);
    probe[i] = lambda[i];
    sum += lambda[i] * (up - down) / (2.0 * h);
  }
  return sum;
}

double radial_identity_residual(const ModelSpec& model, const CoherentPoint& z) {
  const LandauPotential landau(model);
  const auto flat = z.flat();
  std::vector<double> grad(flat.size());
  landau.gradient(flat, grad);
  double z_dot_grad = 0.0;
  for (std::size_t i = 0; i < flat.size(); ++i) z_dot_grad += flat[i] * grad[i];
  return std::abs(z_dot_grad - 2.0 * z.norm2() - coupling_virial(model, z));
}

}  // namespace spt
