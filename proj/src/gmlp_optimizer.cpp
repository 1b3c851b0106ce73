#include "spt/gmlp_optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "spt/errors.hpp"

namespace spt {

namespace {

constexpr double kNpThreshold = 1e-10;

// Coordinates minimize actually moves, as indices into the flat z.
std::vector<std::size_t> search_coordinates(const ModelSpec& model) {
  const std::size_t modes = model.mode_count();
  std::vector<std::size_t> active;
  switch (model.family()) {
    case ModelFamily::multimode_dicke:
    case ModelFamily::rabi_stark_hubbard:
      for (std::size_t i = 0; i < modes; ++i) active.push_back(i);
      break;
    case ModelFamily::anisotropic_rabi_stark:
      active = {0, 1};
      break;
  }
  return active;
}

class ReducedProblem {
 public:
  ReducedProblem(const LandauPotential& landau, std::vector<std::size_t> active)
      : landau_(landau), active_(std::move(active)), full_(landau.dimension(), 0.0),
        full_grad_(landau.dimension(), 0.0) {}

  std::size_t dimension() const { return active_.size(); }

  std::vector<double> embed(std::span<const double> x) const {
    std::vector<double> z(landau_.dimension(), 0.0);
    for (std::size_t i = 0; i < active_.size(); ++i) z[active_[i]] = x[i];
    return z;
  }

  double excess(std::span<const double> x) const {
    for (std::size_t i = 0; i < active_.size(); ++i) full_[active_[i]] = x[i];
    return landau_.excess(full_);
  }

  void gradient(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i < active_.size(); ++i) full_[active_[i]] = x[i];
    landau_.gradient(full_, full_grad_);
    for (std::size_t i = 0; i < active_.size(); ++i) g[i] = full_grad_[active_[i]];
  }

 private:
  const LandauPotential& landau_;
  std::vector<std::size_t> active_;
  mutable std::vector<double> full_;
  mutable std::vector<double> full_grad_;
};

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

template <class GradFn>
Eigen::MatrixXd fd_hessian(GradFn&& grad, std::span<const double> x, double rel_step) {
  const std::size_t d = x.size();
  Eigen::MatrixXd h(d, d);
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> gp(d), gm(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double step = rel_step * std::max(1.0, std::abs(x[j]));
    probe[j] = x[j] + step;
    grad(probe, gp);
    probe[j] = x[j] - step;
    grad(probe, gm);
    probe[j] = x[j];
    for (std::size_t i = 0; i < d; ++i) h(i, j) = (gp[i] - gm[i]) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

struct Polished {
  std::vector<double> x;
  double f = 0.0;
  bool converged = false;
};

// Saddle-free Newton: |eigenvalues| of the local Hessian with Armijo backtracking.
Polished polish(const ReducedProblem& prob, std::vector<double> x, const MinimizeOptions& opt) {
  const std::size_t d = prob.dimension();
  std::vector<double> g(d), trial(d), p(d);
  double f = prob.excess(x);
  prob.gradient(x, g);
  auto grad_fn = [&prob](std::span<const double> at, std::span<double> out) { prob.gradient(at, out); };

  for (int it = 0; it < opt.max_polish_iterations; ++it) {
    const double gnorm = norm(g);
    if (gnorm < opt.gradient_tolerance) return {x, f, true};

    const Eigen::MatrixXd h = fd_hessian(grad_fn, x, 1e-6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const Eigen::VectorXd lam = eig.eigenvalues();
    const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1.0);
    Eigen::Map<const Eigen::VectorXd> gv(g.data(), static_cast<Eigen::Index>(d));
    const Eigen::VectorXd coeff = eig.eigenvectors().transpose() * gv;
    Eigen::VectorXd step = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
      const double curvature = std::max(std::abs(lam(k)), 1e-10 * scale);
      step -= eig.eigenvectors().col(k) * (coeff(k) / curvature);
    }
    for (std::size_t i = 0; i < d; ++i) p[i] = step(static_cast<Eigen::Index>(i));
    double slope = 0.0;
    for (std::size_t i = 0; i < d; ++i) slope += g[i] * p[i];
    if (!(slope < 0.0)) {
      for (std::size_t i = 0; i < d; ++i) p[i] = -g[i];
      slope = -gnorm * gnorm;
    }

    double alpha = 1.0;
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 80; ++ls) {
      for (std::size_t i = 0; i < d; ++i) trial[i] = x[i] + alpha * p[i];
      f_new = prob.excess(trial);
      if (f_new <= f + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No representable decrease along a descent direction: numerical floor.
      return {x, f, gnorm < 1e-6};
    }
    const double moved = alpha * norm(p);
    const double decrease = f - f_new;
    x = trial;
    f = f_new;
    prob.gradient(x, g);
    if (decrease < opt.decrease_tolerance && moved < opt.decrease_tolerance) return {x, f, true};
  }
  return {x, f, norm(g) < opt.gradient_tolerance};
}

// Local minima of f along a sampled one-dimensional curve.
template <class CurveFn>
void scan_curve(const ReducedProblem& prob, CurveFn&& curve, double half_width, int points,
                std::vector<std::vector<double>>& starts) {
  std::vector<double> fs;
  std::vector<std::vector<double>> xs;
  for (int k = 0; k < points; ++k) {
    const double t = -half_width + 2.0 * half_width * k / (points - 1);
    std::vector<double> x;
    if (!curve(t, x)) {
      fs.push_back(std::numeric_limits<double>::quiet_NaN());
      xs.emplace_back();
      continue;
    }
    fs.push_back(prob.excess(x));
    xs.push_back(std::move(x));
  }
  for (std::size_t k = 0; k < fs.size(); ++k) {
    if (std::isnan(fs[k])) continue;
    const bool left_ok = k == 0 || std::isnan(fs[k - 1]) || fs[k] <= fs[k - 1];
    const bool right_ok = k + 1 == fs.size() || std::isnan(fs[k + 1]) || fs[k] <= fs[k + 1];
    if (left_ok && right_ok) starts.push_back(xs[k]);
  }
}

// Stationary u^2 of (1 - J) u^2 - (1/2) sqrt((1 + 2 U u^2)^2 + 4 g^2 u^2), or
// a negative value when only the origin is stationary.
double stark_stationary_x(double g, double j, double u) {
  const double p = u + g * g;
  const double k = (1.0 - j) * (1.0 - j);
  if (!(k - u * u > 0.0)) return -1.0;
  const double c = (p * p - k) / (k - u * u);
  if (!(c > 0.0)) return -1.0;
  return c / (2.0 * (p + std::sqrt(p * p + u * u * c)));
}

std::vector<std::vector<double>> candidate_starts(const ModelSpec& model, const ReducedProblem& prob,
                                                  const MinimizeOptions& opt) {
  std::vector<std::vector<double>> starts;
  const std::size_t d = prob.dimension();
  starts.emplace_back(d, 0.0);
  const double w = opt.grid_half_width;

  if (const auto* m = std::get_if<MultimodeDicke12>(&model.model)) {
    const std::size_t modes = m->mode_count();
    const std::size_t ref =
        static_cast<std::size_t>(std::max_element(m->gamma.begin(), m->gamma.end()) - m->gamma.begin());
    const double g_ref = m->gamma[ref];
    if (g_ref > 0.0) {
      // Stationarity ties every mode to the reference mode amplitude.
      auto ratio_curve = [&](double t, std::vector<double>& x) {
        x.assign(modes, 0.0);
        for (std::size_t nu = 0; nu < modes; ++nu) {
          const double denom = g_ref + 2.0 * (m->gamma_prime[ref] - m->gamma_prime[nu]) * t;
          if (std::abs(denom) < 1e-12) return false;
          x[nu] = m->gamma[nu] * t / denom;
          if (std::abs(x[nu]) > 10.0 * w) return false;
        }
        return true;
      };
      scan_curve(prob, ratio_curve, w, opt.line_scan_points, starts);

      bool equal_two_photon = true;
      for (double gp : m->gamma_prime) equal_two_photon &= gp == m->gamma_prime[0];
      double gamma2 = 0.0;
      for (double g : m->gamma) gamma2 += g * g;
      if (equal_two_photon) {
        const double gp = m->gamma_prime[0];
        if (gp == 0.0 && gamma2 > 1.0) {
          const double c = std::sqrt((1.0 - 1.0 / (gamma2 * gamma2)) / 4.0);
          std::vector<double> x(modes);
          for (std::size_t nu = 0; nu < modes; ++nu) x[nu] = c * m->gamma[nu];
          starts.push_back(x);
          for (double& v : x) v = -v;
          starts.push_back(x);
        } else if (gp > 0.0) {
          // Nonzero roots of phi(u) = phi(0) along the ratio line.
          const double a = (1.0 - gp * gp) * gamma2;
          const double b = -2.0 * gp * g_ref * gamma2;
          const double c = (1.0 - gamma2) * g_ref * g_ref;
          const double disc = b * b - 4.0 * a * c;
          if (a > 0.0 && disc >= 0.0) {
            for (double sign : {-1.0, 1.0}) {
              const double t = (-b + sign * std::sqrt(disc)) / (2.0 * a);
              std::vector<double> x(modes);
              for (std::size_t nu = 0; nu < modes; ++nu) x[nu] = m->gamma[nu] / g_ref * t;
              starts.push_back(x);
            }
          }
        }
      }
    }
    if (modes > 1) {
      for (std::size_t axis = 0; axis < modes; ++axis) {
        auto axis_curve = [&](double t, std::vector<double>& x) {
          x.assign(modes, 0.0);
          x[axis] = t;
          return true;
        };
        scan_curve(prob, axis_curve, w, opt.line_scan_points, starts);
      }
    }
  } else if (const auto* m = std::get_if<RabiStarkHubbard>(&model.model)) {
    for (double x2 : {stark_stationary_x(m->gamma, m->j_tilde, m->u_tilde),
                      (m->gamma * m->gamma + m->j_tilde + m->u_tilde - 1.0) /
                          ((1.0 - m->j_tilde + m->u_tilde) * (1.0 - m->j_tilde - m->u_tilde))}) {
      if (x2 > 0.0 && std::isfinite(x2)) {
        starts.push_back({std::sqrt(x2)});
        starts.push_back({-std::sqrt(x2)});
      }
    }
  } else {
    const auto& a = std::get<AnisotropicRabiStark>(model.model);
    const double roots_den = (1.0 - a.u_tilde) * (1.0 + a.u_tilde);
    for (int axis = 0; axis < 2; ++axis) {
      const double g = axis == 0 ? a.gamma1 : a.gamma2;
      for (double x2 : {stark_stationary_x(g, 0.0, a.u_tilde), (g * g + a.u_tilde - 1.0) / roots_den}) {
        if (!(x2 > 0.0) || !std::isfinite(x2)) continue;
        std::vector<double> x(2, 0.0);
        x[static_cast<std::size_t>(axis)] = std::sqrt(x2);
        starts.push_back(x);
      }
    }
  }

  if (d <= opt.max_grid_dimension && opt.grid_points_per_axis > 1) {
    const int n = opt.grid_points_per_axis;
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
    std::vector<double> x(d);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rem = idx;
      for (std::size_t i = 0; i < d; ++i) {
        const int k = static_cast<int>(rem % static_cast<std::size_t>(n));
        rem /= static_cast<std::size_t>(n);
        x[i] = -w + 2.0 * w * k / (n - 1);
      }
      starts.push_back(x);
    }
  }
  return starts;
}

std::vector<CoherentPoint> symmetry_images(const ModelSpec& model, const CoherentPoint& z) {
  std::vector<CoherentPoint> out{z};
  if (const auto* m = std::get_if<MultimodeDicke12>(&model.model)) {
    const bool reflect = std::all_of(m->gamma_prime.begin(), m->gamma_prime.end(),
                                     [](double gp) { return gp == 0.0; });
    if (reflect) {
      CoherentPoint r = z;
      for (double& x : r.u) x = -x;
      for (double& x : r.v) x = -x;
      out.push_back(r);
    }
    return out;
  }
  for (double su : {1.0, -1.0}) {
    for (double sv : {1.0, -1.0}) {
      if (su == 1.0 && sv == 1.0) continue;
      out.push_back(CoherentPoint{{su * z.u[0]}, {sv * z.v[0]}});
    }
  }
  return out;
}

bool same_point(const CoherentPoint& a, const CoherentPoint& b, double tol) {
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    if (std::abs(a.u[i] - b.u[i]) > tol || std::abs(a.v[i] - b.v[i]) > tol) return false;
  }
  return true;
}

bool nonnegative(const CoherentPoint& z) {
  for (double x : z.u)
    if (x < 0.0) return false;
  for (double x : z.v)
    if (x < 0.0) return false;
  return true;
}

// Grid scan over the coordinates in `active`, no polish.
std::pair<std::vector<double>, double> grid_scan(const ReducedProblem& prob, double half_width, double step,
                                                 std::uint64_t max_points) {
  const std::size_t d = prob.dimension();
  const auto n_side = static_cast<std::int64_t>(std::floor(half_width / step + 1e-9));
  const std::uint64_t per_axis = static_cast<std::uint64_t>(2 * n_side + 1);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (total > max_points / per_axis) throw BudgetExceeded("grid scan exceeds point budget");
    total *= per_axis;
  }
  std::vector<double> x(d, 0.0), best(d, 0.0);
  double best_f = prob.excess(best);
  std::vector<std::int64_t> k(d, -n_side);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(k[i]) * step;
    const double f = prob.excess(x);
    if (f < best_f) {
      best_f = f;
      best = x;
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (++k[i] <= n_side) break;
      k[i] = -n_side;
    }
  }
  return {best, best_f};
}

}  // namespace

MinimizeResult minimize(const ModelSpec& model, const MinimizeOptions& opt) {
  const LandauPotential landau(model);
  const ReducedProblem prob(landau, search_coordinates(model));
  const auto starts = candidate_starts(model, prob, opt);

  std::vector<Polished> polished;
  polished.reserve(starts.size());
  for (const auto& s : starts) polished.push_back(polish(prob, s, opt));

  auto best_it = std::min_element(polished.begin(), polished.end(),
                                  [](const Polished& a, const Polished& b) { return a.f < b.f; });
  MinimizeResult out;
  out.starts = static_cast<int>(starts.size());
  if (!best_it->converged) {
    const double step = 2.0 * opt.grid_half_width / (prob.dimension() == 1 ? 20000.0 : 1000.0);
    auto [x, f] = grid_scan(prob, opt.grid_half_width, step, 5'000'000);
    Polished again = polish(prob, x, opt);
    polished.push_back(again.f < f ? again : Polished{x, f, false});
    best_it = std::min_element(polished.begin(), polished.end(),
                               [](const Polished& a, const Polished& b) { return a.f < b.f; });
    out.polish_converged = false;
  }
  const double best_f = best_it->f;

  std::vector<const Polished*> ties;
  for (const auto& p : polished) {
    if (p.f <= best_f + opt.tie_tolerance) ties.push_back(&p);
  }
  std::stable_sort(ties.begin(), ties.end(), [](const Polished* a, const Polished* b) { return a->f < b->f; });

  const bool origin_ties = best_f >= -opt.tie_tolerance;
  for (const Polished* t : ties) {
    const CoherentPoint z = CoherentPoint::from_flat(prob.embed(t->x));
    for (const auto& image : symmetry_images(model, z)) {
      const bool seen = std::any_of(out.degenerate_minima.begin(), out.degenerate_minima.end(),
                                    [&](const CoherentPoint& q) { return same_point(q, image, 1e-7); });
      if (!seen) out.degenerate_minima.push_back(image);
    }
  }

  CoherentPoint best = CoherentPoint::from_flat(prob.embed(best_it->x));
  if (origin_ties && best.norm2() < kNpThreshold) {
    best = CoherentPoint::zeros(model.mode_count());
  } else {
    for (const auto& image : symmetry_images(model, best)) {
      if (nonnegative(image)) {
        best = image;
        break;
      }
    }
  }
  out.z_min = best;
  out.phi_min = landau.value(best.flat());
  out.order_parameter = best.norm2();
  try {
    out.hessian_positive_definite = hessian_check(model, best).kind == HessianClass::positive_definite;
  } catch (const DomainError&) {
    out.hessian_positive_definite = false;
  }
  return out;
}

MinimizeResult brute_force_oracle(const ModelSpec& model, double box_half_width, double step,
                                  OracleSubspace subspace) {
  if (!(step > 0.0) || !(box_half_width > 0.0)) throw DomainError("grid step and half width must be positive");
  const LandauPotential landau(model);
  std::vector<std::size_t> active;
  if (subspace == OracleSubspace::full) {
    if (landau.dimension() > 4)
      throw DimensionMismatch(
          "brute-force oracle limited to dim(z) <= 4; scan the reduced subspace (v = 0, modes tied by "
          "the stationarity ratio) instead");
    for (std::size_t i = 0; i < landau.dimension(); ++i) active.push_back(i);
  } else {
    active = search_coordinates(model);
    if (active.size() > 4) throw DimensionMismatch("brute-force oracle limited to 4 scanned coordinates");
  }
  const ReducedProblem prob(landau, active);
  auto [x, f] = grid_scan(prob, box_half_width, step, 2'000'000'000ULL);
  (void)f;
  MinimizeResult out;
  out.z_min = CoherentPoint::from_flat(prob.embed(x));
  out.phi_min = landau.value(out.z_min.flat());
  out.order_parameter = out.z_min.norm2();
  out.degenerate_minima = {out.z_min};
  out.starts = 0;
  return out;
}

HessianReport hessian_check(const ModelSpec& model, const CoherentPoint& z, double singular_tolerance) {
  const LandauPotential landau(model);
  const auto flat = z.flat();
  std::vector<double> g(flat.size());
  landau.gradient(flat, g);
  if (norm(g) >= 1e-6) throw DomainError("hessian_check requires a stationary point (|grad| < 1e-6)");
  auto grad_fn = [&landau](std::span<const double> at, std::span<double> out) { landau.gradient(at, out); };
  const Eigen::MatrixXd h = fd_hessian(grad_fn, flat, 1e-5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h, Eigen::EigenvaluesOnly);
  HessianReport out;
  out.eigenvalues.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  const double lo = out.eigenvalues.front();
  if (lo > singular_tolerance) {
    out.kind = HessianClass::positive_definite;
  } else if (lo < -singular_tolerance) {
    out.kind = HessianClass::indefinite;
  } else {
    out.kind = HessianClass::singular;
  }
  return out;
}

}  // namespace spt
