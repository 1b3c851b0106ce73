#include "spt/phase_mapper.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

#include "spt/errors.hpp"
#include "spt/parallel.hpp"

namespace spt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_equal(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); });
}

double stability_limit_along(const ModelSpec& prototype, std::span<const double> d) {
  switch (prototype.family()) {
    case ModelFamily::multimode_dicke: {
      const std::size_t m = prototype.mode_count();
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s = std::max(s, d[m + i]);
      return s > 0.0 ? 1.0 / s : kInf;
    }
    case ModelFamily::rabi_stark_hubbard: {
      const double s = std::sqrt(d[1] * d[1] + d[2] * d[2]);
      return s > 0.0 ? 1.0 / s : kInf;
    }
    case ModelFamily::anisotropic_rabi_stark:
      return d[2] > 0.0 ? 1.0 / d[2] : kInf;
  }
  return kInf;
}

std::vector<double> at(std::span<const double> origin, std::span<const double> dir, double t) {
  std::vector<double> out(dir.size());
  for (std::size_t i = 0; i < dir.size(); ++i) out[i] = origin[i] + t * dir[i];
  return out;
}

double euclid(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Scans t in [t_lo, t_hi] for the first superradiant point and refines it.
void trace(const std::function<ModelSpec(double)>& model_at, double t_lo, double t_hi, std::size_t modes,
           const BoundaryOptions& opt, BoundaryCrossing& out) {
  out.scanned_max = t_hi;
  out.z_c = CoherentPoint::zeros(modes);
  auto classify_at = [&](double t) { return classify(model_at(t), opt.minimize); };
  auto superradiant_at = [&](double t) { return is_superradiant(classify_at(t).phase); };

  if (superradiant_at(t_lo)) return;
  const int samples = std::max(opt.coarse_samples, 1);
  double lo = t_lo;
  double hi = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1; k <= samples; ++k) {
    const double t = t_lo + (t_hi - t_lo) * k / samples;
    if (superradiant_at(t)) {
      hi = t;
      break;
    }
    lo = t;
  }
  if (std::isnan(hi)) return;

  while (hi - lo > opt.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (superradiant_at(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double t_c = 0.5 * (lo + hi);
  out.critical_t = t_c;

  // Extrapolate the superradiant branch linearly back to t_c: |z|^2 is linear
  // in the distance for a continuous onset, so a second-order transition
  // extrapolates to zero.
  const double dt = opt.probe_offset * std::max(std::abs(hi), 1e-12);
  const PhasePoint p1 = classify_at(hi + dt);
  const PhasePoint p2 = classify_at(hi + 2.0 * dt);
  double zc2 = 0.0;
  if (is_superradiant(p1.phase) && is_superradiant(p2.phase)) {
    const double w = (hi + dt - t_c) / dt;
    zc2 = p1.order_parameter + (p1.order_parameter - p2.order_parameter) * w;
    if (zc2 >= opt.order_threshold) {
      CoherentPoint zc = p1.z_min;
      for (std::size_t i = 0; i < zc.u.size(); ++i) {
        zc.u[i] += (p1.z_min.u[i] - p2.z_min.u[i]) * w;
        zc.v[i] += (p1.z_min.v[i] - p2.z_min.v[i]) * w;
      }
      out.z_c = zc;
    }
  } else {
    zc2 = classify_at(hi).order_parameter;
  }
  out.zc_norm2 = std::max(zc2, 0.0);
  out.transition_order = out.zc_norm2 >= opt.order_threshold ? TransitionOrder::first : TransitionOrder::second;
  if (out.transition_order == TransitionOrder::second) out.z_c = CoherentPoint::zeros(modes);
}

BoundaryCrossing trace_line(const ModelSpec& prototype, std::span<const double> origin, std::span<const double> dir,
                            double t_max, const BoundaryOptions& opt) {
  const std::size_t n = coupling_vector(prototype).components.size();
  if (dir.size() != n || origin.size() != n)
    throw DimensionMismatch("ray dimension does not match the coupling vector");
  BoundaryCrossing out;
  out.origin.assign(origin.begin(), origin.end());
  out.direction.assign(dir.begin(), dir.end());
  trace([&](double t) { return with_coupling(prototype, at(origin, dir, t)); }, 0.0, t_max,
        prototype.mode_count(), opt, out);
  if (out.transition_order != TransitionOrder::none) out.critical_magnitude = euclid(at(origin, dir, out.critical_t));
  return out;
}

}  // namespace

std::string_view phase_label(Phase phase) {
  switch (phase) {
    case Phase::NP:
      return "NP";
    case Phase::SP:
      return "SP";
    case Phase::SP_u:
      return "SP_u";
    case Phase::SP_v:
      return "SP_v";
    case Phase::unstable:
      return "unstable";
  }
  return "unknown";
}

std::string_view order_label(TransitionOrder order) {
  switch (order) {
    case TransitionOrder::first:
      return "first";
    case TransitionOrder::second:
      return "second";
    case TransitionOrder::none:
      return "none";
  }
  return "unknown";
}

PhasePoint classify(const ModelSpec& model, const MinimizeOptions& options) {
  validate(model);
  PhasePoint out;
  out.coupling = coupling_vector(model);
  out.z_min = CoherentPoint::zeros(model.mode_count());
  const Stability st = stability_check(model);
  if (!st.stable) {
    out.phase = Phase::unstable;
    out.note = st.reason;
    out.free_energy = -kInf;
    return out;
  }
  const MinimizeResult r = minimize(model, options);
  out.z_min = r.z_min;
  out.order_parameter = r.order_parameter;
  out.free_energy = r.phi_min;
  if (r.order_parameter < kNormalPhaseThreshold) {
    out.phase = Phase::NP;
    return out;
  }
  out.phase = Phase::SP;
  if (const auto* a = std::get_if<AnisotropicRabiStark>(&model.model)) {
    if (a->gamma1 == a->gamma2) {
      out.degenerate = true;
      return out;
    }
    const double u2 = r.z_min.u[0] * r.z_min.u[0];
    const double v2 = r.z_min.v[0] * r.z_min.v[0];
    if (v2 < kNormalPhaseThreshold && u2 > kNormalPhaseThreshold) out.phase = Phase::SP_u;
    if (u2 < kNormalPhaseThreshold && v2 > kNormalPhaseThreshold) out.phase = Phase::SP_v;
  }
  return out;
}

BoundaryCrossing radial_boundary(const ModelSpec& prototype, std::span<const double> direction,
                                 double max_magnitude, const BoundaryOptions& options) {
  const double len = euclid(direction);
  if (!(len > 0.0)) throw DomainError("direction must be nonzero");
  std::vector<double> unit(direction.size());
  for (std::size_t i = 0; i < direction.size(); ++i) {
    if (direction[i] < 0.0) throw DomainError("radial direction components must be nonnegative");
    unit[i] = direction[i] / len;
  }
  if (!(max_magnitude > 0.0)) throw DomainError("max_magnitude must be positive");
  const std::vector<double> origin(unit.size(), 0.0);
  const double limit = stability_limit_along(prototype, unit);
  const double t_max = std::min(max_magnitude, limit * (1.0 - 1e-9));
  return trace_line(prototype, origin, unit, t_max, options);
}

BoundaryCrossing line_boundary(const ModelSpec& prototype, std::span<const double> origin,
                               std::span<const double> direction, double max_t, const BoundaryOptions& options) {
  if (!(max_t > 0.0)) throw DomainError("max_t must be positive");
  return trace_line(prototype, origin, direction, max_t, options);
}

BoundaryCrossing parameter_boundary(const ModelSpec& base, std::string_view parameter, double min, double max,
                                    const BoundaryOptions& options) {
  if (!(max > min)) throw DomainError("parameter range must have max > min");
  apply_parameter(base, parameter, min);
  BoundaryCrossing out;
  out.origin = coupling_vector(apply_parameter(base, parameter, min)).components;
  trace([&](double t) { return apply_parameter(base, parameter, t); }, min, max, base.mode_count(), options, out);
  if (out.transition_order != TransitionOrder::none)
    out.critical_magnitude = coupling_vector(apply_parameter(base, parameter, out.critical_t)).magnitude();
  return out;
}

AnalyticBoundary analytic_boundary(const ModelSpec& model) {
  validate(model);
  AnalyticBoundary out;
  if (const auto* m = std::get_if<MultimodeDicke12>(&model.model)) {
    if (!all_equal(m->gamma_prime))
      throw DomainError("closed-form boundary needs equal gamma_prime; use radial_boundary");
    double g2 = 0.0;
    for (double g : m->gamma) g2 += g * g;
    const double gp = m->gamma_prime.front();
    out.residual = g2 + gp * gp - 1.0;
    out.critical_gamma = gp < 1.0 ? std::sqrt(1.0 - gp * gp) : std::numeric_limits<double>::quiet_NaN();
  } else if (const auto* m = std::get_if<RabiStarkHubbard>(&model.model)) {
    out.residual = m->gamma * m->gamma + m->j_tilde + m->u_tilde - 1.0;
    const double rest = 1.0 - m->j_tilde - m->u_tilde;
    out.critical_gamma = rest > 0.0 ? std::sqrt(rest) : std::numeric_limits<double>::quiet_NaN();
  } else {
    const auto& a = std::get<AnisotropicRabiStark>(model.model);
    const double g = std::max(a.gamma1, a.gamma2);
    out.residual = g * g + a.u_tilde - 1.0;
    out.critical_gamma = a.u_tilde < 1.0 ? std::sqrt(1.0 - a.u_tilde) : std::numeric_limits<double>::quiet_NaN();
  }
  out.superradiant = out.residual > 0.0;
  return out;
}

double analytic_radial_critical(const ModelSpec& prototype, std::span<const double> direction) {
  const double len = euclid(direction);
  if (!(len > 0.0)) throw DomainError("direction must be nonzero");
  std::vector<double> d(direction.begin(), direction.end());
  for (double& x : d) x /= len;
  const double limit = stability_limit_along(prototype, d);
  double t = kInf;
  switch (prototype.family()) {
    case ModelFamily::multimode_dicke: {
      const std::size_t m = prototype.mode_count();
      const std::vector<double> sq(d.begin() + static_cast<std::ptrdiff_t>(m), d.end());
      if (!all_equal(sq)) throw DomainError("closed-form boundary needs equal gamma_prime along the ray");
      double a = 0.0;
      for (std::size_t i = 0; i < m; ++i) a += d[i] * d[i];
      const double b = std::pow(sq.front(), 4);
      // t^2 a + t^4 b = 1
      if (b > 0.0) {
        t = std::sqrt(2.0 / (a + std::sqrt(a * a + 4.0 * b)));
      } else if (a > 0.0) {
        t = 1.0 / std::sqrt(a);
      }
      break;
    }
    case ModelFamily::rabi_stark_hubbard:
      t = 1.0;
      break;
    case ModelFamily::anisotropic_rabi_stark: {
      const double g = std::max(d[0], d[1]);
      const double s = g * g + d[2] * d[2];
      if (s > 0.0) t = 1.0 / std::sqrt(s);
      break;
    }
  }
  return t < limit ? t : kInf;
}

ClosedFormOrder closed_form_order_parameter(const ModelSpec& model) {
  validate(model);
  ClosedFormOrder out;
  if (const auto* m = std::get_if<MultimodeDicke12>(&model.model)) {
    if (!std::all_of(m->gamma_prime.begin(), m->gamma_prime.end(), [](double g) { return g == 0.0; }))
      throw DomainError("closed-form Dicke order parameter requires gamma_prime = 0");
    double g2 = 0.0;
    for (double g : m->gamma) g2 += g * g;
    out.per_mode.assign(m->mode_count(), 0.0);
    if (g2 > 1.0) {
      const double factor = (1.0 - 1.0 / (g2 * g2)) / 4.0;
      for (std::size_t i = 0; i < m->mode_count(); ++i) out.per_mode[i] = factor * m->gamma[i] * m->gamma[i];
    }
    for (double x : out.per_mode) out.total += x;
    return out;
  }
  if (const auto* m = std::get_if<RabiStarkHubbard>(&model.model)) {
    if (!stability_check(model).stable) throw UnstableModel("closed form requires a stable model");
    const double num = m->gamma * m->gamma + m->j_tilde + m->u_tilde - 1.0;
    const double den = (1.0 - m->j_tilde + m->u_tilde) * (1.0 - m->j_tilde - m->u_tilde);
    out.total = num > 0.0 ? num / den : 0.0;
    out.per_mode = {out.total};
    return out;
  }
  const auto& a = std::get<AnisotropicRabiStark>(model.model);
  if (a.gamma1 != a.gamma2) throw DomainError("closed-form anisotropic order parameter requires gamma1 = gamma2");
  if (!stability_check(model).stable) throw UnstableModel("closed form requires a stable model");
  const double num = a.gamma1 * a.gamma1 + a.u_tilde - 1.0;
  out.total = num > 0.0 ? num / ((1.0 - a.u_tilde) * (1.0 + a.u_tilde)) : 0.0;
  out.per_mode = {out.total};
  return out;
}

FirstOrderJump first_order_jump(const ModelSpec& model, double boundary_tolerance) {
  validate(model);
  const auto* m = std::get_if<MultimodeDicke12>(&model.model);
  if (!m) throw DomainError("first_order_jump applies to the Dicke family");
  if (!all_equal(m->gamma_prime)) throw DomainError("first_order_jump requires equal gamma_prime");
  const double gp = m->gamma_prime.front();
  if (!(gp < 1.0)) throw DomainError("first_order_jump requires gamma_prime < 1");
  const AnalyticBoundary b = analytic_boundary(model);
  if (std::abs(b.residual) > boundary_tolerance) throw DomainError("coupling is not on the phase boundary");
  FirstOrderJump out;
  out.u_c.resize(m->mode_count());
  for (std::size_t i = 0; i < m->mode_count(); ++i) {
    out.u_c[i] = m->gamma[i] * gp / (1.0 - gp * gp);
    out.norm2 += out.u_c[i] * out.u_c[i];
  }
  return out;
}

double SweepAxis::value(int index) const {
  if (count <= 1) return min;
  return min + (max - min) * index / (count - 1);
}

ModelSpec apply_parameter(const ModelSpec& model, std::string_view name, double value) {
  ModelSpec out = model;
  if (auto* m = std::get_if<MultimodeDicke12>(&out.model)) {
    const auto open = name.find('[');
    if (open == std::string_view::npos || name.back() != ']')
      throw ConfigError("Dicke parameters are gamma[i] or gamma_prime[i]: '" + std::string(name) + "'");
    const std::string_view base = name.substr(0, open);
    const std::string_view index = name.substr(open + 1, name.size() - open - 2);
    std::vector<double>* target = nullptr;
    if (base == "gamma") target = &m->gamma;
    if (base == "gamma_prime") target = &m->gamma_prime;
    if (!target) throw ConfigError("unknown Dicke parameter '" + std::string(name) + "'");
    if (index == "*") {
      std::fill(target->begin(), target->end(), value);
      return out;
    }
    std::size_t i = 0;
    const auto [ptr, ec] = std::from_chars(index.data(), index.data() + index.size(), i);
    if (ec != std::errc{} || ptr != index.data() + index.size() || i >= target->size())
      throw ConfigError("bad mode index in '" + std::string(name) + "'");
    (*target)[i] = value;
    return out;
  }
  if (auto* m = std::get_if<RabiStarkHubbard>(&out.model)) {
    if (name == "gamma") {
      m->gamma = value;
    } else if (name == "j_tilde") {
      m->j_tilde = value;
    } else if (name == "u_tilde") {
      m->u_tilde = value;
    } else {
      throw ConfigError("unknown rabi_stark_hubbard parameter '" + std::string(name) + "'");
    }
    return out;
  }
  auto& a = std::get<AnisotropicRabiStark>(out.model);
  if (name == "gamma1") {
    a.gamma1 = value;
  } else if (name == "gamma2") {
    a.gamma2 = value;
  } else if (name == "u_tilde") {
    a.u_tilde = value;
  } else {
    throw ConfigError("unknown anisotropic_rabi_stark parameter '" + std::string(name) + "'");
  }
  return out;
}

std::vector<SweepResult> sweep(const ModelSpec& base, const std::vector<SweepAxis>& axes, int workers,
                               const MinimizeOptions& options) {
  std::size_t total = 1;
  for (const auto& axis : axes) {
    if (axis.count < 0) throw ConfigError("axis '" + axis.parameter + "' has negative count");
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max))
      throw ConfigError("axis '" + axis.parameter + "' has non-finite bounds");
    apply_parameter(base, axis.parameter, axis.min);  // name check
    total *= static_cast<std::size_t>(axis.count);
    if (total > 1'000'000) throw ConfigError("sweep grid exceeds 1e6 points");
  }
  if (axes.empty()) total = 1;

  return parallel_map<SweepResult>(total, workers, [&](std::size_t flat) {
    SweepResult r;
    r.axis_values.resize(axes.size());
    ModelSpec model = base;
    std::size_t rem = flat;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto count = static_cast<std::size_t>(axes[a].count);
      const int idx = static_cast<int>(rem % count);
      rem /= count;
      r.axis_values[a] = axes[a].value(idx);
    }
    for (std::size_t a = 0; a < axes.size(); ++a) model = apply_parameter(model, axes[a].parameter, r.axis_values[a]);
    try {
      r.point = classify(model, options);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    return r;
  });
}

}  // namespace spt
