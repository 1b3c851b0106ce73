#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "spt/cli_runner.hpp"
#include "spt/errors.hpp"

namespace spt::cli {

namespace {

using Keys = std::vector<std::string_view>;

int line_of(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  return m.line >= 0 ? m.line + 1 : 0;
}

class Parser {
 public:
  std::vector<Diagnostic> diags;

  void error(const YAML::Node& at, std::string message) {
    diags.push_back({Diagnostic::Severity::error, line_of(at), std::move(message)});
  }

  void check_keys(const YAML::Node& map, std::string_view section, const Keys& allowed) {
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
      std::string msg = "unknown key '" + key + "' in " + std::string(section);
      std::string_view best;
      std::size_t best_d = std::string::npos;
      for (auto cand : allowed) {
        const std::size_t d = edit_distance(key, cand);
        if (d < best_d) {
          best_d = d;
          best = cand;
        }
      }
      if (best_d <= std::max<std::size_t>(2, key.size() / 3)) msg += " (did you mean '" + std::string(best) + "'?)";
      error(kv.first, msg);
    }
  }

  bool is_map(const YAML::Node& node, std::string_view what) {
    if (node.IsMap()) return true;
    error(node, std::string(what) + " must be a mapping");
    return false;
  }

  std::optional<double> number(const YAML::Node& node, std::string_view what) {
    if (!node.IsScalar()) {
      error(node, std::string(what) + " must be a number");
      return std::nullopt;
    }
    try {
      const double x = node.as<double>();
      if (!std::isfinite(x)) throw YAML::Exception(node.Mark(), "non-finite");
      return x;
    } catch (const YAML::Exception&) {
      error(node, std::string(what) + " must be a finite number, got '" + node.Scalar() + "'");
      return std::nullopt;
    }
  }

  std::optional<long long> integer(const YAML::Node& node, std::string_view what) {
    if (!node.IsScalar()) {
      error(node, std::string(what) + " must be an integer");
      return std::nullopt;
    }
    try {
      return node.as<long long>();
    } catch (const YAML::Exception&) {
      error(node, std::string(what) + " must be an integer, got '" + node.Scalar() + "'");
      return std::nullopt;
    }
  }

  std::optional<std::string> text(const YAML::Node& node, std::string_view what) {
    if (!node.IsScalar()) {
      error(node, std::string(what) + " must be a string");
      return std::nullopt;
    }
    return node.Scalar();
  }

  /// Accepts a scalar or a sequence of numbers.
  std::optional<std::vector<double>> numbers(const YAML::Node& node, std::string_view what) {
    if (node.IsScalar()) {
      auto x = number(node, what);
      if (!x) return std::nullopt;
      return std::vector<double>{*x};
    }
    if (!node.IsSequence()) {
      error(node, std::string(what) + " must be a number or a list of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& item : node) {
      auto x = number(item, what);
      if (!x) return std::nullopt;
      out.push_back(*x);
    }
    return out;
  }

  void ranged(const YAML::Node& map, const char* key, double lo, double hi, bool open_lo, double& target) {
    if (!map[key]) return;
    auto x = number(map[key], key);
    if (!x) return;
    if ((open_lo ? !(*x > lo) : !(*x >= lo)) || *x > hi) {
      error(map[key], std::string(key) + " = " + format_double(*x) + " outside " + (open_lo ? "(" : "[") +
                          format_double(lo) + ", " + format_double(hi) + "]");
      return;
    }
    target = *x;
  }

  void ranged_int(const YAML::Node& map, const char* key, long long lo, long long hi, int& target) {
    if (!map[key]) return;
    auto x = integer(map[key], key);
    if (!x) return;
    if (*x < lo || *x > hi) {
      error(map[key], std::string(key) + " = " + std::to_string(*x) + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
      return;
    }
    target = static_cast<int>(*x);
  }

  std::optional<SweepAxis> axis(const YAML::Node& node, std::string_view where, bool need_parameter) {
    if (!is_map(node, where)) return std::nullopt;
    Keys keys{"min", "max", "count"};
    if (need_parameter) keys.push_back("parameter");
    check_keys(node, where, keys);
    SweepAxis a;
    if (need_parameter) {
      if (!node["parameter"]) {
        error(node, std::string(where) + " needs 'parameter'");
        return std::nullopt;
      }
      auto p = text(node["parameter"], "parameter");
      if (!p) return std::nullopt;
      a.parameter = *p;
    }
    for (const char* k : {"min", "max", "count"}) {
      if (!node[k]) {
        error(node, std::string(where) + " needs '" + k + "'");
        return std::nullopt;
      }
    }
    auto lo = number(node["min"], "min");
    auto hi = number(node["max"], "max");
    auto n = integer(node["count"], "count");
    if (!lo || !hi || !n) return std::nullopt;
    if (*n < 0 || *n > 1'000'000) {
      error(node["count"], "count must be in [0, 1000000]");
      return std::nullopt;
    }
    if (*hi < *lo) {
      error(node, "max must not be below min");
      return std::nullopt;
    }
    a.min = *lo;
    a.max = *hi;
    a.count = static_cast<int>(*n);
    return a;
  }

  void model(const YAML::Node& node, RunConfig& cfg) {
    if (!is_map(node, "model")) return;
    if (!node["family"]) {
      error(node, "model needs 'family'");
      return;
    }
    auto fam = text(node["family"], "family");
    if (!fam) return;
    if (*fam == "multimode_dicke") {
      check_keys(node, "model", {"family", "gamma", "gamma_prime", "qubit_count"});
      MultimodeDicke12 m;
      if (!node["gamma"]) {
        error(node, "multimode_dicke needs 'gamma' (one entry per mode)");
        return;
      }
      auto g = numbers(node["gamma"], "gamma");
      if (!g) return;
      m.gamma = *g;
      if (node["gamma_prime"]) {
        auto gp = numbers(node["gamma_prime"], "gamma_prime");
        if (!gp) return;
        m.gamma_prime = *gp;
        if (m.gamma_prime.size() == 1 && m.gamma.size() > 1) m.gamma_prime.assign(m.gamma.size(), gp->front());
      } else {
        m.gamma_prime.assign(m.gamma.size(), 0.0);
      }
      if (node["qubit_count"]) ranged_int(node, "qubit_count", 1, 16, m.qubit_count);
      cfg.model.model = m;
    } else if (*fam == "rabi_stark_hubbard") {
      check_keys(node, "model", {"family", "gamma", "j_tilde", "u_tilde"});
      RabiStarkHubbard m;
      for (auto [key, target] : {std::pair{"gamma", &m.gamma}, std::pair{"j_tilde", &m.j_tilde},
                                 std::pair{"u_tilde", &m.u_tilde}}) {
        if (!node[key]) continue;
        if (auto x = number(node[key], key)) *target = *x;
      }
      cfg.model.model = m;
    } else if (*fam == "anisotropic_rabi_stark") {
      check_keys(node, "model", {"family", "gamma1", "gamma2", "u_tilde"});
      AnisotropicRabiStark m;
      for (auto [key, target] : {std::pair{"gamma1", &m.gamma1}, std::pair{"gamma2", &m.gamma2},
                                 std::pair{"u_tilde", &m.u_tilde}}) {
        if (!node[key]) continue;
        if (auto x = number(node[key], key)) *target = *x;
      }
      cfg.model.model = m;
    } else {
      error(node["family"], "unknown model family '" + *fam +
                                "' (expected multimode_dicke, rabi_stark_hubbard or anisotropic_rabi_stark)");
    }
  }

  void thermal(const YAML::Node& node, RunConfig& cfg) {
    if (!is_map(node, "thermal")) return;
    check_keys(node, "thermal", {"mode", "beta_omega"});
    const std::string mode = node["mode"] ? text(node["mode"], "mode").value_or("") : "zero";
    if (mode == "zero") {
      if (node["beta_omega"]) error(node["beta_omega"], "beta_omega only applies to mode: finite");
      cfg.model.thermal = ZeroTemperature{};
    } else if (mode == "finite") {
      if (!node["beta_omega"]) {
        error(node, "mode: finite needs beta_omega");
        return;
      }
      if (auto b = number(node["beta_omega"], "beta_omega")) cfg.model.thermal = FiniteTemperature{*b};
    } else {
      error(node["mode"], "thermal mode must be 'zero' or 'finite'");
    }
  }

  void sweep(const YAML::Node& node, RunConfig& cfg) {
    if (!is_map(node, "sweep")) return;
    check_keys(node, "sweep", {"axes"});
    cfg.has_sweep = true;
    if (!node["axes"] || !node["axes"].IsSequence()) {
      error(node, "sweep needs an 'axes' list");
      return;
    }
    for (const auto& item : node["axes"])
      if (auto a = axis(item, "sweep axis", true)) cfg.axes.push_back(*a);
  }

  void boundary(const YAML::Node& node, RunConfig& cfg) {
    if (!is_map(node, "boundary")) return;
    check_keys(node, "boundary", {"rays", "max_magnitude", "parameter", "min", "max"});
    cfg.has_boundary = true;
    auto& b = cfg.boundary;
    if (node["rays"]) {
      if (!node["rays"].IsSequence()) {
        error(node["rays"], "rays must be a list of direction vectors");
      } else {
        for (const auto& ray : node["rays"]) {
          auto d = numbers(ray, "ray");
          if (d) b.rays.push_back(*d);
        }
      }
      ranged(node, "max_magnitude", 0.0, 1e6, true, b.max_magnitude);
    }
    if (node["parameter"]) {
      if (node["rays"]) error(node["parameter"], "boundary takes either 'rays' or 'parameter', not both");
      b.parameter = text(node["parameter"], "parameter");
      if (!node["min"] || !node["max"]) {
        error(node, "a parameter line needs 'min' and 'max'");
      } else {
        auto lo = number(node["min"], "min");
        auto hi = number(node["max"], "max");
        if (lo && hi) {
          if (!(*hi > *lo)) error(node["max"], "max must exceed min");
          b.min = *lo;
          b.max = *hi;
        }
      }
    }
    if (!node["rays"] && !node["parameter"]) error(node, "boundary needs 'rays' or 'parameter'");
  }

  void ed(const YAML::Node& node, RunConfig& cfg) {
    if (!is_map(node, "ed")) return;
    check_keys(node, "ed", {"eta", "n_cut", "n_levels", "axis", "memory_budget_mb", "dense_threshold"});
    cfg.has_ed = true;
    auto& e = cfg.ed;
    if (!node["eta"]) {
      error(node, "ed needs 'eta'");
    } else if (auto x = numbers(node["eta"], "eta")) {
      e.eta = *x;
      if (e.eta.size() == 1 && cfg.model.mode_count() > 1) e.eta.assign(cfg.model.mode_count(), x->front());
      for (double v : e.eta)
        if (!(v > 0.0)) error(node["eta"], "eta must be positive");
    }
    if (node["n_cut"]) {
      if (auto x = numbers(node["n_cut"], "n_cut")) {
        e.n_cut.clear();
        for (double v : *x) {
          if (v != std::floor(v) || v < 2 || v > 1e7) {
            error(node["n_cut"], "n_cut entries must be integers >= 2");
            break;
          }
          e.n_cut.push_back(static_cast<int>(v));
        }
      }
    }
    ranged_int(node, "n_levels", 1, 4096, e.n_levels);
    if (node["axis"]) e.axis = axis(node["axis"], "ed axis", true);
    if (node["memory_budget_mb"]) {
      int mb = 0;
      ranged_int(node, "memory_budget_mb", 1, 1 << 22, mb);
      if (mb > 0) e.memory_budget_mb = static_cast<std::size_t>(mb);
    }
    if (node["dense_threshold"]) {
      int t = 0;
      ranged_int(node, "dense_threshold", 1, 20000, t);
      if (t > 0) e.dense_threshold = static_cast<std::size_t>(t);
    }
  }

  void selfconsistent(const YAML::Node& node, RunConfig& cfg) {
    if (!is_map(node, "selfconsistent")) return;
    check_keys(node, "selfconsistent", {"eta", "n_cut", "gamma", "tail_tolerance"});
    cfg.has_selfconsistent = true;
    auto& s = cfg.selfconsistent;
    ranged(node, "eta", 0.0, 1e7, true, s.eta);
    ranged_int(node, "n_cut", 2, 2000, s.n_cut);
    ranged(node, "tail_tolerance", 0.0, 1e-2, true, s.tail_tolerance);
    if (!node["gamma"]) {
      error(node, "selfconsistent needs a 'gamma' range");
    } else if (auto a = axis(node["gamma"], "selfconsistent gamma", false)) {
      s.gamma = *a;
      s.gamma.parameter = "gamma";
    }
  }

  void output(const YAML::Node& node, RunConfig& cfg) {
    if (!is_map(node, "output")) return;
    check_keys(node, "output", {"format", "path"});
    if (node["format"]) {
      const auto f = text(node["format"], "format").value_or("");
      if (f == "csv") {
        cfg.format = OutputFormat::csv;
      } else if (f == "json") {
        cfg.format = OutputFormat::json;
      } else {
        error(node["format"], "format must be 'csv' or 'json'");
      }
    }
    if (node["path"]) cfg.output_path = text(node["path"], "path").value_or("");
  }

  void options(const YAML::Node& node, RunConfig& cfg) {
    if (!is_map(node, "options")) return;
    check_keys(node, "options",
               {"workers", "boundary_tolerance", "coarse_samples", "order_threshold", "probe_offset",
                "grid_half_width", "grid_points_per_axis", "tie_tolerance", "gradient_tolerance",
                "lanczos_tolerance", "lanczos_max_restarts"});
    if (node["workers"]) {
      int w = 0;
      ranged_int(node, "workers", 0, 1024, w);
      cfg.workers = w;
    }
    auto& b = cfg.boundary_options;
    auto& m = cfg.minimize;
    ranged(node, "boundary_tolerance", 0.0, 1e-3, true, b.tolerance);
    ranged_int(node, "coarse_samples", 1, 10000, b.coarse_samples);
    ranged(node, "order_threshold", 0.0, 1.0, true, b.order_threshold);
    ranged(node, "probe_offset", 0.0, 1e-2, true, b.probe_offset);
    ranged(node, "grid_half_width", 0.0, 100.0, true, m.grid_half_width);
    ranged_int(node, "grid_points_per_axis", 2, 101, m.grid_points_per_axis);
    ranged(node, "tie_tolerance", 0.0, 1e-4, true, m.tie_tolerance);
    ranged(node, "gradient_tolerance", 0.0, 1e-4, true, m.gradient_tolerance);
    ranged(node, "lanczos_tolerance", 1e-14, 1e-4, false, cfg.lanczos_tolerance);
    ranged_int(node, "lanczos_max_restarts", 1, 100000, cfg.lanczos_max_restarts);
  }
};

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  static const std::map<std::string_view, Command> table{
      {"sweep", Command::sweep}, {"boundary", Command::boundary},
      {"minimize", Command::minimize}, {"ed", Command::ed},
      {"selfconsistent", Command::selfconsistent}, {"validate", Command::validate}};
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::sweep:
      return "sweep";
    case Command::boundary:
      return "boundary";
    case Command::minimize:
      return "minimize";
    case Command::ed:
      return "ed";
    case Command::selfconsistent:
      return "selfconsistent";
    case Command::validate:
      return "validate";
  }
  return "unknown";
}

std::string Diagnostic::render(const std::string& source) const {
  std::string out = severity == Severity::error ? "error: " : "warning: ";
  if (!source.empty()) out += source + ":";
  if (line > 0) out += std::to_string(line) + ":";
  if (!source.empty() || line > 0) out += " ";
  return out + message;
}

bool ParsedConfig::ok() const {
  return std::none_of(diagnostics.begin(), diagnostics.end(),
                      [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::error; });
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig out;
  Parser p;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    out.diagnostics.push_back({Diagnostic::Severity::error, e.mark.line + 1, "YAML syntax: " + e.msg});
    return out;
  }
  if (!root.IsMap()) {
    out.diagnostics.push_back({Diagnostic::Severity::error, 0, "configuration must be a mapping"});
    return out;
  }
  RunConfig& cfg = out.config;
  try {
    p.check_keys(root, "configuration",
                 {"command", "model", "thermal", "sweep", "boundary", "ed", "selfconsistent", "output", "options"});
    if (root["command"]) {
      const auto name = p.text(root["command"], "command").value_or("");
      cfg.command = parse_command(name);
      if (!cfg.command || *cfg.command == Command::validate)
        p.error(root["command"], "unknown command '" + name + "'");
    }
    if (root["model"]) {
      p.model(root["model"], cfg);
    } else {
      p.error(root, "configuration needs a 'model' section");
    }
    if (root["thermal"]) p.thermal(root["thermal"], cfg);
    if (p.diags.empty()) {
      try {
        validate(cfg.model);
      } catch (const Error& e) {
        p.error(root["model"], e.what());
      }
    }
    if (root["sweep"]) p.sweep(root["sweep"], cfg);
    if (root["boundary"]) p.boundary(root["boundary"], cfg);
    if (root["ed"]) p.ed(root["ed"], cfg);
    if (root["selfconsistent"]) p.selfconsistent(root["selfconsistent"], cfg);
    if (root["output"]) p.output(root["output"], cfg);
    if (root["options"]) p.options(root["options"], cfg);

    // Parameter names are checked against the model family.
    auto check_parameter = [&](const YAML::Node& at, const std::string& name) {
      try {
        apply_parameter(cfg.model, name, 0.0);
      } catch (const Error& e) {
        p.error(at, e.what());
      }
    };
    if (cfg.has_sweep) {
      for (std::size_t i = 0; i < cfg.axes.size(); ++i) check_parameter(root["sweep"]["axes"][i], cfg.axes[i].parameter);
    }
    if (cfg.has_boundary && cfg.boundary.parameter) check_parameter(root["boundary"], *cfg.boundary.parameter);
    if (cfg.has_ed && cfg.ed.axis) check_parameter(root["ed"]["axis"], cfg.ed.axis->parameter);
    if (cfg.has_ed && !cfg.ed.eta.empty() && cfg.ed.eta.size() != cfg.model.mode_count())
      p.error(root["ed"]["eta"], "eta needs one entry per mode");
    if (cfg.has_ed && cfg.ed.n_cut.size() != 1 && cfg.ed.n_cut.size() != cfg.model.mode_count())
      p.error(root["ed"]["n_cut"], "n_cut needs one entry or one per mode");
    if (cfg.has_selfconsistent && cfg.model.family() != ModelFamily::rabi_stark_hubbard)
      p.error(root["selfconsistent"], "selfconsistent needs a rabi_stark_hubbard model");
    if (cfg.has_boundary) {
      const std::size_t n = cfg.model.family() == ModelFamily::multimode_dicke ? 2 * cfg.model.mode_count() : 3;
      for (std::size_t i = 0; i < cfg.boundary.rays.size(); ++i) {
        const auto& ray = cfg.boundary.rays[i];
        if (ray.size() != n) {
          p.error(root["boundary"]["rays"][i], "ray needs " + std::to_string(n) + " components");
        } else if (std::any_of(ray.begin(), ray.end(), [](double x) { return x < 0.0; }) ||
                   std::all_of(ray.begin(), ray.end(), [](double x) { return x == 0.0; })) {
          p.error(root["boundary"]["rays"][i], "ray components must be nonnegative and not all zero");
        }
      }
    }
  } catch (const YAML::Exception& e) {
    p.diags.push_back({Diagnostic::Severity::error, e.mark.line + 1, e.msg});
  }
  out.diagnostics = std::move(p.diags);
  std::stable_sort(out.diagnostics.begin(), out.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParsedConfig out;
    out.diagnostics.push_back({Diagnostic::Severity::error, 0, "cannot read configuration file '" + path + "'"});
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::vector<Diagnostic> validate_config(const std::string& path) {
  ParsedConfig parsed = parse_config_file(path);
  if (!parsed.ok()) return parsed.diagnostics;
  const RunConfig& cfg = parsed.config;
  auto warn = [&](const std::string& msg) {
    parsed.diagnostics.push_back({Diagnostic::Severity::warning, 0, msg});
  };

  // Stability at every corner of each declared grid.
  auto corners = [&](const std::vector<SweepAxis>& axes, const std::string& section) {
    const std::size_t n = axes.size();
    for (const auto& a : axes)
      if (a.count == 0) return;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      ModelSpec m = cfg.model;
      std::string where;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = (mask >> i) & 1U ? axes[i].max : axes[i].min;
        m = apply_parameter(m, axes[i].parameter, v);
        where += (i ? ", " : "") + axes[i].parameter + "=" + format_double(v);
      }
      try {
        validate(m);
      } catch (const Error& e) {
        warn(section + " corner (" + where + ") is invalid: " + e.what());
        continue;
      }
      const Stability st = stability_check(m);
      if (!st.stable) warn("unstable subregion in " + section + " at (" + where + "): " + st.reason);
    }
  };
  if (cfg.has_sweep) corners(cfg.axes, "sweep");
  if (cfg.has_ed && cfg.ed.axis) corners({*cfg.ed.axis}, "ed");
  if (cfg.has_boundary && cfg.boundary.parameter)
    corners({SweepAxis{*cfg.boundary.parameter, cfg.boundary.min, cfg.boundary.max, 2}}, "boundary");
  if (cfg.has_selfconsistent) corners({cfg.selfconsistent.gamma}, "selfconsistent");
  if (!cfg.has_sweep && !cfg.has_ed && !cfg.has_boundary && !cfg.has_selfconsistent) {
    const Stability st = stability_check(cfg.model);
    if (!st.stable) warn("model is unstable: " + st.reason);
  }
  return parsed.diagnostics;
}

}  // namespace spt::cli
