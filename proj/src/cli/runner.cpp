#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>

#include "detail/overloaded.hpp"
#include "spt/cli_runner.hpp"
#include "spt/errors.hpp"
#include "spt/parallel.hpp"

namespace spt::cli {

namespace {

using detail::overloaded;
using Json = nlohmann::ordered_json;

Cell num(double x) { return std::isfinite(x) ? Cell{x} : Cell{}; }

Json model_echo(const ModelSpec& spec) {
  Json m;
  m["family"] = std::string(family_name(spec.family()));
  std::visit(overloaded{[&](const MultimodeDicke12& d) {
                          m["gamma"] = d.gamma;
                          m["gamma_prime"] = d.gamma_prime;
                          m["qubit_count"] = d.qubit_count;
                        },
                        [&](const RabiStarkHubbard& r) {
                          m["gamma"] = r.gamma;
                          m["j_tilde"] = r.j_tilde;
                          m["u_tilde"] = r.u_tilde;
                        },
                        [&](const AnisotropicRabiStark& a) {
                          m["gamma1"] = a.gamma1;
                          m["gamma2"] = a.gamma2;
                          m["u_tilde"] = a.u_tilde;
                        }},
             spec.model);
  Json t;
  if (const auto* f = std::get_if<FiniteTemperature>(&spec.thermal)) {
    t["mode"] = "finite";
    t["beta_omega"] = f->beta_omega;
  } else {
    t["mode"] = "zero";
  }
  m["thermal"] = t;
  return m;
}

Json metadata(const RunConfig& cfg, Command command) {
  Json meta;
  meta["tool"] = "spt";
  meta["version"] = kToolVersion;
  meta["command"] = std::string(command_name(command));
  meta["model"] = model_echo(cfg.model);
  Json tol;
  tol["grid_half_width"] = cfg.minimize.grid_half_width;
  tol["grid_points_per_axis"] = cfg.minimize.grid_points_per_axis;
  tol["gradient_tolerance"] = cfg.minimize.gradient_tolerance;
  tol["tie_tolerance"] = cfg.minimize.tie_tolerance;
  tol["normal_phase_threshold"] = kNormalPhaseThreshold;
  tol["boundary_tolerance"] = cfg.boundary_options.tolerance;
  tol["coarse_samples"] = cfg.boundary_options.coarse_samples;
  tol["order_threshold"] = cfg.boundary_options.order_threshold;
  tol["probe_offset"] = cfg.boundary_options.probe_offset;
  tol["lanczos_tolerance"] = cfg.lanczos_tolerance;
  tol["lanczos_max_restarts"] = cfg.lanczos_max_restarts;
  meta["tolerances"] = tol;
  return meta;
}

std::vector<std::string> lambda_columns(const ModelSpec& model) {
  std::vector<std::string> out;
  const std::size_t n = coupling_vector(model).components.size();
  for (std::size_t i = 1; i <= n; ++i) out.push_back("lambda_" + std::to_string(i));
  return out;
}

std::string error_status(const std::string& what) { return "error: " + what; }

RunResult run_sweep(const RunConfig& cfg, int workers) {
  RunResult r;
  auto& t = r.table;
  t.columns.push_back("index");
  for (const auto& a : cfg.axes) t.columns.push_back(a.parameter);
  for (auto& c : lambda_columns(cfg.model)) t.columns.push_back(c);
  for (const char* c : {"phase", "order_parameter", "free_energy", "status"}) t.columns.emplace_back(c);
  const std::size_t n_lambda = coupling_vector(cfg.model).components.size();

  const auto results = sweep(cfg.model, cfg.axes, workers, cfg.minimize);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    std::vector<Cell> row{static_cast<std::int64_t>(i)};
    for (double v : res.axis_values) row.push_back(v);
    if (!res.error.empty()) {
      ++r.failed_rows;
      row.resize(t.columns.size() - 1);
      row.emplace_back(error_status(res.error));
    } else {
      for (std::size_t k = 0; k < n_lambda; ++k) row.push_back(res.point.coupling.components[k]);
      row.emplace_back(std::string(phase_label(res.point.phase)));
      const bool unstable = res.point.phase == Phase::unstable;
      row.push_back(unstable ? Cell{} : num(res.point.order_parameter));
      row.push_back(unstable ? Cell{} : num(res.point.free_energy));
      row.emplace_back(std::string("ok"));
    }
    t.rows.push_back(std::move(row));
  }
  return r;
}

std::string join_direction(const std::vector<double>& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? ";" : "") + format_double(d[i]);
  return s;
}

void boundary_row(RunResult& r, const std::string& direction, bool parameter_line, const BoundaryCrossing* b,
                  const std::string& error) {
  std::vector<Cell> row{direction};
  if (!b) {
    ++r.failed_rows;
    row.resize(5);
    row.emplace_back(error_status(error));
  } else {
    const bool found = b->transition_order != TransitionOrder::none;
    row.push_back(found && parameter_line ? num(b->critical_t) : Cell{});
    row.push_back(found ? num(b->critical_magnitude) : Cell{});
    row.emplace_back(std::string(order_label(b->transition_order)));
    row.push_back(found ? num(b->zc_norm2) : Cell{});
    row.emplace_back(std::string(found ? "ok" : "ok: no transition in range"));
  }
  r.table.rows.push_back(std::move(row));
}

RunResult run_boundary(const RunConfig& cfg, int workers) {
  RunResult r;
  r.table.columns = {"direction", "critical_parameter", "critical_magnitude", "order", "zc_norm2", "status"};
  const auto& job = cfg.boundary;
  if (job.parameter) {
    try {
      const auto b = parameter_boundary(cfg.model, *job.parameter, job.min, job.max, cfg.boundary_options);
      boundary_row(r, *job.parameter, true, &b, "");
    } catch (const std::exception& e) {
      boundary_row(r, *job.parameter, true, nullptr, e.what());
    }
    return r;
  }
  struct Outcome {
    std::optional<BoundaryCrossing> crossing;
    std::string error;
  };
  const auto outcomes = parallel_map<Outcome>(job.rays.size(), workers, [&](std::size_t i) {
    Outcome o;
    try {
      o.crossing = radial_boundary(cfg.model, job.rays[i], job.max_magnitude, cfg.boundary_options);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    boundary_row(r, join_direction(job.rays[i]), false, outcomes[i].crossing ? &*outcomes[i].crossing : nullptr,
                 outcomes[i].error);
  return r;
}

RunResult run_minimize(const RunConfig& cfg) {
  RunResult r;
  auto& t = r.table;
  t.columns = lambda_columns(cfg.model);
  const std::size_t m = cfg.model.mode_count();
  t.columns.emplace_back("phi_min");
  t.columns.emplace_back("order_parameter");
  for (std::size_t i = 1; i <= m; ++i) t.columns.push_back("u_" + std::to_string(i));
  for (std::size_t i = 1; i <= m; ++i) t.columns.push_back("v_" + std::to_string(i));
  for (const char* c : {"hessian_positive_definite", "degenerate_minima", "status"}) t.columns.emplace_back(c);

  std::vector<Cell> row;
  for (double c : coupling_vector(cfg.model).components) row.push_back(c);
  try {
    const MinimizeResult res = minimize(cfg.model, cfg.minimize);
    row.push_back(num(res.phi_min));
    row.push_back(num(res.order_parameter));
    for (double u : res.z_min.u) row.push_back(u);
    for (double v : res.z_min.v) row.push_back(v);
    row.emplace_back(res.hessian_positive_definite);
    row.emplace_back(static_cast<std::int64_t>(res.degenerate_minima.size()));
    row.emplace_back(std::string(res.polish_converged ? "ok" : "ok: grid fallback used"));
  } catch (const std::exception& e) {
    ++r.failed_rows;
    row.resize(t.columns.size() - 1);
    row.emplace_back(error_status(e.what()));
  }
  t.rows.push_back(std::move(row));
  return r;
}

RunResult run_ed(const RunConfig& cfg, int workers) {
  RunResult r;
  auto& t = r.table;
  const auto& job = cfg.ed;
  const std::size_t m = cfg.model.mode_count();
  const int k = job.n_levels;
  t.columns.emplace_back("axis_value");
  for (int i = 0; i < k; ++i) t.columns.push_back("E" + std::to_string(i));
  t.columns.emplace_back("gap");
  for (std::size_t i = 1; i <= m; ++i) t.columns.push_back("photon_" + std::to_string(i));
  for (std::size_t i = 1; i <= m; ++i) t.columns.push_back("u2_" + std::to_string(i));
  for (std::size_t i = 1; i <= m; ++i) t.columns.push_back("v2_" + std::to_string(i));
  for (int i = 0; i < k; ++i) t.columns.push_back("parity_" + std::to_string(i));
  t.columns.emplace_back("method");
  t.columns.emplace_back("status");

  EDConfig ed;
  ed.n_cut = job.n_cut;
  ed.eta = job.eta;
  ed.n_levels = k;
  ed.dense_threshold = job.dense_threshold;
  ed.memory_budget_bytes = job.memory_budget_mb << 20;
  ed.lanczos.tolerance = cfg.lanczos_tolerance;
  ed.lanczos.max_restarts = cfg.lanczos_max_restarts;

  const std::size_t points = job.axis ? static_cast<std::size_t>(job.axis->count) : 1;
  struct Outcome {
    std::optional<EDSolution> solution;
    std::string error;
  };
  const auto outcomes = parallel_map<Outcome>(points, workers, [&](std::size_t i) {
    Outcome o;
    try {
      ModelSpec model = cfg.model;
      if (job.axis) model = apply_parameter(model, job.axis->parameter, job.axis->value(static_cast<int>(i)));
      const RawModel raw = from_dimensionless(model, job.eta);
      o.solution = solve(raw, ed);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    return o;
  });
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<Cell> row;
    row.push_back(job.axis ? Cell{job.axis->value(static_cast<int>(i))} : Cell{});
    const auto& o = outcomes[i];
    if (!o.solution) {
      ++r.failed_rows;
      row.resize(t.columns.size() - 1);
      row.emplace_back(error_status(o.error));
      t.rows.push_back(std::move(row));
      continue;
    }
    const auto& s = *o.solution;
    for (double e : s.spectrum.energies) row.push_back(e);
    row.push_back(k >= 2 ? num(s.spectrum.energies[1] - s.spectrum.energies[0]) : Cell{});
    for (double x : s.photon_numbers[0]) row.push_back(x);
    for (double x : s.quadratures[0].u2) row.push_back(x);
    for (double x : s.quadratures[0].v2) row.push_back(x);
    for (int l = 0; l < k; ++l) row.push_back(s.parity.empty() ? Cell{} : Cell{s.parity[static_cast<std::size_t>(l)]});
    row.emplace_back(s.spectrum.method);
    row.emplace_back(std::string("ok"));
    t.rows.push_back(std::move(row));
  }
  return r;
}

RunResult run_selfconsistent(const RunConfig& cfg, int workers) {
  RunResult r;
  r.table.columns = {"gamma", "j_tilde_spectral", "j_tilde_meanfield", "relative_difference", "terms_used", "status"};
  const auto& job = cfg.selfconsistent;
  std::vector<double> gammas;
  for (int i = 0; i < job.gamma.count; ++i) gammas.push_back(job.gamma.value(i));
  EDConfig ed;
  ed.n_cut = {job.n_cut};
  ed.lanczos.tolerance = cfg.lanczos_tolerance;
  ed.lanczos.max_restarts = cfg.lanczos_max_restarts;
  SelfConsistentOptions opts;
  opts.tail_tolerance = job.tail_tolerance;
  const double u_tilde = std::get<RabiStarkHubbard>(cfg.model.model).u_tilde;
  for (const auto& row : compare_with_meanfield(gammas, u_tilde, job.eta, ed, workers, opts)) {
    std::vector<Cell> cells{row.gamma};
    if (!row.error.empty()) {
      ++r.failed_rows;
      cells.emplace_back();
      cells.push_back(row.j_tilde_meanfield ? Cell{*row.j_tilde_meanfield} : Cell{});
      cells.emplace_back();
      cells.emplace_back();
      cells.emplace_back(error_status(row.error));
    } else {
      cells.push_back(num(row.j_tilde_spectral));
      cells.push_back(row.j_tilde_meanfield ? Cell{*row.j_tilde_meanfield} : Cell{});
      cells.push_back(row.relative_difference ? Cell{*row.relative_difference} : Cell{});
      cells.emplace_back(static_cast<std::int64_t>(row.terms_used));
      cells.emplace_back(std::string(row.j_tilde_meanfield ? "ok" : "ok: meanfield not applicable"));
    }
    r.table.rows.push_back(std::move(cells));
  }
  return r;
}

}  // namespace

RunResult execute(const RunConfig& cfg, Command command, int workers) {
  RunResult r;
  switch (command) {
    case Command::sweep:
      r = run_sweep(cfg, workers);
      break;
    case Command::boundary:
      r = run_boundary(cfg, workers);
      break;
    case Command::minimize:
      r = run_minimize(cfg);
      break;
    case Command::ed:
      r = run_ed(cfg, workers);
      break;
    case Command::selfconsistent:
      r = run_selfconsistent(cfg, workers);
      break;
    case Command::validate:
      throw ConfigError("validate is not an execution command");
  }
  r.metadata_json = metadata(cfg, command).dump();
  return r;
}

int run(Command command, const std::string& config_path, const std::optional<std::string>& out_path,
        std::optional<int> workers, std::ostream& out, std::ostream& err) {
  if (command == Command::validate) {
    const auto diags = validate_config(config_path);
    std::string report;
    bool errors = false;
    for (const auto& d : diags) {
      report += d.render(config_path) + "\n";
      errors = errors || d.severity == Diagnostic::Severity::error;
    }
    if (out_path) {
      std::ofstream f(*out_path, std::ios::binary);
      if (!(f << report)) {
        err << "error: cannot write '" << *out_path << "'\n";
        return 3;
      }
    } else {
      out << report;
    }
    return errors ? 2 : 0;
  }

  const ParsedConfig parsed = parse_config_file(config_path);
  for (const auto& d : parsed.diagnostics) err << d.render(config_path) << "\n";
  if (!parsed.ok()) return 2;
  const RunConfig& cfg = parsed.config;
  if (cfg.command && *cfg.command != command) {
    err << "error: " << config_path << ": configuration is for '" << command_name(*cfg.command) << "', not '"
        << command_name(command) << "'\n";
    return 2;
  }
  const bool section_ok = (command == Command::sweep && cfg.has_sweep) ||
                          (command == Command::boundary && cfg.has_boundary) || command == Command::minimize ||
                          (command == Command::ed && cfg.has_ed) ||
                          (command == Command::selfconsistent && cfg.has_selfconsistent);
  if (!section_ok) {
    err << "error: " << config_path << ": command '" << command_name(command) << "' needs a '"
        << command_name(command) << "' section\n";
    return 2;
  }

  const int n_workers = workers.value_or(cfg.workers.value_or(0));
  RunResult result;
  try {
    result = execute(cfg, command, n_workers);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const std::string text =
      cfg.format == OutputFormat::json ? to_json(result.table, result.metadata_json) : to_csv(result.table);
  const std::string path = out_path.value_or(cfg.output_path);
  if (path.empty()) {
    out << text;
  } else {
    std::ofstream f(path, std::ios::binary);
    if (!(f << text)) {
      err << "error: cannot write '" << path << "'\n";
      return 3;
    }
  }
  if (result.failed_rows > 0) {
    err << "error: " << result.failed_rows << " of " << result.table.rows.size() << " rows failed\n";
    return 1;
  }
  return 0;
}

}  // namespace spt::cli
