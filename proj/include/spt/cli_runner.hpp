#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spt/fock_ed.hpp"
#include "spt/gmlp_optimizer.hpp"
#include "spt/hopping_selfconsistent.hpp"
#include "spt/model_catalog.hpp"
#include "spt/phase_mapper.hpp"

namespace spt::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { sweep, boundary, minimize, ed, selfconsistent, validate };

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

enum class OutputFormat { csv, json };

struct BoundaryJob {
  /// Radial directions in coupling-vector space.
  std::vector<std::vector<double>> rays;
  double max_magnitude = 4.0;
  /// Parameter line instead of rays.
  std::optional<std::string> parameter;
  double min = 0.0;
  double max = 0.0;
};

struct EDJob {
  std::vector<double> eta;
  std::vector<int> n_cut{40};
  int n_levels = 2;
  std::optional<SweepAxis> axis;
  std::size_t memory_budget_mb = 4096;
  std::size_t dense_threshold = 4000;
};

struct SelfConsistentJob {
  double eta = 400.0;
  int n_cut = 80;
  SweepAxis gamma{"gamma", 0.0, 0.0, 0};
  double tail_tolerance = 1e-6;
};

struct RunConfig {
  std::optional<Command> command;
  ModelSpec model;
  std::vector<SweepAxis> axes;
  BoundaryJob boundary;
  EDJob ed;
  SelfConsistentJob selfconsistent;
  OutputFormat format = OutputFormat::csv;
  std::string output_path;
  MinimizeOptions minimize;
  BoundaryOptions boundary_options;
  double lanczos_tolerance = 1e-8;
  int lanczos_max_restarts = 500;
  std::optional<int> workers;
  /// Which optional sections were present.
  bool has_sweep = false;
  bool has_boundary = false;
  bool has_ed = false;
  bool has_selfconsistent = false;
};

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  /// 1-based; 0 when no position applies.
  int line = 0;
  std::string message;

  std::string render(const std::string& source) const;
};

struct ParsedConfig {
  RunConfig config;
  std::vector<Diagnostic> diagnostics;

  bool ok() const;
};

ParsedConfig parse_config_text(const std::string& text);
/// Unreadable files produce a single error diagnostic.
ParsedConfig parse_config_file(const std::string& path);

/// Schema diagnostics plus stability warnings for every grid corner.
std::vector<Diagnostic> validate_config(const std::string& path);

/// Levenshtein distance, for key suggestions.
std::size_t edit_distance(std::string_view a, std::string_view b);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);
/// RFC 4180: fields with comma, quote, CR or LF are quoted, quotes doubled;
/// CRLF line ends. Missing values are empty fields.
std::string to_csv(const Table& table);
/// {"metadata": ..., "columns": [...], "rows": [{...}]} with keys in
/// insertion order. Non-finite numbers and missing values become null.
/// `metadata_json` must be a JSON object.
std::string to_json(const Table& table, const std::string& metadata_json);

struct RunResult {
  Table table;
  std::string metadata_json;
  int failed_rows = 0;
};

/// Executes one command (not validate) on a parsed configuration.
RunResult execute(const RunConfig& config, Command command, int workers);

/// Full CLI flow: parse, execute, write. Returns the process exit status:
/// 0 success, 1 some rows failed, 2 configuration error, 3 output error.
int run(Command command, const std::string& config_path, const std::optional<std::string>& out_path,
        std::optional<int> workers, std::ostream& out, std::ostream& err);

}  // namespace spt::cli
