#include <json.hpp>

#include <charconv>
#include <cmath>

#include "detail/overloaded.hpp"
#include "spt/cli_runner.hpp"

namespace spt::cli {

namespace {

using detail::overloaded;
using Json = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& cell) {
  return std::visit(overloaded{[](std::monostate) { return std::string(); },
                               [](double x) { return format_double(x); },
                               [](std::int64_t x) { return std::to_string(x); },
                               [](const std::string& s) { return s; },
                               [](bool b) { return std::string(b ? "true" : "false"); }},
                    cell);
}

Json cell_json(const Cell& cell) {
  return std::visit(overloaded{[](std::monostate) { return Json(nullptr); },
                               [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); },
                               [](std::int64_t x) { return Json(x); },
                               [](const std::string& s) { return Json(s); },
                               [](bool b) { return Json(b); }},
                    cell);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv_field(table.columns[i]);
  out += "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(cell_text(row[i]));
    out += "\r\n";
  }
  return out;
}

std::string to_json(const Table& table, const std::string& metadata_json) {
  Json doc;
  doc["metadata"] = Json::parse(metadata_json);
  doc["columns"] = table.columns;
  doc["rows"] = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    doc["rows"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

}  // namespace spt::cli
