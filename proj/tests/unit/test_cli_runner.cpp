#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "spt/cli_runner.hpp"

using namespace spt;
using namespace spt::cli;

namespace {

const std::string kData = SPT_TEST_DATA_DIR;

struct Invocation {
  int status = 0;
  std::string out;
  std::string err;
};

Invocation invoke(Command c, const std::string& config, std::optional<int> workers = 1) {
  std::ostringstream out, err;
  Invocation r;
  r.status = run(c, kData + "/" + config, std::nullopt, workers, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string header(const std::string& csv) { return csv.substr(0, csv.find("\r\n")); }

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(SPT_TEST_TMP_DIR) + "/" + name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace

TEST_SUITE("cli_runner") {
  TEST_CASE("command names") {
    for (Command c : {Command::sweep, Command::boundary, Command::minimize, Command::ed, Command::selfconsistent,
                      Command::validate})
      CHECK(parse_command(command_name(c)) == c);
    CHECK_FALSE(parse_command("sweeep"));
  }

  TEST_CASE("golden CSV headers") {
    CHECK(header(invoke(Command::sweep, "rsh_sweep.yaml").out) ==
          "index,gamma,j_tilde,lambda_1,lambda_2,lambda_3,phase,order_parameter,free_energy,status");
    CHECK(header(invoke(Command::boundary, "fig1b.yaml").out) ==
          "direction,critical_parameter,critical_magnitude,order,zc_norm2,status");
    const std::string min_cfg = write_temp("minimize.yaml", "command: minimize\nmodel: {family: rabi_stark_hubbard, gamma: 0.9, j_tilde: 0.2, u_tilde: 0.1}\n");
    std::ostringstream out, err;
    CHECK(run(Command::minimize, min_cfg, std::nullopt, 1, out, err) == 0);
    CHECK(header(out.str()) ==
          "lambda_1,lambda_2,lambda_3,phi_min,order_parameter,u_1,v_1,hessian_positive_definite,degenerate_minima,status");
    CHECK(header(invoke(Command::selfconsistent, "selfconsistent.yaml").out) ==
          "gamma,j_tilde_spectral,j_tilde_meanfield,relative_difference,terms_used,status");
    const std::string ed_cfg = write_temp("ed.yaml", "command: ed\nmodel: {family: multimode_dicke, gamma: [0.5, 0.4], gamma_prime: [0.1, 0.1]}\ned: {eta: [10, 10], n_cut: [6], n_levels: 2}\n");
    std::ostringstream eo, ee;
    CHECK(run(Command::ed, ed_cfg, std::nullopt, 1, eo, ee) == 0);
    CHECK(header(eo.str()) ==
          "axis_value,E0,E1,gap,photon_1,photon_2,u2_1,u2_2,v2_1,v2_2,parity_0,parity_1,method,status");
  }

  TEST_CASE("empty grid gives a header-only CSV") {
    const Invocation r = invoke(Command::sweep, "empty_sweep.yaml");
    CHECK(r.status == 0);
    CHECK(r.out == "index,gamma,lambda_1,lambda_2,lambda_3,phase,order_parameter,free_energy,status\r\n");
  }

  TEST_CASE("two-mode Dicke boundary row") {
    const Invocation r = invoke(Command::boundary, "fig1b.yaml");
    REQUIRE(r.status == 0);
    const auto table = rows(r.out);
    REQUIRE(table.size() == 2);
    CHECK(std::abs(std::stod(table[1][1]) - 0.6245) < 1e-3);
    CHECK(table[1][3] == "first");
    CHECK(table[1][5] == "ok");
  }

  TEST_CASE("anisotropic spectra become degenerate past gamma1 = 0.8") {
    const Invocation r = invoke(Command::ed, "fig4.yaml", 0);
    REQUIRE(r.status == 0);
    const auto table = rows(r.out);
    REQUIRE(table.size() == 14);
    for (std::size_t i = 1; i < table.size(); ++i) {
      const double g1 = std::stod(table[i][0]);
      const double gap = std::stod(table[i][3]);
      if (g1 < 0.79) CHECK(gap > 1e-4);
      if (g1 > 0.86) CHECK(gap < 1e-8);
    }
  }

  TEST_CASE("outputs are byte-identical across runs and worker counts") {
    const std::string a = invoke(Command::sweep, "rsh_sweep.yaml", 1).out;
    const std::string b = invoke(Command::sweep, "rsh_sweep.yaml", 4).out;
    const std::string c = invoke(Command::sweep, "rsh_sweep.yaml", 4).out;
    CHECK(a == b);
    CHECK(b == c);
    const std::string j1 = invoke(Command::minimize, "minimize_rsh.yaml").out;
    const std::string j2 = invoke(Command::minimize, "minimize_rsh.yaml").out;
    CHECK(j1 == j2);
    CHECK(j1.rfind("{\n  \"metadata\": {\n    \"tool\": \"spt\"", 0) == 0);
  }

  TEST_CASE("validate reports") {
    CHECK(invoke(Command::validate, "fig1b.yaml").out.empty());
    CHECK(invoke(Command::validate, "fig1b.yaml").status == 0);

    const Invocation typo = invoke(Command::validate, "misspelled.yaml");
    CHECK(typo.status == 2);
    CHECK(typo.out.find("misspelled.yaml:4: unknown key 'axis' in sweep (did you mean 'axes'?)") != std::string::npos);

    const Invocation band = invoke(Command::validate, "rsh_unstable_grid.yaml");
    CHECK(band.status == 0);
    CHECK(band.out.find("warning") != std::string::npos);
    CHECK(band.out.find("unstable subregion") != std::string::npos);
    CHECK(band.out.find("j_tilde=0.7") != std::string::npos);
  }

  TEST_CASE("configuration errors exit with status 2") {
    CHECK(invoke(Command::sweep, "misspelled.yaml").status == 2);
    // The file is for `boundary`.
    CHECK(invoke(Command::sweep, "fig1b.yaml").status == 2);
    std::ostringstream out, err;
    CHECK(run(Command::sweep, kData + "/missing.yaml", std::nullopt, 1, out, err) == 2);
    CHECK_FALSE(err.str().empty());
    const auto bad = parse_config_text("model: {family: rabi_stark_hubbard, gamma: 0.5, j_tilde: -1, u_tilde: 0}\n");
    CHECK_FALSE(bad.ok());
    const auto range = parse_config_text("model: {family: anisotropic_rabi_stark, gamma1: 1, gamma2: 1, u_tilde: 0}\noptions: {workers: -3}\n");
    CHECK_FALSE(range.ok());
  }

  TEST_CASE("unwritable output exits with status 3") {
    std::ostringstream out, err;
    CHECK(run(Command::sweep, kData + "/rsh_sweep.yaml", std::string("/nonexistent/dir/out.csv"), 1, out, err) == 3);
  }

  TEST_CASE("parse model families and thermal modes") {
    const auto p = parse_config_text(
        "model:\n  family: multimode_dicke\n  gamma: [0.5, 0.4]\n  gamma_prime: [0.1, 0.2]\n  qubit_count: 3\n"
        "thermal: {mode: finite, beta_omega: 20}\n");
    REQUIRE(p.ok());
    const auto& d = std::get<MultimodeDicke12>(p.config.model.model);
    CHECK(d.gamma == std::vector<double>{0.5, 0.4});
    CHECK(d.qubit_count == 3);
    CHECK(std::get<FiniteTemperature>(p.config.model.thermal).beta_omega == 20.0);
    const auto wrong = parse_config_text("model: {family: rabi_stark, gamma: 0.1}\n");
    CHECK_FALSE(wrong.ok());
  }

  TEST_CASE("CSV quoting") {
    Table t;
    t.columns = {"a", "b,c"};
    t.rows = {{std::string("x\"y"), 1.5}, {std::monostate{}, std::int64_t{7}}, {std::string("line\nbreak"), true}};
    CHECK(to_csv(t) == "a,\"b,c\"\r\n\"x\"\"y\",1.5\r\n,7\r\n\"line\nbreak\",true\r\n");
  }

  TEST_CASE("number formatting") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
    for (double x : {0.6244998001493514, 1.0 / 3.0, 123456789.123}) CHECK(std::stod(format_double(x)) == x);
  }

  TEST_CASE("JSON layout") {
    Table t;
    t.columns = {"z", "a"};
    t.rows = {{std::nan(""), std::string("ok")}};
    const std::string j = to_json(t, R"({"tool": "spt"})");
    CHECK(j.find("\"metadata\"") < j.find("\"columns\""));
    CHECK(j.find("\"columns\"") < j.find("\"rows\""));
    CHECK(j.find("\"z\": null") != std::string::npos);
    CHECK(j.find("\"z\": null") < j.find("\"a\": \"ok\""));
  }

  TEST_CASE("edit distance") {
    CHECK(edit_distance("axes", "axis") == 1);
    CHECK(edit_distance("", "abc") == 3);
    CHECK(edit_distance("gamma_prime", "gamma_prime") == 0);
    CHECK(edit_distance("kitten", "sitting") == 3);
  }
}
