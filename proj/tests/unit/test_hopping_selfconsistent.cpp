#include <cmath>

#include "doctest.h"
#include "spt/errors.hpp"
#include "spt/hopping_selfconsistent.hpp"

using namespace spt;

namespace {

EDConfig config(int n_cut) {
  EDConfig c;
  c.n_cut = {n_cut};
  return c;
}

}  // namespace

TEST_SUITE("hopping_selfconsistent") {
  TEST_CASE("bare oscillator gives J~_c = 1") {
    const auto r = critical_hopping(0.0, 0.0, 100.0, config(20));
    CHECK(r.j_tilde_critical == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.spectral_sum == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("Stark shift alone gives J~_c = 1 - U~") {
    // Only |1, down> couples, with gap omega - U.
    for (double u : {0.1, 0.36, 0.7}) {
      const auto r = critical_hopping(0.0, u, 100.0, config(20));
      CHECK(r.j_tilde_critical == doctest::Approx(1.0 - u).epsilon(1e-12));
    }
  }

  TEST_CASE("partial sums rise monotonically with parity plateaus") {
    const auto r = critical_hopping(0.5, 0.36, 50.0, config(40));
    REQUIRE(r.partial_sums.size() >= 4);
    int flat = 0;
    for (std::size_t i = 1; i < r.partial_sums.size(); ++i) {
      CHECK(r.partial_sums[i] >= r.partial_sums[i - 1]);
      if (r.partial_sums[i] - r.partial_sums[i - 1] < 1e-20 * r.partial_sums.back()) ++flat;
    }
    // Same-parity levels contribute exactly nothing.
    CHECK(flat >= static_cast<int>(r.partial_sums.size()) / 2 - 1);
    CHECK(r.spectral_sum == doctest::Approx(r.partial_sums.back()));
  }

  TEST_CASE("classical-limit agreement with the mean-field boundary") {
    for (double g : {0.2, 0.4, 0.6}) {
      const auto r = critical_hopping(g, 0.36, 400.0, config(80));
      const double mf = 1.0 - g * g - 0.36;
      CHECK(std::abs(r.j_tilde_critical - mf) / mf < 0.02);
    }
  }

  TEST_CASE("critical hopping vanishes toward the band edge") {
    double last = 1.0;
    for (double g : {0.0, 0.3, 0.6, 0.75, 0.79}) {
      const double j = critical_hopping(g, 0.36, 400.0, config(120)).j_tilde_critical;
      CHECK(j < last);
      CHECK(j > 0.0);
      last = j;
    }
    CHECK(last < 0.05);
  }

  TEST_CASE("relative difference shrinks with eta") {
    const auto coarse = compare_with_meanfield({0.5}, 0.36, 50.0, config(80));
    const auto fine = compare_with_meanfield({0.5}, 0.36, 400.0, config(80));
    REQUIRE(coarse[0].relative_difference);
    REQUIRE(fine[0].relative_difference);
    CHECK(*fine[0].relative_difference < *coarse[0].relative_difference);
  }

  TEST_CASE("rows past the mean-field band edge") {
    const auto rows = compare_with_meanfield({0.0, 0.9, 1.3}, 0.36, 400.0, config(160), 2);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].j_tilde_meanfield == doctest::Approx(0.64));
    CHECK(rows[0].j_tilde_spectral == doctest::Approx(0.64).epsilon(1e-12));
    CHECK_FALSE(rows[1].j_tilde_meanfield);
    CHECK_FALSE(rows[1].relative_difference);
    CHECK_FALSE(rows[2].j_tilde_meanfield);
    CHECK((rows[2].error.empty() ? rows[2].j_tilde_spectral > 0.0 : rows[2].error.find("beyond NP") != std::string::npos));
  }

  TEST_CASE("degenerate ground state is rejected") {
    CHECK_THROWS_AS(critical_hopping(1.5, 0.36, 400.0, config(400)), DomainError);
  }
}
