#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "spt/errors.hpp"
#include "spt/gmlp_optimizer.hpp"

using namespace spt;
using namespace testing;

TEST_SUITE("gmlp_optimizer") {
  TEST_CASE("deep normal phase sits at the origin") {
    for (const ModelSpec& m : {dicke({0.1}, {0.0}), rsh(0.06, 0.0036, 0.0064), ars(0.06, 0.0, 0.0064)}) {
      const MinimizeResult r = minimize(m);
      CHECK(r.order_parameter == 0.0);
      CHECK(r.phi_min == -0.5);
      CHECK(r.hessian_positive_definite);
    }
  }

  TEST_CASE("Rabi-Stark-Hubbard minimizer") {
    const MinimizeResult r = minimize(rsh(0.9, 0.2, 0.1));
    // 40-digit root of d phi / d(u^2) = 0.
    CHECK(r.order_parameter == doctest::Approx(0.081951315342849353).epsilon(1e-9));
    CHECK(r.phi_min == doctest::Approx(-0.50421333916750613).epsilon(1e-14));
    CHECK(r.z_min.v[0] == 0.0);
    CHECK(r.z_min.u[0] > 0.0);
    CHECK(r.degenerate_minima.size() == 2);
    const MinimizeResult o = brute_force_oracle(rsh(0.9, 0.2, 0.1), 1.0, 1e-3);
    CHECK(std::abs(std::abs(o.z_min.u[0]) - r.z_min.u[0]) <= 1e-3);
    CHECK(r.phi_min <= o.phi_min + 1e-12);
  }

  TEST_CASE("equal anisotropic couplings give a continuum") {
    const MinimizeResult r = minimize(ars(1.0, 1.0, 0.36));
    CHECK(r.order_parameter == doctest::Approx(0.17646329608783837).epsilon(1e-9));
    CHECK(r.phi_min == doctest::Approx(-0.52640634708514548).epsilon(1e-14));
    CHECK(r.degenerate_minima.size() > 2);
    for (const auto& z : r.degenerate_minima) CHECK(z.norm2() == doctest::Approx(r.order_parameter).epsilon(1e-6));
    CHECK(r.z_min.u[0] >= 0.0);
    CHECK(r.z_min.v[0] >= 0.0);
  }

  TEST_CASE("two-mode Dicke minimizer against Nelder-Mead") {
    const MinimizeResult r = minimize(dicke({0.7, 0.6}, {0.5, 0.5}));
    CHECK(r.z_min.u[0] == doctest::Approx(0.55188752).epsilon(1e-7));
    CHECK(r.z_min.u[1] == doctest::Approx(0.47304644).epsilon(1e-7));
    CHECK(r.phi_min == doctest::Approx(-0.5313472655174082).epsilon(1e-12));
    CHECK(r.hessian_positive_definite);
  }

  TEST_CASE("mode amplitudes follow the per-mode relation") {
    Draw d(21);
    int superradiant = 0;
    for (int i = 0; i < 30; ++i) {
      const std::vector<double> g{d.uniform(0.4, 1.0), d.uniform(0.1, 1.0), d.uniform(0.1, 1.0)};
      const std::vector<double> gp{d.uniform(0.0, 0.7), d.uniform(0.0, 0.7), d.uniform(0.0, 0.7)};
      const MinimizeResult r = minimize(dicke(g, gp));
      if (r.order_parameter < 1e-6) continue;
      ++superradiant;
      const double u1 = r.z_min.u[0];
      for (int nu = 1; nu < 3; ++nu)
        CHECK(r.z_min.u[nu] == doctest::Approx(g[nu] * u1 / (g[0] + 2.0 * (gp[0] - gp[nu]) * u1)).epsilon(1e-6));
    }
    CHECK(superradiant > 10);
  }

  TEST_CASE("minimize never loses to the grid oracle") {
    Draw d(22);
    for (ModelFamily f : kFamilies)
      for (int i = 0; i < 8; ++i) {
        const ModelSpec m = random_stable(d, f);
        const MinimizeResult r = minimize(m);
        const double box = std::max(1.5, 1.2 * std::sqrt(r.order_parameter) + 0.2);
        const MinimizeResult o = brute_force_oracle(m, box, box / 100, OracleSubspace::reduced);
        CHECK(r.phi_min <= o.phi_min + 1e-6);
      }
  }

  TEST_CASE("grid oracle examples") {
    CHECK(brute_force_oracle(rsh(0.2, 0.1, 0.1), 1.0, 0.01).order_parameter == 0.0);
    // gamma^2 + J~ + U~ = 0.999: no nonzero root below the boundary.
    CHECK(brute_force_oracle(rsh(std::sqrt(0.699), 0.2, 0.1), 1.0, 1e-3).order_parameter == 0.0);
    const ModelSpec fig = dicke({0.7, 0.6}, {0.5, 0.5});
    const MinimizeResult o = brute_force_oracle(fig, 1.0, 1e-3, OracleSubspace::reduced);
    const MinimizeResult r = minimize(fig);
    for (int nu = 0; nu < 2; ++nu) CHECK(std::abs(o.z_min.u[nu] - r.z_min.u[nu]) <= 1e-3);
    CHECK_THROWS(brute_force_oracle(dicke({0.5, 0.5, 0.5}, {0.0, 0.0, 0.0}), 1.0, 0.1));
  }

  TEST_CASE("Hessian classification") {
    CHECK(hessian_check(rsh(0.3, 0.1, 0.1), CoherentPoint::zeros(1)).kind == HessianClass::positive_definite);
    // 2(1 - J~) - 2(U~ + gamma^2) = 0 in the u direction.
    const auto edge = hessian_check(rsh(std::sqrt(0.7), 0.2, 0.1), CoherentPoint::zeros(1));
    CHECK(edge.kind == HessianClass::singular);
    CHECK(std::abs(edge.eigenvalues[0]) < 1e-6);
    const ModelSpec m = dicke({0.7, 0.6}, {0.5, 0.5});
    const auto h = hessian_check(m, minimize(m).z_min);
    CHECK(h.kind == HessianClass::positive_definite);
    for (double e : h.eigenvalues) CHECK(e > 1e-3);
    CoherentPoint off = CoherentPoint::zeros(2);
    off.u[0] = 0.3;
    CHECK_THROWS_AS(hessian_check(m, off), DomainError);
  }

  TEST_CASE("unstable models throw") {
    CHECK_THROWS_AS(minimize(rsh(0.3, 0.65, 0.36)), UnstableModel);
    CHECK_THROWS_AS(minimize(dicke({0.3}, {1.0})), UnstableModel);
    CHECK_THROWS_AS(minimize(ars(0.3, 0.3, 1.0)), UnstableModel);
  }

  TEST_CASE("results are deterministic") {
    const ModelSpec m = ars(1.1, 0.7, 0.2);
    const MinimizeResult a = minimize(m);
    const MinimizeResult b = minimize(m);
    CHECK(a.phi_min == b.phi_min);
    CHECK(a.z_min.flat() == b.z_min.flat());
  }
}
