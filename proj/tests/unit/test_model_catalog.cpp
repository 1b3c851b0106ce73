#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "spt/errors.hpp"
#include "spt/model_catalog.hpp"

using namespace spt;
using namespace testing;

TEST_SUITE("model_catalog") {
  TEST_CASE("coupling vector of the zero model") {
    const auto c = coupling_vector(rsh(0.0, 0.0, 0.0));
    CHECK(c.components == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(c.magnitude() == 0.0);
  }

  TEST_CASE("anisotropic coupling vector") {
    const auto c = coupling_vector(ars(0.8, 0.6, 0.36));
    REQUIRE(c.components.size() == 3);
    CHECK(c.components[0] == doctest::Approx(0.8));
    CHECK(c.components[1] == doctest::Approx(0.6));
    CHECK(c.components[2] == doctest::Approx(0.6));
    double sum = 0.0;
    for (double x : c.components) sum += x * x;
    CHECK(c.magnitude() * c.magnitude() == doctest::Approx(1.36).epsilon(1e-14));
    CHECK(sum == doctest::Approx(1.36).epsilon(1e-14));
  }

  TEST_CASE("two-mode Dicke coupling vector") {
    const auto c = coupling_vector(dicke({0.6245, 0.6}, {0.5, 0.5}));
    REQUIRE(c.components.size() == 4);
    CHECK(c.components[0] == 0.6245);
    CHECK(c.components[1] == 0.6);
    CHECK(c.components[2] == doctest::Approx(std::sqrt(0.5)));
    CHECK(c.components[3] == doctest::Approx(std::sqrt(0.5)));
  }

  TEST_CASE("negative Stark or hopping is a domain error") {
    CHECK_THROWS_AS(coupling_vector(rsh(0.5, -0.1, 0.0)), DomainError);
    CHECK_THROWS_AS(coupling_vector(ars(0.5, 0.5, -0.2)), DomainError);
    CHECK_THROWS_AS(validate(dicke({0.5}, {0.1, 0.2})), DomainError);
    CHECK_THROWS_AS(validate(dicke({}, {})), DomainError);
    ModelSpec hot = rsh(0.5, 0.1, 0.1);
    hot.thermal = FiniteTemperature{0.0};
    CHECK_THROWS_AS(validate(hot), DomainError);
    CHECK_THROWS_AS(validate(rsh(std::nan(""), 0.0, 0.0)), DomainError);
  }

  TEST_CASE("with_coupling inverts coupling_vector") {
    Draw d(11);
    for (ModelFamily f : kFamilies) {
      for (int i = 0; i < 20; ++i) {
        const ModelSpec m = random_stable(d, f);
        const auto c = coupling_vector(m).components;
        const auto back = coupling_vector(with_coupling(m, c)).components;
        REQUIRE(back.size() == c.size());
        for (std::size_t k = 0; k < c.size(); ++k) CHECK(back[k] == doctest::Approx(c[k]).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("search dimension") {
    CHECK(dicke({0.1, 0.2, 0.3}, {0.0, 0.0, 0.0}).search_dimension() == 6);
    CHECK(rsh(0.1, 0.1, 0.1).search_dimension() == 2);
    CHECK(ars(0.1, 0.1, 0.1).search_dimension() == 2);
  }

  TEST_CASE("stability conditions") {
    const auto r = stability_check(rsh(0.4, 0.65, 0.36));
    CHECK_FALSE(r.stable);
    CHECK(r.margin == doctest::Approx(-0.01));
    CHECK_FALSE(r.reason.empty());
    CHECK_FALSE(stability_check(dicke({0.3, 0.3}, {1.0, 0.2})).stable);
    CHECK_FALSE(stability_check(dicke({0.3}, {1.3})).stable);
    CHECK(stability_check(dicke({0.3}, {0.99})).stable);
    for (double g : {0.0, 0.5, 2.0, 10.0}) CHECK(stability_check(ars(g, 10.0 - g, 0.0)).stable);
    CHECK_FALSE(stability_check(ars(0.1, 0.1, 1.0)).stable);
    // Boundary-equal parameters are unstable with zero margin.
    const auto edge = stability_check(rsh(0.1, 0.5, 0.5));
    CHECK_FALSE(edge.stable);
    CHECK(edge.margin == 0.0);
  }
}
