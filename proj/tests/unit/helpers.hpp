#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "spt/model_catalog.hpp"

namespace testing {

inline spt::ModelSpec dicke(std::vector<double> g, std::vector<double> gp, int qubits = 1) {
  return spt::ModelSpec{spt::MultimodeDicke12{std::move(g), std::move(gp), qubits}};
}
inline spt::ModelSpec rsh(double g, double j, double u) { return spt::ModelSpec{spt::RabiStarkHubbard{g, j, u}}; }
inline spt::ModelSpec ars(double g1, double g2, double u) {
  return spt::ModelSpec{spt::AnisotropicRabiStark{g1, g2, u}};
}

// Platform-independent uniform draws (std::uniform_real_distribution is not).
class Draw {
 public:
  explicit Draw(unsigned long long seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * std::ldexp(static_cast<double>(rng_() >> 11), -53); }

 private:
  std::mt19937_64 rng_;
};

inline spt::ModelSpec random_stable(Draw& d, spt::ModelFamily family) {
  switch (family) {
    case spt::ModelFamily::multimode_dicke:
      return dicke({d.uniform(0.0, 1.2), d.uniform(0.0, 1.2)}, {d.uniform(0.0, 0.9), d.uniform(0.0, 0.9)});
    case spt::ModelFamily::rabi_stark_hubbard: {
      const double j = d.uniform(0.0, 0.6);
      return rsh(d.uniform(0.0, 1.3), j, d.uniform(0.0, 0.95 - j));
    }
    case spt::ModelFamily::anisotropic_rabi_stark:
      return ars(d.uniform(0.0, 1.3), d.uniform(0.0, 1.3), d.uniform(0.0, 0.95));
  }
  return {};
}

inline constexpr spt::ModelFamily kFamilies[] = {spt::ModelFamily::multimode_dicke,
                                                 spt::ModelFamily::rabi_stark_hubbard,
                                                 spt::ModelFamily::anisotropic_rabi_stark};

}  // namespace testing
