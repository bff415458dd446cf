#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ldg/sym3.hpp"

namespace ldg {

// Deterministic-by-seed samplers for the property batteries. Distribution
// implementations may differ across standard libraries, so checks built on
// these must assert identities and tolerances, never frozen random streams.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi);
    Vec3 unit_vector();     // uniform on the sphere
    Rot3 rotation();        // Haar rotation via normalized quaternion
    Sym3 trace1_sym(double spread = 1.0);  // I/3 + Gaussian trace-free part
    Sym3 psd_trace1();      // Q D Q^T, D Dirichlet(1,1,1) on the simplex
    ProjectionMatrix projection();

  private:
    std::mt19937_64 rng_;
};

// Runs the algebra/domain property batteries (the invariants the library
// promises on random inputs) and reports per-battery pass/fail lines to the
// stream. Returns the number of failed checks; 0 means healthy.
struct SelfCheckResult {
    int checks = 0;
    int failures = 0;
};

SelfCheckResult run_selfcheck(std::uint64_t seed, std::ostream& out);

}  // namespace ldg
