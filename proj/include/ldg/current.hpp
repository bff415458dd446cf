#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "ldg/field.hpp"
#include "ldg/grid.hpp"
#include "ldg/sym3.hpp"

namespace ldg {

// Spatial derivatives of a trace-1 field, returned as traceless Sym3 (the
// identity part is constant). Central differences in the interior, one-sided
// second-order stencils on the boundary so every node has a value.
Sym3 field_dx(const Field& f, int i, int j);
Sym3 field_dy(const Field& f, int i, int j);

// Current vector j_k = [u, d_k u], stored through the axial-vector
// isomorphism: an antisymmetric A corresponds to w with A v = w x v and
// |A|_F = sqrt(2)|w|.
struct CurrentField {
    Grid2D grid;
    std::vector<Vec3> j1, j2;  // axial vectors per node
};

CurrentField current_vector(const Field& f);

// Relative L2 residual of the pointwise identity du/dz = [u, j(u)] over the
// annulus rin < |x-a| < rout. Exact for projection-valued maps, so the
// residual measures how far the field sits from the vacuum manifold.
double nabla_commutator_residual(const Field& f, const CurrentField& jf, double ax, double ay,
                                 double rin, double rout);

// Hopf differential w(z) = tr((du/dz)^2) with d/dz = (d_1 - i d_2)/2.
// For the canonical degree-1/2 field this is -1/(8(z-a)^2); the modulus of
// the associated root satisfies |mu| = sqrt(|w|/2). Values are computed at
// every node; `valid` marks the annulus 3*eps < |x-a| < dist(a, boundary)/2
// where the limit theory applies.
struct HopfField {
    Grid2D grid;
    std::vector<std::complex<double>> omega;
    std::vector<std::uint8_t> valid;
};

HopfField hopf_differential(const Field& f, double ax, double ay, double eps);

inline double mu_magnitude(const std::complex<double>& omega) {
    return std::sqrt(std::abs(omega) / 2.0);
}

// Circle means of the Hopf-derived pole diagnostics around (ax, ay), one row
// per radius (m uniform samples, omega bilinearly interpolated):
//   zmu_abs   mean of |z-a| |mu|        (flat-map value 1/4, r-independent)
//   inv_mu    mean of 1/|mu|            (flat-map value 4|z-a|, linear in r)
//   zsq_re/im mean of (z-a)^2 omega     (flat-map value -1/8)
// Radii must keep the circles inside the grid (CircleOutOfDomain otherwise).
struct HopfCircleStats {
    std::vector<double> r;
    std::vector<double> zmu_abs;
    std::vector<double> inv_mu;
    std::vector<double> zsq_re;
    std::vector<double> zsq_im;
};

HopfCircleStats hopf_circle_stats(const HopfField& hf, double ax, double ay,
                                  const std::vector<double>& radii, int m = 512);

// Nonnegative branch of the area-factor angle g, defined through
// sinh(2g) = sqrt(2) |[conj(j_C), j_C]|_F / |omega| with j_C = [u, du/dz].
// In axial form this collapses to |w1 x w2| / |omega| with w_k the axial
// vector of j_k. `valid` requires the Hopf mask and |omega| above the floor
// 1e-8 (omega has isolated zeros where g is undefined).
struct GField {
    Grid2D grid;
    std::vector<double> g;
    std::vector<std::uint8_t> valid;
};

GField extract_g(const CurrentField& jf, const HopfField& hf);

// Relative L2 residual of -Delta g = |omega| sinh(2g) over valid nodes whose
// 4-neighborhood is valid and where |omega|sinh(2g) exceeds a noise floor.
// Empty support returns nullopt (not-applicable, never a fake zero): the
// magnitude-derived g loses sign information, so g ~ 0 regions carry no
// testable signal.
std::optional<double> sinh_gordon_residual(const GField& gf, const HopfField& hf);

}  // namespace ldg
