#pragma once

#include <vector>

#include "ldg/field.hpp"
#include "ldg/grid.hpp"
#include "ldg/sym3.hpp"

namespace ldg {

// A diagnostic sampled on circles of given radii around the defect.
struct RadialProfile {
    std::vector<double> r;
    std::vector<double> value;
};

// Geometric ladder of radii from r_lo to r_hi inclusive (count >= 2),
// ascending. The analysis theorems live on annuli, so log-spaced circles give
// even coverage in ln r.
std::vector<double> radius_ladder(double r_lo, double r_hi, int count);

// Per radius: discrete length of the image curve theta -> u(a + r e(theta))
// in Frobenius metric (m chords), plus the mean Frobenius distance from the
// sampled images to the best-fit closed geodesic of the vacuum manifold.
// Closed geodesics are exactly {qq^T : q in a fixed 2-plane}, so the fit is
// the principal 2-plane of the second-moment matrix of the leading
// eigenvector samples.
struct GeodesicProfiles {
    RadialProfile length;        // should approach sqrt(2)*pi
    RadialProfile geodesic_fit;  // mean distance to best-fit geodesic
};

GeodesicProfiles geodesic_length_profile(const Field& f, double ax, double ay,
                                         const std::vector<double>& radii, int m = 512);

// Sup over each circle of three decay diagnostics of the limit theory:
//   latitude   sup |<u, P3>|          (inner product with the polar projection)
//   comm_p3    sup |[u, P3]|          (Frobenius norm)
//   comm_flat  sup |[Lambda, [u, u0]]| (u0 = canonical flat map at the defect)
// All three tend to 0 as r -> 0 for the limit map; at desk scale they should
// decay from the outer radius down to ~5 eps.
struct DecayProfiles {
    RadialProfile latitude;
    RadialProfile comm_p3;
    RadialProfile comm_flat;
};

DecayProfiles radial_decay_diagnostics(const Field& f, double ax, double ay,
                                       const std::vector<double>& radii, const AntiSym3& lambda,
                                       const Sym3& p3, int m = 512);

// Latitude/longitude lift of the leading eigenvector n on circles:
//   beta_lat = arcsin(n3), alpha = unwrapped phase of (n1, n2),
//   alpha1 = 2*alpha - theta (single-valued for a degree-1/2 field),
//   alpha_star = circle mean of alpha1 on the innermost circle.
// Circles are processed outermost-first with vector-level sign alignment
// between consecutive circles at theta = 0, so branch choices are
// deterministic. Throws LatitudeTooLarge if sup |<u,P3>| >= 1/2 on any
// circle (the lift is only defined for small latitudes) and
// UnwrapInconsistent if the accumulated phase over a loop is not pi within
// 0.1 (the field must carry a single +1/2 winding).
struct LiftAngles {
    std::vector<double> radii;                   // as given
    std::vector<std::vector<double>> alpha1;     // per circle, m samples
    std::vector<std::vector<double>> beta_lat;   // per circle, m samples
    double alpha_star = 0.0;                     // mean alpha1 on the innermost circle
    RadialProfile alpha1_deviation;              // circle mean of |alpha1 - alpha_star|
};

LiftAngles lift_angles(const Field& f, double ax, double ay, const std::vector<double>& radii,
                       const Sym3& p3, int m = 512);

}  // namespace ldg
