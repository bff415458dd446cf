#pragma once

#include <vector>

#include "ldg/current.hpp"
#include "ldg/green.hpp"
#include "ldg/grid.hpp"
#include "ldg/profiles.hpp"
#include "ldg/sym3.hpp"

namespace ldg {

// Circulation-extracted constant of the current field:
//   Lambda_raw = (1/pi) * contour integral of j . theta_hat over |x-a| = r0,
// rescaled to |Lambda|_F = sqrt(2) (axial norm 1, i.e. Lambda^3 = -Lambda)
// and flipped so the pairing <Lambda, Lambda_canonical> is positive (the
// underlying geodesic fixes Lambda only up to orientation). P3 is the
// projection onto ker Lambda. Throws DegenerateLambda when the raw
// circulation is below half its expected magnitude.
struct LambdaExtraction {
    AntiSym3 lambda;      // unit axial vector
    Sym3 p3;              // outer product of the kernel direction
    double raw_norm = 0;  // axial norm of Lambda_raw (expected ~1)
};

LambdaExtraction extract_lambda(const CurrentField& jf, double ax, double ay, double r0 = 0.1,
                                int m = 512);

// Stream-potential split of the current field. With j = perp-grad Psi
// (perp-grad f = (-d2 f, d1 f)), Psi solves Delta Psi = d1 j2 - d2 j1 with
// Dirichlet data integrated from dPsi/dtau = -j.nu along the boundary. The
// loop closure of that integration (total circulation of j.nu) is reported
// relative to the total variation and must stay below 1%; the residue is
// distributed linearly in arclength before solving. Then
//   phi  = Psi - (1/2) ln(1/|x-a|) Lambda,
//   phi1 = Psi - pi G(x,a) Lambda,
// and psi_decay(r) = r * sup_{|x-a|=r} |grad phi| (axial-vector norm), which
// must trend to zero as r decreases for the limit split to hold.
struct Potentials {
    Grid2D grid;
    std::vector<Vec3> psi;   // axial components per node
    std::vector<Vec3> phi;
    std::vector<Vec3> phi1;
    double closure_rel = 0;  // |loop defect| / total variation of the boundary data
    RadialProfile psi_decay;
};

Potentials recover_potentials(const CurrentField& jf, double ax, double ay,
                              const AntiSym3& lambda, const GreenFunction& green,
                              const std::vector<double>& radii, double eps, int m = 512);

}  // namespace ldg
