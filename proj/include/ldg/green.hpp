#pragma once

#include <vector>

#include "ldg/grid.hpp"

namespace ldg {

// Solves -Delta_h u = rhs on the interior with prescribed boundary values.
// rhs and bc are full-grid arrays (n*n, row-major); bc is read only on
// boundary nodes, rhs only on interior nodes. Returns the full-grid solution.
std::vector<double> poisson_dirichlet(const Grid2D& g, const std::vector<double>& rhs,
                                      const std::vector<double>& bc);

// Discrete Green's function of -Delta_h on the square grid with zero
// Dirichlet data: -Delta_h G = delta_h(a), where the unit point mass is
// spread bilinearly over the four nodes around a (sum h^2 * rhs = 1). The
// Robin constant R(a,a) is the regular part G - (1/2pi) ln(1/|x-a|)
// extrapolated to x -> a quadratically along both grid directions, from
// probes far enough out that the lattice near-field of the discrete
// logarithm has decayed.
struct GreenFunction {
    Grid2D grid;
    double ax = 0, ay = 0;
    std::vector<double> G;  // full grid
    double robin = 0.0;
};

GreenFunction green_function(const Grid2D& g, double ax, double ay);

// Same quantity for a disc of radius R centered at (cx, cy), discretized on
// the given grid with a Shortley-Weller cut-cell Laplacian and solved by SOR.
// Exists to validate the Robin-constant extraction against the closed-form
// disc value R(a,a) = (1/2pi) ln((R^2 - |a-c|^2)/R). Returns the Robin
// constant only; tol is the SOR residual-reduction target.
double robin_disc(const Grid2D& g, double cx, double cy, double R, double ax, double ay,
                  double tol = 1e-10);

}  // namespace ldg
