#pragma once
// Discrete geometry: uniform node-centered grid on a square, degree-1/2
// boundary data, and disc masks for the core-energy subproblem.

#include <cstdint>
#include <utility>
#include <vector>

#include "ldg/errors.hpp"
#include "ldg/sym3.hpp"

namespace ldg {

// Uniform grid with n nodes per side (n-1 cells), spacing h = side/(n-1).
// The outermost node ring is the Dirichlet boundary.
struct Grid2D {
    int n = 0;
    double ox = 0.0, oy = 0.0;  // position of node (0,0)
    double side = 1.0;
    double h = 0.0;

    Grid2D() = default;
    Grid2D(int n_, double ox_ = 0.0, double oy_ = 0.0, double side_ = 1.0);

    int idx(int i, int j) const { return j * n + i; }
    double x(int i) const { return ox + h * i; }
    double y(int j) const { return oy + h * j; }
    bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == n - 1 || j == n - 1; }
    int num_nodes() const { return n * n; }

    double cx() const { return ox + 0.5 * side; }  // center of the square
    double cy() const { return oy + 0.5 * side; }

    // Angle of (x,y) as seen from the square's center, wrapped to [0, 2pi).
    double boundary_angle(double x, double y) const;

    // Boundary node indices in counterclockwise order starting at node (0,0).
    std::vector<std::pair<int, int>> boundary_nodes_ccw() const;
};

// ---------------------------------------------------------------------------
// Degree-1/2 boundary data. With s the boundary angle around the center:
//   alpha(s) = s/2 + delta1 sin(s + phase1)   (longitude; gains pi over a loop)
//   betal(s) = delta2 sin(s/2 + phase2)       (latitude; anti-periodic)
//   u_b(s)   = n n^T,  n = (cos betal cos alpha, cos betal sin alpha, sin betal).
// Single-valued: s -> s + 2pi flips n, which leaves n n^T unchanged. A
// periodic latitude with the half-angle longitude would make u_b multivalued;
// the anti-periodic sin(s/2) form is the minimal fix.
struct BoundarySpec {
    double delta1 = 0.3;
    double delta2 = 0.2;
    double phase1 = 0.0;
    double phase2 = 0.0;

    void validate() const;  // |delta2| < pi/4 (latitude smallness), throws ValidationError
    Sym3 value(double s) const;
    Vec3 director(double s) const;  // the n above (sign is a gauge choice)
};

// Boundary values at every boundary node, counterclockwise from node (0,0).
std::vector<std::pair<int, Sym3>> boundary_trace(const BoundarySpec& spec, const Grid2D& g);

// ---------------------------------------------------------------------------
// Disc mask: interior nodes |x-a| < r plus the "ring" of exterior nodes with a
// 4-neighbor inside, where Dirichlet data is imposed.
struct DiscMask {
    std::vector<int> interior;       // node ids, row-major order
    std::vector<int> ring;           // node ids
    std::vector<std::uint8_t> role;  // per node: 0 outside, 1 interior, 2 ring
};

DiscMask disc_mask(const Grid2D& g, double ax, double ay, double r);

}  // namespace ldg
