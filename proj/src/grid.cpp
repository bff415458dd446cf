#include "ldg/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ldg {

Grid2D::Grid2D(int n_, double ox_, double oy_, double side_)
    : n(n_), ox(ox_), oy(oy_), side(side_) {
    if (n < 16) {
        std::ostringstream os;
        os << "Grid2D: n = " << n << " below the minimum of 16 nodes per side";
        throw ValidationError(os.str());
    }
    if (side <= 0.0) throw ValidationError("Grid2D: side length must be positive");
    h = side / (n - 1);
}

double Grid2D::boundary_angle(double px, double py) const {
    double t = std::atan2(py - cy(), px - cx());
    if (t < 0) t += 2.0 * std::numbers::pi;
    return t;
}

std::vector<std::pair<int, int>> Grid2D::boundary_nodes_ccw() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(4 * (n - 1));
    for (int i = 0; i < n - 1; ++i) out.emplace_back(i, 0);          // bottom, left->right
    for (int j = 0; j < n - 1; ++j) out.emplace_back(n - 1, j);      // right, bottom->top
    for (int i = n - 1; i > 0; --i) out.emplace_back(i, n - 1);      // top, right->left
    for (int j = n - 1; j > 0; --j) out.emplace_back(0, j);          // left, top->bottom
    return out;
}

// ---------------------------------------------------------------------------
void BoundarySpec::validate() const {
    const double limit = std::numbers::pi / 4.0;
    if (!(std::abs(delta2) < limit)) {
        std::ostringstream os;
        os << "BoundarySpec: |delta2| = " << std::abs(delta2) << " >= pi/4 = " << limit
           << "; the latitude smallness assumption would fail";
        throw ValidationError(os.str());
    }
}

Vec3 BoundarySpec::director(double s) const {
    double alpha = 0.5 * s + delta1 * std::sin(s + phase1);
    double betal = delta2 * std::sin(0.5 * s + phase2);
    double cb = std::cos(betal);
    return {cb * std::cos(alpha), cb * std::sin(alpha), std::sin(betal)};
}

Sym3 BoundarySpec::value(double s) const { return Sym3::outer(director(s)); }

std::vector<std::pair<int, Sym3>> boundary_trace(const BoundarySpec& spec, const Grid2D& g) {
    spec.validate();
    std::vector<std::pair<int, Sym3>> out;
    out.reserve(4 * (g.n - 1));
    for (auto [i, j] : g.boundary_nodes_ccw()) {
        double s = g.boundary_angle(g.x(i), g.y(j));
        out.emplace_back(g.idx(i, j), spec.value(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
DiscMask disc_mask(const Grid2D& g, double ax, double ay, double r) {
    // The disc (including its ring) must fit strictly inside the grid.
    double margin = r + g.h;
    if (ax - margin < g.ox || ax + margin > g.ox + g.side || ay - margin < g.oy ||
        ay + margin > g.oy + g.side) {
        std::ostringstream os;
        os << "disc_mask: disc center (" << ax << "," << ay << ") radius " << r
           << " does not fit inside the grid";
        throw DiscOutOfDomain(os.str());
    }

    DiscMask m;
    m.role.assign(g.num_nodes(), 0);
    double r2 = r * r;
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            double dx = g.x(i) - ax, dy = g.y(j) - ay;
            if (dx * dx + dy * dy < r2) {
                m.role[g.idx(i, j)] = 1;
                m.interior.push_back(g.idx(i, j));
            }
        }
    }
    if (m.interior.empty()) {
        std::ostringstream os;
        os << "disc_mask: radius " << r << " encloses no grid node (h = " << g.h << ")";
        throw DiscOutOfDomain(os.str());
    }
    // Ring: exterior nodes 4-adjacent to an interior node.
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            if (m.role[g.idx(i, j)] != 0) continue;
            bool adj = (i > 0 && m.role[g.idx(i - 1, j)] == 1) ||
                       (i < g.n - 1 && m.role[g.idx(i + 1, j)] == 1) ||
                       (j > 0 && m.role[g.idx(i, j - 1)] == 1) ||
                       (j < g.n - 1 && m.role[g.idx(i, j + 1)] == 1);
            if (adj) {
                m.role[g.idx(i, j)] = 2;
                m.ring.push_back(g.idx(i, j));
            }
        }
    }
    return m;
}

}  // namespace ldg
