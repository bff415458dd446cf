#include "ldg/green.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <vector>

#include "ldg/dst_poisson.hpp"
#include "ldg/errors.hpp"

namespace ldg {

namespace {

// Bilinear interpolation of a full-grid scalar array.
double interp(const Grid2D& g, const std::vector<double>& v, double px, double py) {
    double fx = (px - g.ox) / g.h, fy = (py - g.oy) / g.h;
    int ci = std::clamp(static_cast<int>(std::floor(fx)), 0, g.n - 2);
    int cj = std::clamp(static_cast<int>(std::floor(fy)), 0, g.n - 2);
    fx -= ci;
    fy -= cj;
    const double v00 = v[static_cast<std::size_t>(g.idx(ci, cj))];
    const double v10 = v[static_cast<std::size_t>(g.idx(ci + 1, cj))];
    const double v01 = v[static_cast<std::size_t>(g.idx(ci, cj + 1))];
    const double v11 = v[static_cast<std::size_t>(g.idx(ci + 1, cj + 1))];
    return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
}

// Regular part R = G - (1/2pi) ln(1/|x-a|) extrapolated to x = a.
// Quadratic (3-point Lagrange to t=0: 3R(d) - 3R(2d) + R(3d)) along each of
// the four axis directions, then averaged; the average kills the leading
// anisotropic lattice correction, the extrapolation the smooth variation.
double robin_extrapolate(const Grid2D& g, const std::vector<double>& G, double ax, double ay,
                         double d) {
    const double dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    double acc = 0.0;
    for (const auto& dir : dirs) {
        double Rt[3];
        for (int k = 1; k <= 3; ++k) {
            const double px = ax + dir[0] * k * d, py = ay + dir[1] * k * d;
            const double reg = interp(g, G, px, py) -
                               std::log(1.0 / (k * d)) / (2.0 * std::numbers::pi);
            Rt[k - 1] = reg;
        }
        acc += 3.0 * Rt[0] - 3.0 * Rt[1] + Rt[2];
    }
    return acc / 4.0;
}

// Bilinear unit point mass at (ax, ay): weights on the four surrounding
// nodes, scaled by 1/h^2 so the discrete integral h^2 * sum(rhs) is 1.
void spread_delta(const Grid2D& g, double ax, double ay, std::vector<double>& rhs) {
    double fx = (ax - g.ox) / g.h, fy = (ay - g.oy) / g.h;
    const int ci = std::clamp(static_cast<int>(std::floor(fx)), 0, g.n - 2);
    const int cj = std::clamp(static_cast<int>(std::floor(fy)), 0, g.n - 2);
    fx -= ci;
    fy -= cj;
    if (ci < 1 || cj < 1 || ci + 1 > g.n - 2 || cj + 1 > g.n - 2) {
        throw ValidationError("green_function: source too close to the boundary");
    }
    const double s = 1.0 / (g.h * g.h);
    rhs[static_cast<std::size_t>(g.idx(ci, cj))] += (1 - fx) * (1 - fy) * s;
    rhs[static_cast<std::size_t>(g.idx(ci + 1, cj))] += fx * (1 - fy) * s;
    rhs[static_cast<std::size_t>(g.idx(ci, cj + 1))] += (1 - fx) * fy * s;
    rhs[static_cast<std::size_t>(g.idx(ci + 1, cj + 1))] += fx * fy * s;
}

}  // namespace

std::vector<double> poisson_dirichlet(const Grid2D& g, const std::vector<double>& rhs,
                                      const std::vector<double>& bc) {
    const int L = g.n - 2;
    std::vector<double> rl(static_cast<std::size_t>(L) * L);
    const double invh2 = 1.0 / (g.h * g.h);
    for (int j = 1; j <= L; ++j) {
        for (int i = 1; i <= L; ++i) {
            double v = rhs[static_cast<std::size_t>(g.idx(i, j))];
            // Fold prescribed boundary neighbors into the right-hand side of
            // the homogeneous problem.
            if (i == 1) v += bc[static_cast<std::size_t>(g.idx(0, j))] * invh2;
            if (i == L) v += bc[static_cast<std::size_t>(g.idx(L + 1, j))] * invh2;
            if (j == 1) v += bc[static_cast<std::size_t>(g.idx(i, 0))] * invh2;
            if (j == L) v += bc[static_cast<std::size_t>(g.idx(i, L + 1))] * invh2;
            rl[static_cast<std::size_t>((j - 1) * L + (i - 1))] = v;
        }
    }
    DirichletSpectralSolver solver(L, g.h);
    solver.solve(rl, 0.0, 1.0);

    std::vector<double> out = bc;  // boundary values kept as prescribed
    for (int j = 1; j <= L; ++j) {
        for (int i = 1; i <= L; ++i) {
            out[static_cast<std::size_t>(g.idx(i, j))] =
                rl[static_cast<std::size_t>((j - 1) * L + (i - 1))];
        }
    }
    return out;
}

GreenFunction green_function(const Grid2D& g, double ax, double ay) {
    const std::size_t nn = static_cast<std::size_t>(g.n) * g.n;
    std::vector<double> rhs(nn, 0.0), bc(nn, 0.0);
    spread_delta(g, ax, ay, rhs);

    GreenFunction gf;
    gf.grid = g;
    gf.ax = ax;
    gf.ay = ay;
    gf.G = poisson_dirichlet(g, rhs, bc);

    // Probe distance: far enough (>= 8h) that the lattice near-field of the
    // discrete logarithm is O(h^2/d^2) ~ 1.5%, close enough that 3d stays
    // well inside the domain.
    const double x0 = g.ox, x1 = g.ox + g.side, y0 = g.oy, y1 = g.oy + g.side;
    const double dbdry = std::min(std::min(ax - x0, x1 - ax), std::min(ay - y0, y1 - ay));
    const double d = std::min(std::max(8.0 * g.h, 0.02), (dbdry - 2.0 * g.h) / 3.0);
    if (d < 4.0 * g.h) {
        throw ValidationError("green_function: source too close to the boundary for Robin probes");
    }
    gf.robin = robin_extrapolate(g, gf.G, ax, ay, d);
    return gf;
}

double robin_disc(const Grid2D& g, double cx, double cy, double R, double ax, double ay,
                  double tol) {
    if (std::hypot(ax - cx, ay - cy) >= R - 6.0 * g.h) {
        throw ValidationError("robin_disc: source too close to the circle");
    }
    if (cx - R < g.ox + g.h || cx + R > g.ox + g.side - g.h || cy - R < g.oy + g.h ||
        cy + R > g.oy + g.side - g.h) {
        throw ValidationError("robin_disc: disc must sit strictly inside the grid");
    }
    const std::size_t nn = static_cast<std::size_t>(g.n) * g.n;

    // Interior-of-disc flags on the square grid.
    std::vector<std::uint8_t> in(nn, 0);
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            const double dx = g.x(i) - cx, dy = g.y(j) - cy;
            if (dx * dx + dy * dy < R * R) in[static_cast<std::size_t>(g.idx(i, j))] = 1;
        }
    }

    // Shortley-Weller cut distances: for each interior node and axis
    // direction whose neighbor leaves the disc, theta in (0,1] is the
    // fraction of h at which the segment meets the circle (where G = 0).
    struct Stencil {
        double tE = 1, tW = 1, tN = 1, tS = 1;
        double diag = 0;
    };
    std::vector<Stencil> st(nn);
    auto cut = [&](double px, double py, double dx, double dy) {
        // Smallest t in (0,1] with |p + t h d - c| = R.
        const double rx = px - cx, ry = py - cy;
        const double A = g.h * g.h * (dx * dx + dy * dy);
        const double B = 2.0 * g.h * (rx * dx + ry * dy);
        const double C = rx * rx + ry * ry - R * R;
        const double disc = B * B - 4 * A * C;
        const double t = (-B + std::sqrt(std::max(disc, 0.0))) / (2 * A);
        return std::clamp(t, 1e-6, 1.0);
    };
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            const std::size_t k = static_cast<std::size_t>(g.idx(i, j));
            if (!in[k]) continue;
            Stencil& s = st[k];
            const double px = g.x(i), py = g.y(j);
            if (i == g.n - 1 || !in[static_cast<std::size_t>(g.idx(i + 1, j))])
                s.tE = cut(px, py, 1, 0);
            if (i == 0 || !in[static_cast<std::size_t>(g.idx(i - 1, j))])
                s.tW = cut(px, py, -1, 0);
            if (j == g.n - 1 || !in[static_cast<std::size_t>(g.idx(i, j + 1))])
                s.tN = cut(px, py, 0, 1);
            if (j == 0 || !in[static_cast<std::size_t>(g.idx(i, j - 1))])
                s.tS = cut(px, py, 0, -1);
            s.diag = 2.0 / (s.tE * s.tW) + 2.0 / (s.tN * s.tS);
        }
    }

    std::vector<double> rhs(nn, 0.0);
    spread_delta(g, ax, ay, rhs);

    // SOR with the cut-cell five-point stencil; the operator is an M-matrix,
    // so over-relaxation with the Poisson-optimal factor converges.
    std::vector<double> u(nn, 0.0);
    const double omega =
        std::min(2.0 / (1.0 + std::sin(std::numbers::pi * g.h / (2.0 * R))), 1.95);
    const double invh2 = 1.0 / (g.h * g.h);
    const int max_sweeps = 200000;
    double res0 = -1.0;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double res = 0.0;
        for (int j = 1; j < g.n - 1; ++j) {
            for (int i = 1; i < g.n - 1; ++i) {
                const std::size_t k = static_cast<std::size_t>(g.idx(i, j));
                if (!in[k]) continue;
                const Stencil& s = st[k];
                double acc = rhs[k] / invh2;  // scale by h^2: work with dimensionless stencil
                if (s.tE >= 1.0) acc += 2.0 * u[static_cast<std::size_t>(g.idx(i + 1, j))] /
                                        (s.tE * (s.tE + s.tW));
                if (s.tW >= 1.0) acc += 2.0 * u[static_cast<std::size_t>(g.idx(i - 1, j))] /
                                        (s.tW * (s.tE + s.tW));
                if (s.tN >= 1.0) acc += 2.0 * u[static_cast<std::size_t>(g.idx(i, j + 1))] /
                                        (s.tN * (s.tN + s.tS));
                if (s.tS >= 1.0) acc += 2.0 * u[static_cast<std::size_t>(g.idx(i, j - 1))] /
                                        (s.tS * (s.tN + s.tS));
                const double unew = acc / s.diag;
                const double delta = unew - u[k];
                u[k] += omega * delta;
                res = std::max(res, std::fabs(delta));
            }
        }
        if (res0 < 0.0) res0 = std::max(res, 1e-300);
        if (res <= tol * res0) break;
        if (sweep == max_sweeps - 1) {
            throw MaxIterations("robin_disc: SOR did not reach the residual target");
        }
    }

    const double margin = R - std::hypot(ax - cx, ay - cy);
    const double d = std::max(4.0 * g.h, std::min(std::max(8.0 * g.h, 0.02), (margin - 2.0 * g.h) / 3.0));
    return robin_extrapolate(g, u, ax, ay, d);
}

}  // namespace ldg
