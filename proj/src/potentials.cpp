#include "ldg/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

Vec3 bilinear_vec(const Grid2D& g, const std::vector<Vec3>& v, double px, double py) {
    double fx = (px - g.ox) / g.h, fy = (py - g.oy) / g.h;
    int ci = std::clamp(static_cast<int>(std::floor(fx)), 0, g.n - 2);
    int cj = std::clamp(static_cast<int>(std::floor(fy)), 0, g.n - 2);
    fx -= ci;
    fy -= cj;
    auto at = [&](int i, int j) -> const Vec3& { return v[static_cast<std::size_t>(g.idx(i, j))]; };
    const Vec3& v00 = at(ci, cj);
    const Vec3& v10 = at(ci + 1, cj);
    const Vec3& v01 = at(ci, cj + 1);
    const Vec3& v11 = at(ci + 1, cj + 1);
    auto mix = [&](double a, double b, double c, double d) {
        return (1 - fx) * (1 - fy) * a + fx * (1 - fy) * b + (1 - fx) * fy * c + fx * fy * d;
    };
    return {mix(v00.x, v10.x, v01.x, v11.x), mix(v00.y, v10.y, v01.y, v11.y),
            mix(v00.z, v10.z, v01.z, v11.z)};
}

}  // namespace

LambdaExtraction extract_lambda(const CurrentField& jf, double ax, double ay, double r0, int m) {
    const Grid2D& g = jf.grid;
    // theta_hat component of j on the circle, integrated by the midpoint rule
    // (spectrally accurate for periodic integrands).
    Vec3 acc{0, 0, 0};
    for (int k = 0; k < m; ++k) {
        const double th = 2.0 * std::numbers::pi * k / m;
        const double px = ax + r0 * std::cos(th), py = ay + r0 * std::sin(th);
        if (px < g.ox || py < g.oy || px > g.ox + g.side || py > g.oy + g.side) {
            throw CircleOutOfDomain("extract_lambda: circle leaves the grid");
        }
        const Vec3 j1 = bilinear_vec(g, jf.j1, px, py);
        const Vec3 j2 = bilinear_vec(g, jf.j2, px, py);
        const double c = std::cos(th), s = std::sin(th);
        // j . theta_hat with theta_hat = (-sin, cos)
        acc = acc + Vec3{-s * j1.x + c * j2.x, -s * j1.y + c * j2.y, -s * j1.z + c * j2.z};
    }
    const double dl = 2.0 * std::numbers::pi * r0 / m;
    Vec3 raw = acc * (dl / std::numbers::pi);

    LambdaExtraction out;
    out.raw_norm = norm(raw);
    if (out.raw_norm < 0.5) {
        std::ostringstream os;
        os << "degenerate circulation: |Lambda_raw| = " << out.raw_norm << " (expected ~1)";
        throw DegenerateLambda(os.str());
    }
    Vec3 w = raw * (1.0 / out.raw_norm);
    // Orientation: positive pairing against the canonical Lambda (axial e3);
    // if exactly orthogonal, fall back to the first nonzero component for a
    // deterministic sign.
    double pair = w.z;
    if (pair == 0.0) pair = (w.x != 0.0) ? w.x : w.y;
    if (pair < 0.0) w = w * -1.0;
    out.lambda = AntiSym3{w};
    out.p3 = Sym3::outer(w);
    return out;
}

Potentials recover_potentials(const CurrentField& jf, double ax, double ay,
                              const AntiSym3& lambda, const GreenFunction& green,
                              const std::vector<double>& radii, double eps, int m) {
    const Grid2D& g = jf.grid;
    if (green.grid.n != g.n || green.grid.h != g.h) {
        throw ValidationError("recover_potentials: Green function grid mismatch");
    }
    for (double r : radii) {
        if (r < 3.0 * eps) {
            std::ostringstream os;
            os << "psi_decay circle r=" << r << " overlaps the defect core (needs r >= 3 eps)";
            throw SingularOverlap(os.str());
        }
    }
    const std::size_t nn = static_cast<std::size_t>(g.n) * g.n;

    // --- Boundary data: integrate dPsi/dtau = -j.nu counterclockwise. -----
    // Segments are walked side by side so each one has an unambiguous
    // outward normal; corners are segment endpoints, never interior to one.
    std::vector<Vec3> psi_b(nn, Vec3{0, 0, 0});
    std::vector<std::pair<int, int>> walk;  // node sequence, closed
    for (int i = 0; i < g.n - 1; ++i) walk.emplace_back(i, 0);
    for (int j = 0; j < g.n - 1; ++j) walk.emplace_back(g.n - 1, j);
    for (int i = g.n - 1; i > 0; --i) walk.emplace_back(i, g.n - 1);
    for (int j = g.n - 1; j > 0; --j) walk.emplace_back(0, j);
    walk.emplace_back(0, 0);  // close the loop

    auto jnu = [&](int i, int j, double nx, double ny) {
        const std::size_t k = static_cast<std::size_t>(g.idx(i, j));
        return jf.j1[k] * nx + jf.j2[k] * ny;
    };
    auto side_normal = [&](const std::pair<int, int>& p, const std::pair<int, int>& q,
                           double& nx, double& ny) {
        if (p.second == 0 && q.second == 0) {
            nx = 0, ny = -1;  // bottom
        } else if (p.first == g.n - 1 && q.first == g.n - 1) {
            nx = 1, ny = 0;  // right
        } else if (p.second == g.n - 1 && q.second == g.n - 1) {
            nx = 0, ny = 1;  // top
        } else {
            nx = -1, ny = 0;  // left
        }
    };

    Vec3 cur{0, 0, 0};
    double tv = 0.0;
    std::vector<Vec3> psi_walk(walk.size());
    psi_walk[0] = cur;
    for (std::size_t s = 0; s + 1 < walk.size(); ++s) {
        double nx, ny;
        side_normal(walk[s], walk[s + 1], nx, ny);
        const Vec3 f0 = jnu(walk[s].first, walk[s].second, nx, ny);
        const Vec3 f1 = jnu(walk[s + 1].first, walk[s + 1].second, nx, ny);
        const Vec3 inc = (f0 + f1) * (-0.5 * g.h);  // trapezoid of -j.nu
        cur = cur + inc;
        tv += norm(inc);
        psi_walk[s + 1] = cur;
    }
    const Vec3 closure = psi_walk.back();  // should be ~0: total flux of j
    const double closure_norm = norm(closure);
    Potentials out;
    out.grid = g;
    out.closure_rel = tv > 0 ? closure_norm / tv : 0.0;
    if (out.closure_rel >= 0.01) {
        std::ostringstream os;
        os << "boundary closure defect " << out.closure_rel * 100
           << "% of total variation (>= 1%): current field is not divergence-free";
        throw ClosureDefect(os.str());
    }
    // Distribute the (small) defect linearly in arclength so the Dirichlet
    // data is single-valued.
    const double total_len = g.h * double(walk.size() - 1);
    for (std::size_t s = 0; s < walk.size(); ++s) {
        const double frac = (g.h * double(s)) / total_len;
        const Vec3 corrected = psi_walk[s] - closure * frac;
        psi_b[static_cast<std::size_t>(g.idx(walk[s].first, walk[s].second))] = corrected;
    }

    // --- Interior solve: Delta Psi = curl j, componentwise. ---------------
    out.psi.assign(nn, Vec3{0, 0, 0});
    for (int comp = 0; comp < 3; ++comp) {
        auto pick = [&](const Vec3& v) { return comp == 0 ? v.x : (comp == 1 ? v.y : v.z); };
        std::vector<double> rhs(nn, 0.0), bc(nn, 0.0);
        for (int j = 1; j < g.n - 1; ++j) {
            for (int i = 1; i < g.n - 1; ++i) {
                const double d1j2 = (pick(jf.j2[static_cast<std::size_t>(g.idx(i + 1, j))]) -
                                     pick(jf.j2[static_cast<std::size_t>(g.idx(i - 1, j))])) /
                                    (2.0 * g.h);
                const double d2j1 = (pick(jf.j1[static_cast<std::size_t>(g.idx(i, j + 1))]) -
                                     pick(jf.j1[static_cast<std::size_t>(g.idx(i, j - 1))])) /
                                    (2.0 * g.h);
                // -Delta Psi = -(curl j)
                rhs[static_cast<std::size_t>(g.idx(i, j))] = -(d1j2 - d2j1);
            }
        }
        for (int j = 0; j < g.n; ++j) {
            for (int i = 0; i < g.n; ++i) {
                if (i == 0 || j == 0 || i == g.n - 1 || j == g.n - 1) {
                    bc[static_cast<std::size_t>(g.idx(i, j))] =
                        pick(psi_b[static_cast<std::size_t>(g.idx(i, j))]);
                }
            }
        }
        std::vector<double> sol = poisson_dirichlet(g, rhs, bc);
        for (std::size_t k = 0; k < nn; ++k) {
            if (comp == 0) out.psi[k].x = sol[k];
            else if (comp == 1) out.psi[k].y = sol[k];
            else out.psi[k].z = sol[k];
        }
    }

    // --- Singular and Green splits. ----------------------------------------
    out.phi.assign(nn, Vec3{0, 0, 0});
    out.phi1.assign(nn, Vec3{0, 0, 0});
    const Vec3 w = lambda.w;
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            const std::size_t k = static_cast<std::size_t>(g.idx(i, j));
            const double rho = std::max(std::hypot(g.x(i) - ax, g.y(j) - ay), 1e-15);
            const double logpart = 0.5 * std::log(1.0 / rho);
            out.phi[k] = out.psi[k] - w * logpart;
            out.phi1[k] = out.psi[k] - w * (std::numbers::pi * green.G[k]);
        }
    }

    // --- psi_decay(r) = r * sup_{|x-a|=r} |grad phi|. ----------------------
    // Gradient by central differences on the grid (axial-vector norm), then
    // bilinear sampling on circles.
    std::vector<double> gradnorm(nn, 0.0);
    for (int j = 1; j < g.n - 1; ++j) {
        for (int i = 1; i < g.n - 1; ++i) {
            const Vec3 gx = (out.phi[static_cast<std::size_t>(g.idx(i + 1, j))] -
                             out.phi[static_cast<std::size_t>(g.idx(i - 1, j))]) *
                            (1.0 / (2.0 * g.h));
            const Vec3 gy = (out.phi[static_cast<std::size_t>(g.idx(i, j + 1))] -
                             out.phi[static_cast<std::size_t>(g.idx(i, j - 1))]) *
                            (1.0 / (2.0 * g.h));
            gradnorm[static_cast<std::size_t>(g.idx(i, j))] =
                std::sqrt(dot(gx, gx) + dot(gy, gy));
        }
    }
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end());
    for (double r : rs) {
        double sup = 0.0;
        for (int k = 0; k < m; ++k) {
            const double th = 2.0 * std::numbers::pi * k / m;
            const double px = ax + r * std::cos(th), py = ay + r * std::sin(th);
            double fx = (px - g.ox) / g.h, fy = (py - g.oy) / g.h;
            int ci = std::clamp(static_cast<int>(std::floor(fx)), 0, g.n - 2);
            int cj = std::clamp(static_cast<int>(std::floor(fy)), 0, g.n - 2);
            fx -= ci;
            fy -= cj;
            auto at = [&](int ii, int jj) { return gradnorm[static_cast<std::size_t>(g.idx(ii, jj))]; };
            const double v = (1 - fx) * (1 - fy) * at(ci, cj) + fx * (1 - fy) * at(ci + 1, cj) +
                             (1 - fx) * fy * at(ci, cj + 1) + fx * fy * at(ci + 1, cj + 1);
            sup = std::max(sup, v);
        }
        out.psi_decay.r.push_back(r);
        out.psi_decay.value.push_back(r * sup);
    }
    return out;
}

}  // namespace ldg
