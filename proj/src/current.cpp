#include "ldg/current.hpp"

#include <cmath>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

// One-dimensional derivative of coordinate plane c along i at fixed j (axis=0)
// or along j at fixed i (axis=1). Central in the interior, second-order
// one-sided at the two ends, all O(h^2).
inline double d1(const Field& f, int comp, int i, int j, int axis) {
    const Grid2D& g = f.grid;
    const double inv2h = 1.0 / (2.0 * g.h);
    const int p = axis == 0 ? i : j;
    auto val = [&](int q) {
        return axis == 0 ? f.at(q, j)[comp] : f.at(i, q)[comp];
    };
    if (p == 0) return (-3.0 * val(0) + 4.0 * val(1) - val(2)) * inv2h;
    if (p == g.n - 1) return (3.0 * val(p) - 4.0 * val(p - 1) + val(p - 2)) * inv2h;
    return (val(p + 1) - val(p - 1)) * inv2h;
}

inline Sym3 field_deriv(const Field& f, int i, int j, int axis) {
    Traceless5 q{{d1(f, 0, i, j, axis), d1(f, 1, i, j, axis), d1(f, 2, i, j, axis),
                  d1(f, 3, i, j, axis), d1(f, 4, i, j, axis)}};
    return reconstruct_traceless(q);
}

}  // namespace

Sym3 field_dx(const Field& f, int i, int j) { return field_deriv(f, i, j, 0); }
Sym3 field_dy(const Field& f, int i, int j) { return field_deriv(f, i, j, 1); }

CurrentField current_vector(const Field& f) {
    const Grid2D& g = f.grid;
    CurrentField cf;
    cf.grid = g;
    const std::size_t nn = static_cast<std::size_t>(g.n) * g.n;
    cf.j1.resize(nn);
    cf.j2.resize(nn);
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            const Sym3 u = f.value(i, j);
            const std::size_t k = g.idx(i, j);
            cf.j1[k] = commutator(u, field_dx(f, i, j)).w;
            cf.j2[k] = commutator(u, field_dy(f, i, j)).w;
        }
    }
    return cf;
}

double nabla_commutator_residual(const Field& f, const CurrentField& jf, double ax, double ay,
                                 double rin, double rout) {
    const Grid2D& g = f.grid;
    double num = 0.0, den = 0.0;
    for (int j = 1; j < g.n - 1; ++j) {
        for (int i = 1; i < g.n - 1; ++i) {
            const double dx = g.x(i) - ax, dy = g.y(j) - ay;
            const double rho = std::hypot(dx, dy);
            if (rho <= rin || rho >= rout) continue;
            const Sym3 u = f.value(i, j);
            const Sym3 ux = field_dx(f, i, j);
            const Sym3 uy = field_dy(f, i, j);
            const std::size_t k = g.idx(i, j);
            // du/dz = [u, j(u)] splits into real/imaginary parts:
            //   d1 u = [j2, u]... careful: with j_C = (j1 - i j2)/2 and
            //   dz u = (d1 u - i d2 u)/2, the identity dz u = [u, j_C] reads
            //   d1 u = [u, A1] and d2 u = [u, A2] with A_k the antisym of j_k.
            const Sym3 c1 = commutator(AntiSym3{jf.j1[k]}, u);  // [A1, u] = -[u, A1]
            const Sym3 c2 = commutator(AntiSym3{jf.j2[k]}, u);
            const Sym3 r1 = ux + c1;  // ux - [u, A1]
            const Sym3 r2 = uy + c2;
            num += inner(r1, r1) + inner(r2, r2);
            den += inner(ux, ux) + inner(uy, uy);
        }
    }
    if (den == 0.0) return 0.0;
    return std::sqrt(num / den);
}

HopfField hopf_differential(const Field& f, double ax, double ay, double eps) {
    const Grid2D& g = f.grid;
    HopfField hf;
    hf.grid = g;
    const std::size_t nn = static_cast<std::size_t>(g.n) * g.n;
    hf.omega.resize(nn);
    hf.valid.assign(nn, 0);

    // Distance from the defect to the boundary of the square; the theorems
    // hold on 3*eps < |x-a| < d_bdry/2.
    const double x0 = g.ox, x1 = g.ox + g.side;
    const double y0 = g.oy, y1 = g.oy + g.side;
    const double dbdry = std::min(std::min(ax - x0, x1 - ax), std::min(ay - y0, y1 - ay));
    const double rin = 3.0 * eps, rout = dbdry / 2.0;

    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            const Sym3 ux = field_dx(f, i, j);
            const Sym3 uy = field_dy(f, i, j);
            // tr((dz u)^2) with dz = (d1 - i d2)/2; for symmetric A, B we have
            // tr(AB) = <A, B>.
            const double re = 0.25 * (inner(ux, ux) - inner(uy, uy));
            const double im = -0.5 * inner(ux, uy);
            const std::size_t k = g.idx(i, j);
            hf.omega[k] = {re, im};
            const double rho = std::hypot(g.x(i) - ax, g.y(j) - ay);
            hf.valid[k] = (rho > rin && rho < rout) ? 1 : 0;
        }
    }
    return hf;
}

GField extract_g(const CurrentField& jf, const HopfField& hf) {
    const Grid2D& g = jf.grid;
    GField gf;
    gf.grid = g;
    const std::size_t nn = static_cast<std::size_t>(g.n) * g.n;
    gf.g.assign(nn, 0.0);
    gf.valid.assign(nn, 0);
    constexpr double kOmegaFloor = 1e-8;
    for (std::size_t k = 0; k < nn; ++k) {
        const double ao = std::abs(hf.omega[k]);
        if (!hf.valid[k] || ao <= kOmegaFloor) continue;
        // [conj(j_C), j_C] has axial vector -(i/2) w1 x w2, hence Frobenius
        // norm |w1 x w2| / sqrt(2) and sinh(2g) = |w1 x w2| / |omega|.
        const double area = norm(cross(jf.j1[k], jf.j2[k]));
        gf.g[k] = 0.5 * std::asinh(area / ao);
        gf.valid[k] = 1;
    }
    return gf;
}

std::optional<double> sinh_gordon_residual(const GField& gf, const HopfField& hf) {
    const Grid2D& g = gf.grid;
    // Noise floor on the source term: below this, g is numerically
    // indistinguishable from the sign-lost zero set and the PDE residual is
    // 0/0.
    constexpr double kFloor = 1e-6;
    double num = 0.0, den = 0.0;
    std::size_t support = 0;
    const double invh2 = 1.0 / (g.h * g.h);
    for (int j = 1; j < g.n - 1; ++j) {
        for (int i = 1; i < g.n - 1; ++i) {
            const std::size_t k = g.idx(i, j);
            if (!gf.valid[k] || !gf.valid[g.idx(i - 1, j)] || !gf.valid[g.idx(i + 1, j)] ||
                !gf.valid[g.idx(i, j - 1)] || !gf.valid[g.idx(i, j + 1)]) {
                continue;
            }
            const double src = std::abs(hf.omega[k]) * std::sinh(2.0 * gf.g[k]);
            if (src <= kFloor) continue;
            const double lap = (gf.g[g.idx(i - 1, j)] + gf.g[g.idx(i + 1, j)] +
                                gf.g[g.idx(i, j - 1)] + gf.g[g.idx(i, j + 1)] - 4.0 * gf.g[k]) *
                               invh2;
            const double res = lap + src;  // -Delta g = |omega| sinh 2g
            num += res * res;
            den += src * src;
            ++support;
        }
    }
    if (support == 0 || den == 0.0) return std::nullopt;
    return std::sqrt(num / den);
}

HopfCircleStats hopf_circle_stats(const HopfField& hf, double ax, double ay,
                                  const std::vector<double>& radii, int m) {
    const Grid2D& g = hf.grid;
    HopfCircleStats st;
    for (double r : radii) {
        if (!(r > 0.0) || ax - r < g.ox || ax + r > g.ox + g.side || ay - r < g.oy ||
            ay + r > g.oy + g.side) {
            throw CircleOutOfDomain("hopf circle r = " + std::to_string(r) +
                                    " leaves the grid around (" + std::to_string(ax) + ", " +
                                    std::to_string(ay) + ")");
        }
        double zmu = 0.0, inv = 0.0;
        std::complex<double> zsq{0.0, 0.0};
        for (int k = 0; k < m; ++k) {
            const double th = 2.0 * M_PI * k / m;
            const double px = ax + r * std::cos(th);
            const double py = ay + r * std::sin(th);
            // Bilinear interpolation of the gridded omega (re and im parts).
            double fx = (px - g.ox) / g.h, fy = (py - g.oy) / g.h;
            int i0 = std::min(std::max(0, static_cast<int>(std::floor(fx))), g.n - 2);
            int j0 = std::min(std::max(0, static_cast<int>(std::floor(fy))), g.n - 2);
            const double tx = fx - i0, ty = fy - j0;
            const std::complex<double> w =
                (1 - tx) * (1 - ty) * hf.omega[g.idx(i0, j0)] +
                tx * (1 - ty) * hf.omega[g.idx(i0 + 1, j0)] +
                (1 - tx) * ty * hf.omega[g.idx(i0, j0 + 1)] + tx * ty * hf.omega[g.idx(i0 + 1, j0 + 1)];
            const double mu = mu_magnitude(w);
            zmu += r * mu;
            inv += mu > 0.0 ? 1.0 / mu : 0.0;
            const std::complex<double> z{r * std::cos(th), r * std::sin(th)};
            zsq += z * z * w;
        }
        st.r.push_back(r);
        st.zmu_abs.push_back(zmu / m);
        st.inv_mu.push_back(inv / m);
        st.zsq_re.push_back(zsq.real() / m);
        st.zsq_im.push_back(zsq.imag() / m);
    }
    return st;
}

}  // namespace ldg
