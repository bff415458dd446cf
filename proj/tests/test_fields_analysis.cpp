// Analysis layer: eigenframes and defect location, the current vector, the
// Hopf differential and its pole diagnostics, the area-factor angle g with a
// manufactured sinh-Gordon solution, circle-image geodesics and the
// latitude/longitude lift. Oracles come from the canonical flat map (closed
// forms) and from an independent RK4 integration of the radial ODE.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ldg/current.hpp"
#include "ldg/eigenframe.hpp"
#include "ldg/errors.hpp"
#include "ldg/field.hpp"
#include "ldg/grid.hpp"
#include "ldg/profiles.hpp"

using namespace ldg;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Mollified flat core around (ax, ay): u = D/2 + tanh(rho/w) (u0 - D/2).
// Away from rho ~ w this is the exact degree-1/2 harmonic unit map; the tanh
// factor closes the eigenvalue gap at the center like a real defect core.
Field mollified_flat(const Grid2D& g, double ax, double ay, double w) {
    Field f(g);
    const Sym3 half_d = Sym3::diag(0.5, 0.5, 0.0);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double rho = std::hypot(g.x(i) - ax, g.y(j) - ay);
            if (rho == 0.0) {
                f.set(i, j, half_d);
                continue;
            }
            const Sym3 u0 = canonical_flat(g.x(i), g.y(j), ax, ay);
            f.set(i, j, half_d + (u0 - half_d) * std::tanh(rho / w));
        }
    return f;
}

Field conjugated(const Field& f, const Rot3& q) {
    Field out(f.grid);
    for (int j = 0; j < f.grid.n; ++j)
        for (int i = 0; i < f.grid.n; ++i) out.set(i, j, conjugate(q, f.value(i, j)));
    return out;
}
}  // namespace

TEST_CASE("eigenframe of the mollified flat map: eigenvalues and sign bookkeeping") {
    Grid2D g(129);
    Field f = mollified_flat(g, 0.5, 0.5, 0.02);
    EigenframeField ef = eigenframe(f);
    // At radius 0.2 the core factor is tanh(10) = 1 - 4e-9: eigenvalues
    // (1, 0, 0) and e1 equals the half-angle director.
    const int i = 103, j = 64;  // x ~ 0.805, y = 0.5: theta ~ 0, rho ~ 0.305
    const std::size_t k = ef.idx(i, j);
    CHECK(ef.lam[k][0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(ef.lam[k][1]) <= 1e-6);
    CHECK(std::abs(ef.lam[k][2]) <= 1e-12);
    CHECK(std::abs(ef.e1[k].x) == doctest::Approx(1.0).epsilon(1e-6));
    // A degree-1/2 field cannot have a globally continuous e1: the
    // row-major sign walk must record at least one flip cut.
    std::size_t flips = 0;
    for (std::size_t t = 0; t < ef.flip1.size(); ++t) flips += ef.flip1[t];
    CHECK(flips > 0);
}

TEST_CASE("winding flags: e1 half-winds around the core, e3 stays single-valued") {
    Grid2D g(129);
    Field f = mollified_flat(g, 0.5, 0.5, 0.02);
    WindingCheck w = eigen_winding_on_circle(f, 0.5, 0.5, 0.08);
    CHECK(w.e1_half);
    CHECK(!w.e3_half);
    CHECK(w.min_gap12 > 0.9);  // tanh(4) ~ 0.9993
    // Far from the core lambda2 and lambda3 nearly collapse; the reported
    // margin documents how much splitting the frame decision rested on.
    CHECK(w.min_gap23 >= 0.0);
}

TEST_CASE("defect location: sub-grid refinement, none, and several") {
    Grid2D g(129);
    const double ax = 0.301, ay = 0.703;
    Field f = mollified_flat(g, ax, ay, 0.08);
    EigenframeField ef = eigenframe(f);
    DefectInfo d = locate_defect(ef);
    CHECK(std::hypot(d.x - ax, d.y - ay) <= g.h);
    // Core spectrum (0.5, 0.5, 0): bilinear interpolation across the cone tip
    // blurs by the local slope h/w, so the tolerance is wider than the
    // acceptance one for real (flatter) minimizer cores.
    CHECK(d.lam[0] == doctest::Approx(0.5).epsilon(0.12));
    CHECK(d.lam[1] == doctest::Approx(0.5).epsilon(0.12));
    CHECK(std::abs(d.lam[2]) <= 1e-9);
    CHECK(d.gap < 0.2);

    // Pure flat map: the gap never closes; refusing beats guessing.
    Field pure(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) pure.set(i, j, canonical_flat(g.x(i), g.y(j), ax, ay));
    CHECK_THROWS_AS(locate_defect(eigenframe(pure)), NoDefect);

    // Two separated cores: ambiguous input, reported as such.
    Field two(g);
    const Sym3 half_d = Sym3::diag(0.5, 0.5, 0.0);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double r1 = std::hypot(g.x(i) - 0.3, g.y(j) - 0.3);
            const double r2 = std::hypot(g.x(i) - 0.7, g.y(j) - 0.7);
            const double fac = std::tanh(std::min(r1, r2) / 0.05);
            if (r1 == 0.0 || r2 == 0.0) {
                two.set(i, j, half_d);
                continue;
            }
            two.set(i, j, half_d + (canonical_flat(g.x(i), g.y(j), 0.3, 0.3) - half_d) * fac);
        }
    CHECK_THROWS_AS(locate_defect(eigenframe(two)), MultipleDefects);
}

TEST_CASE("current vector of the flat map matches the closed form") {
    Grid2D g(129);
    Field f = mollified_flat(g, 0.5, 0.5, 0.01);
    CurrentField jf = current_vector(f);
    // j = -Lambda theta_hat / (2 rho) in axial components: only the z part is
    // nonzero, j1.z = sin(theta)/(2 rho), j2.z = -cos(theta)/(2 rho).
    for (auto [i, j] : {std::pair{96, 64}, {64, 96}, {90, 90}}) {
        const double dx = g.x(i) - 0.5, dy = g.y(j) - 0.5;
        const double rho = std::hypot(dx, dy), th = std::atan2(dy, dx);
        const std::size_t k = g.idx(i, j);
        const double scale = 1.0 / (2.0 * rho);
        CHECK(jf.j1[k].z == doctest::Approx(std::sin(th) * scale).epsilon(5e-3));
        CHECK(jf.j2[k].z == doctest::Approx(-std::cos(th) * scale).epsilon(5e-3));
        CHECK(std::abs(jf.j1[k].x) <= 1e-8);
        CHECK(std::abs(jf.j1[k].y) <= 1e-8);
    }
    // The derivative-reconstruction identity d_k u = [u, [u, d_k u]] holds on
    // the vacuum manifold; its violation (relative L2) is pure h^2 noise.
    CHECK(nabla_commutator_residual(f, jf, 0.5, 0.5, 0.1, 0.3) <= 0.02);
}

TEST_CASE("Hopf differential of the flat map: the -1/(8 z^2) pole") {
    Grid2D g(257);
    const double eps = 0.01;
    Field f = mollified_flat(g, 0.5, 0.5, eps);
    HopfField hf = hopf_differential(f, 0.5, 0.5, eps);
    // Closed form at z - a = 0.25: omega = -1/(8 * 0.0625) = -2.
    const std::size_t k = g.idx(192, 128);
    CHECK(hf.omega[k].real() == doctest::Approx(-2.0).epsilon(1e-3));
    CHECK(std::abs(hf.omega[k].imag()) <= 2e-3);
    // At z - a = 0.125 i: 8 z^2 = -1/8, omega = +8.
    const std::size_t k2 = g.idx(128, 160);
    CHECK(hf.omega[k2].real() == doctest::Approx(8.0).epsilon(1e-3));
    // Validity annulus: inside 3 eps and beyond half the boundary distance
    // the limit theory does not apply. The outer cutoff here is rho = 0.25,
    // so the sample at rho = 0.25 sits just outside while rho = 0.125 is in.
    CHECK(!hf.valid[g.idx(129, 128)]);  // rho ~ 0.004 < 3 eps
    CHECK(hf.valid[k2]);
    CHECK(!hf.valid[k]);                // rho = 0.25 = cutoff, excluded
    CHECK(!hf.valid[g.idx(250, 128)]);  // too close to the boundary

    // Circle statistics: |z mu| flat at 1/4, 1/|mu| = 4 r, (z-a)^2 omega at
    // -1/8 - these are the pole-normalization facts the figures rest on.
    HopfCircleStats st = hopf_circle_stats(hf, 0.5, 0.5, {0.06, 0.1, 0.15, 0.2});
    for (std::size_t q = 0; q < st.r.size(); ++q) {
        CHECK(st.zmu_abs[q] == doctest::Approx(0.25).epsilon(1e-2));
        CHECK(st.inv_mu[q] == doctest::Approx(4.0 * st.r[q]).epsilon(1e-2));
        CHECK(st.zsq_re[q] == doctest::Approx(-0.125).epsilon(1e-2));
        CHECK(std::abs(st.zsq_im[q]) <= 2e-3);
    }
    CHECK_THROWS_AS(hopf_circle_stats(hf, 0.5, 0.5, {0.6}), CircleOutOfDomain);
}

TEST_CASE("the area-factor angle vanishes for planar (geodesic) fields") {
    Grid2D g(129);
    Field f = mollified_flat(g, 0.5, 0.5, 0.01);
    CurrentField jf = current_vector(f);
    HopfField hf = hopf_differential(f, 0.5, 0.5, 0.01);
    GField gf = extract_g(jf, hf);
    double sup = 0.0;
    std::size_t nvalid = 0;
    for (std::size_t k = 0; k < gf.g.size(); ++k)
        if (gf.valid[k]) {
            sup = std::max(sup, gf.g[k]);
            ++nvalid;
        }
    REQUIRE(nvalid > 1000);
    // w1 x w2 = 0 exactly for a planar director field; discrete derivatives
    // leave only rounding-level cross products.
    CHECK(sup <= 2e-3);
    // With no signal above the sinh-Gordon noise floor, the residual must be
    // "not applicable", never a flattering zero.
    CHECK(!sinh_gordon_residual(gf, hf).has_value());
}

TEST_CASE("manufactured radial sinh-Gordon solution: discrete residual is small") {
    // Independent oracle: integrate g_tt = -sinh(2 g)/8 in t = ln(rho)
    // (the radial reduction of -Delta g = |omega| sinh(2g) with
    // |omega| = 1/(8 rho^2)) by RK4 from g(ln 0.05) = 0.5, g'(ln 0.05) = 0,
    // then evaluate that solution on the grid and ask the production residual
    // to certify it. This exercises the residual formula end to end without
    // trusting any field machinery.
    const double t0 = std::log(0.05), t1 = std::log(0.70);
    const double dt = 1e-4;
    std::vector<double> ts{t0}, gs{0.5};
    double gv = 0.5, pv = 0.0, t = t0;
    auto acc = [](double gg) { return -std::sinh(2.0 * gg) / 8.0; };
    while (t < t1) {
        const double k1g = pv, k1p = acc(gv);
        const double k2g = pv + 0.5 * dt * k1p, k2p = acc(gv + 0.5 * dt * k1g);
        const double k3g = pv + 0.5 * dt * k2p, k3p = acc(gv + 0.5 * dt * k2g);
        const double k4g = pv + dt * k3p, k4p = acc(gv + dt * k3g);
        gv += dt / 6.0 * (k1g + 2 * k2g + 2 * k3g + k4g);
        pv += dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        t += dt;
        ts.push_back(t);
        gs.push_back(gv);
    }
    auto eval = [&](double rho) {
        const double tt = std::log(rho);
        REQUIRE(tt >= t0);
        REQUIRE(tt <= t1);
        const std::size_t k = static_cast<std::size_t>((tt - t0) / dt);
        const double frac = (tt - t0) / dt - k;
        return gs[k] * (1.0 - frac) + gs[std::min(k + 1, gs.size() - 1)] * frac;
    };

    Grid2D g(257);
    GField gf;
    gf.grid = g;
    gf.g.assign(g.num_nodes(), 0.0);
    gf.valid.assign(g.num_nodes(), 0);
    HopfField hf;
    hf.grid = g;
    hf.omega.assign(g.num_nodes(), {0.0, 0.0});
    hf.valid.assign(g.num_nodes(), 0);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double dx = g.x(i) - 0.5, dy = g.y(j) - 0.5;
            const double rho = std::hypot(dx, dy);
            const std::size_t k = g.idx(i, j);
            if (rho < 0.052 || rho > 0.45) continue;
            const std::complex<double> z{dx, dy};
            hf.omega[k] = -1.0 / (8.0 * z * z);
            hf.valid[k] = 1;
            gf.g[k] = eval(rho);
            gf.valid[k] = 1;
        }
    auto res = sinh_gordon_residual(gf, hf);
    REQUIRE(res.has_value());
    // 5-point Laplacian truncation on the analytic solution: O((h/rho)^2)
    // worst near the inner radius; well under the 5% certification bar.
    CHECK(*res <= 0.05);
}

TEST_CASE("circle images of the flat map are closed geodesics of length sqrt(2) pi") {
    Grid2D g(257);
    Field f = mollified_flat(g, 0.5, 0.5, 0.01);
    GeodesicProfiles gp = geodesic_length_profile(f, 0.5, 0.5, {0.05, 0.1, 0.15});
    for (double len : gp.length.value)
        CHECK(len == doctest::Approx(std::sqrt(2.0) * kPi).epsilon(5e-3));
    for (double d : gp.geodesic_fit.value) CHECK(d <= 1e-3);
}

TEST_CASE("lift angles: flat alignment, conjugation shift, and hard refusals") {
    Grid2D g(257);
    Field f = mollified_flat(g, 0.5, 0.5, 0.01);
    const Sym3 p3 = Sym3::outer(Vec3{0, 0, 1});
    LiftAngles la = lift_angles(f, 0.5, 0.5, {0.06, 0.1, 0.15}, p3);
    // alpha1 = 2 alpha - theta vanishes identically for the canonical map.
    CHECK(std::abs(la.alpha_star) <= 1e-3);
    for (double d : la.alpha1_deviation.value) CHECK(d <= 1e-3);

    // Conjugating by R_z(c) advances the director angle by c, so
    // alpha1 = 2(theta/2 + c) - theta = 2c: the frame detector must report
    // alpha_star = 2c, not c.
    const double c = 0.35;
    Field fr = conjugated(f, Rot3::about_z(c));
    LiftAngles lar = lift_angles(fr, 0.5, 0.5, {0.06, 0.1, 0.15}, p3);
    CHECK(lar.alpha_star == doctest::Approx(2.0 * c).epsilon(0.01));

    // Degree-1 field: the loop gain is 2 pi, not pi - the lift must refuse.
    Field deg1(g);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double th = std::atan2(g.y(j) - 0.5, g.x(i) - 0.5);
            deg1.set(i, j, Sym3::outer(Vec3{std::cos(th), std::sin(th), 0}));
        }
    CHECK_THROWS_AS(lift_angles(deg1, 0.5, 0.5, {0.1}, p3), UnwrapInconsistent);

    // Latitude beyond the lift's validity: refuse.
    Field high(g);
    const double b = 1.0;  // sin^2 b ~ 0.708 >= 1/2
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double th = std::atan2(g.y(j) - 0.5, g.x(i) - 0.5);
            Vec3 n{std::cos(th / 2) * std::cos(b), std::sin(th / 2) * std::cos(b), std::sin(b)};
            high.set(i, j, Sym3::outer(n));
        }
    CHECK_THROWS_AS(lift_angles(high, 0.5, 0.5, {0.1}, p3), LatitudeTooLarge);
}

TEST_CASE("radial decay diagnostics vanish on the exact flat map") {
    Grid2D g(257);
    Field f = mollified_flat(g, 0.5, 0.5, 0.01);
    const AntiSym3 lam{Vec3{0, 0, 1}};
    const Sym3 p3 = Sym3::outer(Vec3{0, 0, 1});
    DecayProfiles dp = radial_decay_diagnostics(f, 0.5, 0.5, {0.06, 0.1, 0.15}, lam, p3);
    for (double v : dp.latitude.value) CHECK(v <= 1e-9);
    for (double v : dp.comm_p3.value) CHECK(v <= 1e-9);
    // comm_flat compares against the canonical flat map anchored at the
    // defect: only interpolation error remains.
    for (double v : dp.comm_flat.value) CHECK(v <= 5e-3);
}
