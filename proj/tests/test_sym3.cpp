// Algebra layer: symmetric 3x3 kernels, the quartic potential, eigensystems,
// and the canonical flat (degree-1/2) map. Oracle values are derived by hand
// or from closed forms and frozen here; randomized versions of the same
// identities run in the selftest suites.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ldg/errors.hpp"
#include "ldg/sym3.hpp"

using namespace ldg;

TEST_CASE("inner, norm and trace on frozen matrices") {
    // u = diag(0.5, 0.3, 0.2): |u|^2 = 0.25 + 0.09 + 0.04 = 0.38.
    Sym3 u = Sym3::diag(0.5, 0.3, 0.2);
    CHECK(trace(u) == doctest::Approx(1.0));
    CHECK(inner(u, u) == doctest::Approx(0.38));
    // Off-diagonals count twice in the Frobenius pairing.
    Sym3 v{0, 0, 0, 1.0, 0, 0};  // e1 e2^T + e2 e1^T
    CHECK(inner(v, v) == doctest::Approx(2.0));
    CHECK(norm(v) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("determinant and square on a frozen non-diagonal matrix") {
    // A = [[2,1,1],[1,2,1],[1,1,2]]: det = 4, eigenvalues (4, 1, 1).
    Sym3 a{2, 2, 2, 1, 1, 1};
    CHECK(det(a) == doctest::Approx(4.0));
    Sym3 a2 = square(a);
    // A^2 = [[6,5,5],[5,6,5],[5,5,6]].
    CHECK(a2.xx == doctest::Approx(6.0));
    CHECK(a2.xy == doctest::Approx(5.0));
    CHECK(a2.yz == doctest::Approx(5.0));
}

TEST_CASE("eigen_sym3 reproduces a hand-diagonalized matrix") {
    Sym3 a{2, 2, 2, 1, 1, 1};
    EigenSys es = eigen_sym3(a);
    CHECK(es.lam[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(es.lam[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es.lam[2] == doctest::Approx(1.0).epsilon(1e-12));
    // Leading eigenvector is (1,1,1)/sqrt(3) up to sign.
    const double c = std::abs(es.vec[0].x + es.vec[0].y + es.vec[0].z) / std::sqrt(3.0);
    CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
    // Orthonormal frame, rebuild A = sum lam_k v_k v_k^T.
    Sym3 rebuilt = Sym3::outer(es.vec[0]) * es.lam[0] + Sym3::outer(es.vec[1]) * es.lam[1] +
                   Sym3::outer(es.vec[2]) * es.lam[2];
    CHECK(norm(rebuilt - a) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Cayley-Hamilton reduction for trace-1 matrices") {
    // |u - u^2|^2 + 2 det u = (1 - |u|^2)^2 / 2 whenever tr u = 1.
    // Frozen sample with all entries populated (trace 0.1+0.4+0.5 = 1).
    Sym3 u{0.1, 0.4, 0.5, 0.2, -0.1, 0.3};
    const double lhs = inner(u - square(u), u - square(u)) + 2.0 * det(u);
    const double s = 1.0 - inner(u, u);
    CHECK(lhs == doctest::Approx(0.5 * s * s).epsilon(1e-12));
}

TEST_CASE("potential closed-form values and bounds") {
    const double beta = 2.0;
    // Vacuum states (projections) have W = 0: |u|^2 = 1, det = 0.
    Sym3 p = Sym3::outer(Vec3{1, 0, 0});
    CHECK(potential(p, beta) == doctest::Approx(0.0));
    // Isotropic state: W(I/3) = (1 - 1/3)^2/4 - beta det(I/3) = 1/9 - beta/27
    //                         = (3 - beta)/27.
    Sym3 iso = Sym3::diag(1.0 / 3, 1.0 / 3, 1.0 / 3);
    CHECK(potential(iso, beta) == doctest::Approx((3.0 - beta) / 27.0).epsilon(1e-14));
    // The oblate state diag(1/2,1/2,0): |u|^2 = 1/2, det = 0:
    // W = (1/2)^2/4 = 1/16.
    CHECK(potential(Sym3::diag(0.5, 0.5, 0.0), beta) == doctest::Approx(1.0 / 16.0));
    CHECK_THROWS_AS(potential(iso, 3.0), ValidationError);
    CHECK_THROWS_AS(potential(iso, 0.5), ValidationError);
}

TEST_CASE("potential gradient and Hessian match finite differences at a frozen point") {
    const double beta = 1.7;
    Sym3 u{0.6, 0.3, 0.1, 0.15, -0.2, 0.05};
    Sym3 gr = grad_potential(u, beta);
    // Directional finite differences in the traceless basis (the flow moves
    // only tangentially to the trace constraint).
    const double fd_h = 1e-5;
    for (int d = 0; d < 5; ++d) {
        Traceless5 dir{};
        dir.q[d] = 1.0;
        Sym3 e = reconstruct_traceless(dir);
        const double up = potential(u + e * fd_h, beta);
        const double dn = potential(u - e * fd_h, beta);
        const double fd = (up - dn) / (2.0 * fd_h);
        CHECK(fd == doctest::Approx(inner(gr, e)).epsilon(1e-6));
        // Hessian-vector product against the gradient difference quotient.
        Sym3 hv = hess_apply(u, e, beta);
        Sym3 gfd = (grad_potential(u + e * fd_h, beta) - grad_potential(u - e * fd_h, beta)) *
                   (1.0 / (2.0 * fd_h));
        CHECK(norm(hv - gfd) <= 1e-5 * (1.0 + norm(hv)));
    }
    // grad trace identity: tr grad W = (beta - 1)(1 - |u|^2) for trace-1 u.
    CHECK(trace(gr) == doctest::Approx((beta - 1.0) * (inner(u, u) - 1.0) * -1.0).epsilon(1e-12));
}

TEST_CASE("traceless coordinates round-trip and preserve the norm split") {
    Sym3 u{0.9, -0.2, 0.3, 0.4, -0.35, 0.12};
    Traceless5 q = coords(u);
    Sym3 back = reconstruct(q);
    CHECK(norm(back - u) == doctest::Approx(0.0).epsilon(1e-14));
    // |u|^2 = 1/3 + |q|^2 for trace-1 u.
    double q2 = 0;
    for (double v : q.q) q2 += v * v;
    CHECK(inner(u, u) == doctest::Approx(1.0 / 3.0 + q2).epsilon(1e-13));
}

TEST_CASE("commutators in axial form against dense antisymmetric matrices") {
    Sym3 a{0.5, 0.2, 0.3, 0.1, -0.4, 0.25};
    Sym3 b{-0.1, 0.7, 0.4, 0.3, 0.2, -0.15};
    AntiSym3 c = commutator(a, b);
    // Dense check of one entry: (AB - BA)_{21} = w.z by the axial convention
    // [w]_x = [[0,-wz,wy],[wz,0,-wx],[-wy,wx,0]].
    auto entry = [](const Sym3& m, int r, int cth) {
        const double d[3][3] = {{m.xx, m.xy, m.xz}, {m.xy, m.yy, m.yz}, {m.xz, m.yz, m.zz}};
        return d[r][cth];
    };
    double ab21 = 0, ba21 = 0;
    for (int k = 0; k < 3; ++k) {
        ab21 += entry(a, 1, k) * entry(b, k, 0);
        ba21 += entry(b, 1, k) * entry(a, k, 0);
    }
    CHECK(c.w.z == doctest::Approx(ab21 - ba21).epsilon(1e-13));
    // [A,[A,S]] stays symmetric and trace-free for trace-free S - spot check
    // the mixed commutator's trace.
    Sym3 m = commutator(c, a);
    CHECK(trace(m) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("nearest projection and the ambiguous tie") {
    ProjectionMatrix p = nearest_projection(Sym3::diag(0.6, 0.3, 0.1), 1e-9);
    CHECK(std::abs(p.n.x) == doctest::Approx(1.0));
    Sym3 m = p.matrix();
    CHECK(norm(square(m) - m) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(trace(m) == doctest::Approx(1.0));
    // Exact tie of the top eigenvalues: the projection target is a circle,
    // not a point - must refuse rather than pick silently.
    CHECK_THROWS_AS(nearest_projection(Sym3::diag(0.45, 0.45, 0.1), 1e-9), AmbiguousProjection);
}

TEST_CASE("canonical flat map: values, projection property, degree 1/2") {
    // At angle 0 the director is e1; at angle pi it is e2 (half speed).
    Sym3 u0 = canonical_flat(1.0, 0.0, 0.0, 0.0);
    CHECK(norm(u0 - Sym3::diag(1, 0, 0)) == doctest::Approx(0.0).epsilon(1e-14));
    Sym3 upi = canonical_flat(-1.0, 0.0, 0.0, 0.0);
    CHECK(norm(upi - Sym3::diag(0, 1, 0)) == doctest::Approx(0.0).epsilon(1e-14));
    // theta = pi/2: n = (cos pi/4, sin pi/4, 0), all planar entries 1/2.
    Sym3 uq = canonical_flat(0.0, 1.0, 0.0, 0.0);
    CHECK(uq.xx == doctest::Approx(0.5));
    CHECK(uq.xy == doctest::Approx(0.5));
    CHECK(uq.zz == doctest::Approx(0.0));
    // Projection-valued everywhere off the center.
    Sym3 ur = canonical_flat(0.3, -0.7, 0.1, 0.1);
    CHECK(norm(square(ur) - ur) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK_THROWS_AS(canonical_flat(0.1, 0.1, 0.1, 0.1), ValidationError);

    // |grad u0|^2 = 1/(2 rho^2): finite differences at rho = 0.5.
    const double fd_h = 1e-6, x = 0.5, y = 0.0;
    Sym3 dx = (canonical_flat(x + fd_h, y, 0, 0) - canonical_flat(x - fd_h, y, 0, 0)) *
              (1.0 / (2 * fd_h));
    Sym3 dy = (canonical_flat(x, y + fd_h, 0, 0) - canonical_flat(x, y - fd_h, 0, 0)) *
              (1.0 / (2 * fd_h));
    CHECK(inner(dx, dx) + inner(dy, dy) == doctest::Approx(1.0 / (2 * x * x)).epsilon(1e-6));
}

TEST_CASE("conjugation by a z-rotation advances the flat director angle by the rotation") {
    // Q u0(theta) Q^T with Q = R_z(c) maps n(theta/2) to n(theta/2 + c); as a
    // matrix identity this equals the flat map evaluated at theta + 2c.
    const double c = 0.35, theta = 1.2;
    Rot3 q = Rot3::about_z(c);
    Sym3 lhs = conjugate(q, canonical_flat(std::cos(theta), std::sin(theta), 0, 0));
    Sym3 rhs = canonical_flat(std::cos(theta + 2 * c), std::sin(theta + 2 * c), 0, 0);
    CHECK(norm(lhs - rhs) == doctest::Approx(0.0).epsilon(1e-13));
    // Eigenvalues and the potential are conjugation invariants.
    Sym3 u{0.6, 0.3, 0.1, 0.15, -0.2, 0.05};
    EigenSys e1 = eigen_sym3(u), e2 = eigen_sym3(conjugate(q, u));
    for (int k = 0; k < 3; ++k) CHECK(e1.lam[k] == doctest::Approx(e2.lam[k]).epsilon(1e-12));
    CHECK(potential(u, 2.0) == doctest::Approx(potential(conjugate(q, u), 2.0)).epsilon(1e-12));
}

TEST_CASE("lower bounds of the potential on frozen hard cases") {
    // The bound chain W >= ((3-beta)/12)(1-|u|^2)^2 >= ((3-beta)/6) dist^2 is
    // tightest near the vacuum manifold; probe a point just off a projection.
    const double beta = 2.0;
    Sym3 p = Sym3::outer(normalized(Vec3{1, 2, -1}));
    Sym3 u = p * 0.97 + Sym3::diag(0.01, 0.01, 0.01);
    u.zz = 1.0 - u.xx - u.yy;  // restore trace 1
    const double w = potential(u, beta);
    const double s = 1.0 - inner(u, u);
    CHECK(w + 1e-15 >= (3.0 - beta) / 12.0 * s * s);
    const double d = norm(u - nearest_projection(u, 1e-12).matrix());
    CHECK(w + 1e-15 >= (3.0 - beta) / 6.0 * d * d);
    // (1 - |u|^2)^2 >= 12 det u for PSD trace-1 (equality at the isotropic
    // state): check equality there.
    Sym3 iso = Sym3::diag(1.0 / 3, 1.0 / 3, 1.0 / 3);
    const double si = 1.0 - inner(iso, iso);
    CHECK(si * si == doctest::Approx(12.0 * det(iso)).epsilon(1e-13));
}

TEST_CASE("rotations: orthogonality and axial conjugation consistency") {
    Rot3 q = Rot3::about_z(0.8);
    Vec3 v{0.3, -0.5, 0.7};
    CHECK(norm(q.apply(v)) == doctest::Approx(norm(v)).epsilon(1e-13));
    // Conjugating an antisymmetric matrix rotates its axial vector.
    AntiSym3 a{Vec3{0.2, -0.4, 0.9}};
    AntiSym3 qa = conjugate(q, a);
    Vec3 expected = q.apply(a.w);
    CHECK(norm(qa.w - expected) == doctest::Approx(0.0).epsilon(1e-13));
}
