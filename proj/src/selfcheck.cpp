#include "ldg/selfcheck.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "ldg/errors.hpp"
#include "ldg/grid.hpp"

namespace ldg {

double Sampler::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Vec3 Sampler::unit_vector() {
    std::normal_distribution<double> nd(0.0, 1.0);
    Vec3 v;
    do {
        v = {nd(rng_), nd(rng_), nd(rng_)};
    } while (norm(v) < 1e-8);
    return normalized(v);
}

Rot3 Sampler::rotation() {
    std::normal_distribution<double> nd(0.0, 1.0);
    double q0, q1, q2, q3, n2;
    do {
        q0 = nd(rng_);
        q1 = nd(rng_);
        q2 = nd(rng_);
        q3 = nd(rng_);
        n2 = q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3;
    } while (n2 < 1e-12);
    const double s = 1.0 / std::sqrt(n2);
    q0 *= s;
    q1 *= s;
    q2 *= s;
    q3 *= s;
    Rot3 r;
    r.m = {1 - 2 * (q2 * q2 + q3 * q3), 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2),
           2 * (q1 * q2 + q0 * q3), 1 - 2 * (q1 * q1 + q3 * q3), 2 * (q2 * q3 - q0 * q1),
           2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), 1 - 2 * (q1 * q1 + q2 * q2)};
    return r;
}

Sym3 Sampler::trace1_sym(double spread) {
    std::normal_distribution<double> nd(0.0, spread);
    Traceless5 q{{nd(rng_), nd(rng_), nd(rng_), nd(rng_), nd(rng_)}};
    return reconstruct(q);
}

Sym3 Sampler::psd_trace1() {
    // Dirichlet(1,1,1) eigenvalues (uniform on the simplex) in a Haar frame:
    // exactly the matrices with <u, P> >= 0 for every projection P, which is
    // the hypothesis of the potential lower bounds.
    std::exponential_distribution<double> ed(1.0);
    double d0 = ed(rng_), d1 = ed(rng_), d2 = ed(rng_);
    const double s = d0 + d1 + d2;
    d0 /= s;
    d1 /= s;
    d2 /= s;
    const Rot3 q = rotation();
    return conjugate(q, Sym3::diag(d0, d1, d2));
}

ProjectionMatrix Sampler::projection() { return ProjectionMatrix{unit_vector()}; }

namespace {

struct Checker {
    std::ostream& out;
    SelfCheckResult res;

    void battery(const std::string& name, bool ok, const std::string& detail) {
        ++res.checks;
        if (!ok) ++res.failures;
        out << (ok ? "PASS  " : "FAIL  ") << name << "  " << detail << "\n";
    }
};

double frob_dist(const Sym3& a, const Sym3& b) { return norm(a - b); }

}  // namespace

SelfCheckResult run_selfcheck(std::uint64_t seed, std::ostream& out) {
    Checker ck{out, {}};
    Sampler smp(seed);

    // --- Cayley-Hamilton consequence on trace-1 symmetric matrices:
    //     |u - u^2|^2 + 2 det u = (1 - |u|^2)^2 / 2 exactly.
    {
        double worst = 0.0;
        for (int t = 0; t < 100000; ++t) {
            const Sym3 u = smp.trace1_sym(1.0);
            const Sym3 d = u - square(u);
            const double lhs = inner(d, d) + 2.0 * det(u);
            const double one_m = 1.0 - inner(u, u);
            const double rhs = 0.5 * one_m * one_m;
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
        std::ostringstream os;
        os << "max |identity defect| = " << worst << " (tol 1e-10)";
        ck.battery("cayley_hamilton_trace1", worst <= 1e-10, os.str());
    }

    // --- Potential lower bounds on PSD trace-1 samples. With eigenvalues
    //     l1 >= l2 >= l3 >= 0 summing to 1:
    //       (1-|u|^2)^2 >= 12 det u        (1-l_i = l_j+l_k >= 2 sqrt(l_j l_k),
    //                                       so sum l_i^2 (1-l_i)^2 >= 4 det sum l_i,
    //                                       then apply the Cayley-Hamilton identity),
    //       hence W >= (3-beta)/12 (1-|u|^2)^2;
    //       1-|u|^2 = 2(l1 l2 + l1 l3 + l2 l3) >= dist(u, P)^2 = 2(l2^2+l3^2+l2 l3)
    //                                       (l1 l2 >= l2^2 and l1 l3 >= l3^2),
    //       hence W >= (3-beta)/12 dist(u, P)^4, with equality at u = I/3.
    //     (A quadratic bound W >= c dist^2 also holds, but its sharp constant
    //     is not this chain's; the quartic one is exact at the melting point.)
    {
        bool ok = true;
        std::string first;
        for (int t = 0; t < 100000 && ok; ++t) {
            const Sym3 u = smp.psd_trace1();
            const double beta = smp.uniform(1.0, 3.0 - 1e-9);
            const double one_m = 1.0 - inner(u, u);
            const double w = potential(u, beta);
            const double mid = (3.0 - beta) / 12.0 * one_m * one_m;
            const ProjectionMatrix p = nearest_projection(u);
            const double d2 = frob_dist(u, p.matrix()) * frob_dist(u, p.matrix());
            const double low = (3.0 - beta) / 12.0 * d2 * d2;
            const double slack = 1e-12 + 1e-12 * std::fabs(w);
            if (!(w >= mid - slack && mid >= low - slack && one_m >= d2 - 1e-12 &&
                  one_m * one_m >= 12.0 * det(u) - 1e-12)) {
                ok = false;
                std::ostringstream os;
                os << "violated at sample " << t << ": W=" << w << " mid=" << mid
                   << " low=" << low << " 1-|u|^2=" << one_m << " dist^2=" << d2
                   << " 12det=" << 12.0 * det(u);
                first = os.str();
            }
        }
        ck.battery("potential_lower_bounds_psd", ok, ok ? "10^5 samples" : first);
    }

    // --- Gradient and Hessian against central finite differences.
    {
        double worst_g = 0.0, worst_h = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const Sym3 u = smp.trace1_sym(0.8);
            const double beta = smp.uniform(1.0, 3.0 - 1e-9);
            const Sym3 dir = smp.trace1_sym(1.0) - smp.trace1_sym(1.0);  // trace-free
            const double nd = norm(dir);
            if (nd < 1e-12) continue;
            const Sym3 h = dir * (1.0 / nd);
            const double step = 1e-5;
            const double w_p = potential(u + h * step, beta);
            const double w_m = potential(u - h * step, beta);
            const double fd = (w_p - w_m) / (2.0 * step);
            const double an = inner(grad_potential(u, beta), h);
            worst_g = std::max(worst_g, std::fabs(fd - an) / (1.0 + std::fabs(an)));

            const Sym3 g_p = grad_potential(u + h * step, beta);
            const Sym3 g_m = grad_potential(u - h * step, beta);
            const Sym3 fdh = (g_p - g_m) * (1.0 / (2.0 * step));
            const Sym3 anh = hess_apply(u, h, beta);
            worst_h = std::max(worst_h, norm(fdh - anh) / (1.0 + norm(anh)));
        }
        std::ostringstream os;
        os << "max rel grad err = " << worst_g << " (tol 1e-6), hess err = " << worst_h
           << " (tol 1e-5)";
        ck.battery("potential_derivatives_fd", worst_g <= 1e-6 && worst_h <= 1e-5, os.str());
    }

    // --- Trace of the gradient: tr(grad W) = (beta-1)(1-|u|^2).
    {
        double worst = 0.0;
        for (int t = 0; t < 100000; ++t) {
            const Sym3 u = smp.trace1_sym(1.0);
            const double beta = smp.uniform(1.0, 3.0 - 1e-9);
            const double lhs = trace(grad_potential(u, beta));
            const double rhs = (beta - 1.0) * (1.0 - inner(u, u));
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
        std::ostringstream os;
        os << "max defect = " << worst << " (tol 1e-10)";
        ck.battery("grad_trace_identity", worst <= 1e-10, os.str());
    }

    // --- Coordinates: reconstruct(coords(u)) = u and norms match.
    {
        double worst = 0.0, worst_n = 0.0;
        for (int t = 0; t < 100000; ++t) {
            const Sym3 u = smp.trace1_sym(1.0);
            const Traceless5 c = coords(u);
            worst = std::max(worst, frob_dist(reconstruct(c), u));
            double q2 = 0.0;
            for (int k = 0; k < 5; ++k) q2 += c.q[k] * c.q[k];
            worst_n = std::max(worst_n, std::fabs(inner(u, u) - (1.0 / 3.0 + q2)));
        }
        std::ostringstream os;
        os << "max roundtrip = " << worst << ", max norm defect = " << worst_n << " (tol 1e-13)";
        ck.battery("traceless5_roundtrip", worst <= 1e-13 && worst_n <= 1e-13, os.str());
    }

    // --- Eigen-decomposition: orthonormal frame, descending order, rebuild.
    {
        double worst_o = 0.0, worst_r = 0.0;
        bool sorted = true;
        for (int t = 0; t < 20000; ++t) {
            const Sym3 u = smp.trace1_sym(1.0);
            const EigenSys es = eigen_sym3(u);
            sorted = sorted && es.lam[0] >= es.lam[1] && es.lam[1] >= es.lam[2];
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    const double d = dot(es.vec[a], es.vec[b]) - (a == b ? 1.0 : 0.0);
                    worst_o = std::max(worst_o, std::fabs(d));
                }
            }
            Sym3 rebuild{};
            for (int a = 0; a < 3; ++a) rebuild = rebuild + Sym3::outer(es.vec[a]) * es.lam[a];
            worst_r = std::max(worst_r, frob_dist(rebuild, u));
        }
        std::ostringstream os;
        os << "orthonormality " << worst_o << " (tol 1e-10), rebuild " << worst_r
           << " (tol 1e-9), sorted=" << (sorted ? "yes" : "no");
        ck.battery("eigen_sym3", worst_o <= 1e-10 && worst_r <= 1e-9 && sorted, os.str());
    }

    // --- nearest_projection: idempotent target, equivariant, and actually
    //     the closest among many random projections.
    {
        bool ok = true;
        std::string msg = "2000 samples";
        for (int t = 0; t < 2000 && ok; ++t) {
            const Sym3 u = smp.psd_trace1();
            const ProjectionMatrix p = nearest_projection(u);
            const Sym3 pm = p.matrix();
            if (frob_dist(square(pm), pm) > 1e-12 || std::fabs(trace(pm) - 1.0) > 1e-12) {
                ok = false;
                msg = "returned matrix is not a rank-1 projection";
                break;
            }
            const double dbest = frob_dist(u, pm);
            for (int s = 0; s < 20; ++s) {
                const ProjectionMatrix q = smp.projection();
                if (frob_dist(u, q.matrix()) < dbest - 1e-9) {
                    ok = false;
                    msg = "a random projection beat the reported nearest one";
                    break;
                }
            }
        }
        ck.battery("nearest_projection_optimal", ok, msg);
    }

    // --- Commutator axial bookkeeping versus dense matrix arithmetic.
    {
        double worst = 0.0;
        for (int t = 0; t < 20000; ++t) {
            const Sym3 a = smp.trace1_sym(1.0);
            const Sym3 b = smp.trace1_sym(1.0);
            const AntiSym3 c = commutator(a, b);
            // Dense check: (ab - ba) entries vs axial reconstruction.
            auto A = [&](int r, int s) {
                const double m[3][3] = {{a.xx, a.xy, a.xz}, {a.xy, a.yy, a.yz}, {a.xz, a.yz, a.zz}};
                return m[r][s];
            };
            auto B = [&](int r, int s) {
                const double m[3][3] = {{b.xx, b.xy, b.xz}, {b.xy, b.yy, b.yz}, {b.xz, b.yz, b.zz}};
                return m[r][s];
            };
            double cm[3][3];
            for (int r = 0; r < 3; ++r) {
                for (int s = 0; s < 3; ++s) {
                    double acc = 0.0;
                    for (int k = 0; k < 3; ++k) acc += A(r, k) * B(k, s) - B(r, k) * A(k, s);
                    cm[r][s] = acc;
                }
            }
            // [w]_x convention: A v = w x v, so A = [[0,-w3,w2],[w3,0,-w1],[-w2,w1,0]].
            worst = std::max({worst, std::fabs(cm[2][1] - c.w.x), std::fabs(cm[0][2] - c.w.y),
                              std::fabs(cm[1][0] - c.w.z), std::fabs(cm[1][2] + c.w.x),
                              std::fabs(cm[2][0] + c.w.y), std::fabs(cm[0][1] + c.w.z)});
        }
        std::ostringstream os;
        os << "max axial defect = " << worst << " (tol 1e-12)";
        ck.battery("commutator_axial", worst <= 1e-12, os.str());
    }

    // --- Canonical flat map: projection-valued, eigenframe in-plane, and
    //     the explicit Frobenius gradient law |grad u0|^2 = 1/(2 rho^2).
    {
        bool ok = true;
        std::string msg = "5000 samples";
        for (int t = 0; t < 5000 && ok; ++t) {
            const double ax = smp.uniform(-1, 1), ay = smp.uniform(-1, 1);
            const double rho = smp.uniform(0.05, 2.0), th = smp.uniform(0, 2 * std::numbers::pi);
            const double x = ax + rho * std::cos(th), y = ay + rho * std::sin(th);
            const Sym3 u = canonical_flat(x, y, ax, ay);
            if (frob_dist(square(u), u) > 1e-12 || std::fabs(trace(u) - 1.0) > 1e-12) {
                ok = false;
                msg = "canonical flat value is not a projection";
                break;
            }
            // Analytic derivative check via the explicit halved-angle form.
            const double hstep = 1e-6 * std::max(1.0, rho);
            const Sym3 dux = (canonical_flat(x + hstep, y, ax, ay) -
                              canonical_flat(x - hstep, y, ax, ay)) *
                             (1.0 / (2.0 * hstep));
            const Sym3 duy = (canonical_flat(x, y + hstep, ax, ay) -
                              canonical_flat(x, y - hstep, ax, ay)) *
                             (1.0 / (2.0 * hstep));
            const double grad2 = inner(dux, dux) + inner(duy, duy);
            if (std::fabs(grad2 - 1.0 / (2.0 * rho * rho)) > 1e-4 / (rho * rho)) {
                ok = false;
                msg = "gradient law |grad u0|^2 = 1/(2 rho^2) violated";
            }
        }
        ck.battery("canonical_flat_geometry", ok, msg);
    }

    // --- Boundary trace: projection-valued, periodic, degree 1/2 (in-plane
    //     director has a half-winding along the full boundary loop).
    {
        Grid2D grid(64);
        bool ok = true;
        std::string msg;
        for (int t = 0; t < 20 && ok; ++t) {
            BoundarySpec bs;
            bs.delta1 = smp.uniform(-0.5, 0.5);
            bs.delta2 = smp.uniform(-0.7, 0.7);
            bs.phase1 = smp.uniform(0, 2 * std::numbers::pi);
            bs.phase2 = smp.uniform(0, 2 * std::numbers::pi);
            auto trace_vals = boundary_trace(bs, grid);
            Vec3 prev{}, first{};
            bool started = false;
            for (const auto& [node, val] : trace_vals) {
                if (frob_dist(square(val), val) > 1e-12) {
                    ok = false;
                    msg = "boundary value leaves the vacuum manifold";
                    break;
                }
                Vec3 n = eigen_sym3(val).vec[0];
                if (!started) {
                    first = n;
                    prev = n;
                    started = true;
                } else {
                    if (dot(n, prev) < 0.0) n = -n;
                    prev = n;
                }
            }
            if (ok && dot(prev, first) >= 0.0) {
                ok = false;
                msg = "boundary director does not pick up a sign over the loop (degree != 1/2)";
            }
        }
        ck.battery("boundary_trace_degree_half", ok, ok ? "20 random specs" : msg);
    }

    out << "selfcheck: " << (ck.res.checks - ck.res.failures) << "/" << ck.res.checks
        << " batteries passed\n";
    return ck.res;
}

}  // namespace ldg
