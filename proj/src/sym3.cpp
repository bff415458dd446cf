#include "ldg/sym3.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ldg {

double potential(const Sym3& u, double beta) {
    if (beta < 1.0 || beta >= 3.0) {
        std::ostringstream os;
        os << "potential: beta = " << beta << " outside [1,3)";
        throw ValidationError(os.str());
    }
    double s = 1.0 - inner(u, u);
    return 0.25 * s * s - beta * det(u);
}

Sym3 grad_potential(const Sym3& u, double beta) {
    double s = inner(u, u) - 1.0;
    return u * s + (u - square(u)) * beta;
}

Sym3 hess_apply(const Sym3& u, const Sym3& h, double beta) {
    double s = inner(u, u) - 1.0;
    // d/dt[(|u+th|^2-1)(u+th)] = (|u|^2-1)h + 2<u,h>u ;
    // d/dt[beta((u+th)-(u+th)^2)] = beta(h - uh - hu).
    return h * s + u * (2.0 * inner(u, h)) + (h - anticommutator(u, h)) * beta;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi for symmetric 3x3. Deterministic: fixed sweep order, fixed
// iteration cap, rotation accumulated in full 3x3. Converges to machine
// precision in <= 8 sweeps for any input.
EigenSys eigen_sym3(const Sym3& u) {
    double a[3][3] = {{u.xx, u.xy, u.xz}, {u.xy, u.yy, u.yz}, {u.xz, u.yz, u.zz}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    for (int sweep = 0; sweep < 16; ++sweep) {
        double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off < 1e-34) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                // smaller-angle root of t^2 + 2 t theta - 1 = 0 (stable form)
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < 3; ++k) {  // rotate rows/cols p,q of a
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {  // accumulate eigenvectors (columns of v)
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    int order[3] = {0, 1, 2};
    double lam[3] = {a[0][0], a[1][1], a[2][2]};
    std::sort(order, order + 3, [&](int i, int j) { return lam[i] > lam[j]; });

    EigenSys es;
    for (int k = 0; k < 3; ++k) {
        int j = order[k];
        es.lam[k] = lam[j];
        es.vec[k] = {v[0][j], v[1][j], v[2][j]};
    }
    // Deterministic sign: make the largest-magnitude component of e1 and e2
    // positive, then force a right-handed frame through e3.
    for (int k = 0; k < 2; ++k) {
        Vec3& e = es.vec[k];
        double ax = std::abs(e.x), ay = std::abs(e.y), az = std::abs(e.z);
        double lead = (ax >= ay && ax >= az) ? e.x : (ay >= az ? e.y : e.z);
        if (lead < 0) e = -e;
    }
    es.vec[2] = cross(es.vec[0], es.vec[1]);
    return es;
}

ProjectionMatrix nearest_projection(const Sym3& u, double tie_tol) {
    EigenSys es = eigen_sym3(u);
    if (es.lam[0] - es.lam[1] < tie_tol) {
        std::ostringstream os;
        os << "nearest_projection: top eigenvalues tie, lam1 - lam2 = "
           << es.lam[0] - es.lam[1] << " < " << tie_tol;
        throw AmbiguousProjection(os.str());
    }
    return {es.vec[0]};
}

// ---------------------------------------------------------------------------
Sym3 canonical_flat(double x1, double x2, double a1, double a2) {
    double dx = x1 - a1, dy = x2 - a2;
    if (dx == 0.0 && dy == 0.0)
        throw ValidationError("canonical_flat: evaluation at the center point");
    double t = std::atan2(dy, dx);
    double c = std::cos(t), s = std::sin(t);
    // 1/2 diag(1,1,0) + 1/2 [[c,s,0],[s,-c,0],[0,0,0]] = n n^T, n = (cos t/2, sin t/2, 0)
    return {0.5 * (1.0 + c), 0.5 * (1.0 - c), 0.0, 0.5 * s, 0.0, 0.0};
}

Sym3 canonical_flat_in_frame(double x1, double x2, double a1, double a2,
                             const Vec3& f1, const Vec3& f2) {
    double dx = x1 - a1, dy = x2 - a2;
    if (dx == 0.0 && dy == 0.0)
        throw ValidationError("canonical_flat_in_frame: evaluation at the center point");
    double half = 0.5 * std::atan2(dy, dx);
    Vec3 n = f1 * std::cos(half) + f2 * std::sin(half);
    return Sym3::outer(n);
}

Sym3 conjugate(const Rot3& Q, const Sym3& u) {
    // columns of u, rotated: Q u Q^T = (Q u) Q^T
    Vec3 c1 = Q.apply({u.xx, u.xy, u.xz});
    Vec3 c2 = Q.apply({u.xy, u.yy, u.yz});
    Vec3 c3 = Q.apply({u.xz, u.yz, u.zz});
    // rows of (Qu) are (c1[i], c2[i], c3[i]); multiply by Q^T = apply Q to rows
    Vec3 r1 = Q.apply({c1.x, c2.x, c3.x});
    Vec3 r2 = Q.apply({c1.y, c2.y, c3.y});
    Vec3 r3 = Q.apply({c1.z, c2.z, c3.z});
    return {r1.x, r2.y, r3.z, r1.y, r1.z, r2.z};
}

}  // namespace ldg
