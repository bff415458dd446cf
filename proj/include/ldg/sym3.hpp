#pragma once
// Exact algebra of real 3x3 symmetric / antisymmetric matrices, the bulk
// potential W_beta and its derivatives, projections onto the vacuum manifold
// P = { n n^T : |n| = 1 }, and the canonical flat (degree-1/2) map.
//
// Conventions used throughout:
//   * <A,B> = tr(B^T A)  (Frobenius inner product).
//   * Antisymmetric matrices are stored by their axial vector w, where
//     A x = w x x (cross product); |A|_F^2 = 2|w|^2 and the commutator of two
//     antisymmetric matrices corresponds to the cross product of axials.
//   * Trace-free symmetric matrices can be expressed in the fixed orthonormal
//     basis B1..B5 (see Traceless5); reconstruct(q) = I/3 + sum q_i B_i has
//     trace exactly 1 by construction.

#include <array>
#include <cmath>

#include "ldg/errors.hpp"

namespace ldg {

// ---------------------------------------------------------------------------
struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    return {a.x / n, a.y / n, a.z / n};
}

// ---------------------------------------------------------------------------
// Real symmetric 3x3 matrix; only the six independent entries are stored, so
// symmetry is structural. Trace-1 is a *context* requirement, not enforced here.
struct Sym3 {
    double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

    Sym3 operator+(const Sym3& o) const {
        return {xx + o.xx, yy + o.yy, zz + o.zz, xy + o.xy, xz + o.xz, yz + o.yz};
    }
    Sym3 operator-(const Sym3& o) const {
        return {xx - o.xx, yy - o.yy, zz - o.zz, xy - o.xy, xz - o.xz, yz - o.yz};
    }
    Sym3 operator*(double s) const { return {xx * s, yy * s, zz * s, xy * s, xz * s, yz * s}; }
    Sym3 operator-() const { return {-xx, -yy, -zz, -xy, -xz, -yz}; }

    Vec3 apply(const Vec3& v) const {  // matrix-vector product
        return {xx * v.x + xy * v.y + xz * v.z,
                xy * v.x + yy * v.y + yz * v.z,
                xz * v.x + yz * v.y + zz * v.z};
    }

    static Sym3 identity() { return {1, 1, 1, 0, 0, 0}; }
    static Sym3 diag(double a, double b, double c) { return {a, b, c, 0, 0, 0}; }
    static Sym3 outer(const Vec3& n) {  // n n^T
        return {n.x * n.x, n.y * n.y, n.z * n.z, n.x * n.y, n.x * n.z, n.y * n.z};
    }
};

inline double trace(const Sym3& u) { return u.xx + u.yy + u.zz; }

inline double inner(const Sym3& a, const Sym3& b) {
    return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz + 2.0 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz);
}
inline double norm(const Sym3& a) { return std::sqrt(inner(a, a)); }

inline double det(const Sym3& u) {
    return u.xx * (u.yy * u.zz - u.yz * u.yz) - u.xy * (u.xy * u.zz - u.yz * u.xz) +
           u.xz * (u.xy * u.yz - u.yy * u.xz);
}

// u^2 (square of a symmetric matrix is symmetric).
inline Sym3 square(const Sym3& u) {
    return {u.xx * u.xx + u.xy * u.xy + u.xz * u.xz,
            u.xy * u.xy + u.yy * u.yy + u.yz * u.yz,
            u.xz * u.xz + u.yz * u.yz + u.zz * u.zz,
            u.xx * u.xy + u.xy * u.yy + u.xz * u.yz,
            u.xx * u.xz + u.xy * u.yz + u.xz * u.zz,
            u.xy * u.xz + u.yy * u.yz + u.yz * u.zz};
}

// Symmetric part of a product: uh + hu.
inline Sym3 anticommutator(const Sym3& u, const Sym3& h) {
    return {2 * (u.xx * h.xx + u.xy * h.xy + u.xz * h.xz),
            2 * (u.xy * h.xy + u.yy * h.yy + u.yz * h.yz),
            2 * (u.xz * h.xz + u.yz * h.yz + u.zz * h.zz),
            u.xx * h.xy + u.xy * h.yy + u.xz * h.yz + h.xx * u.xy + h.xy * u.yy + h.xz * u.yz,
            u.xx * h.xz + u.xy * h.yz + u.xz * h.zz + h.xx * u.xz + h.xy * u.yz + h.xz * u.zz,
            u.xy * h.xz + u.yy * h.yz + u.yz * h.zz + h.xy * u.xz + h.yy * u.yz + h.yz * u.zz};
}

// Remove the trace: h - (tr h / 3) I. Projects onto trace-free symmetric space.
inline Sym3 traceless(const Sym3& h) {
    double t = trace(h) / 3.0;
    return {h.xx - t, h.yy - t, h.zz - t, h.xy, h.xz, h.yz};
}

// ---------------------------------------------------------------------------
// Antisymmetric 3x3 matrix stored as its axial vector: A = [w]_x, A v = w x v.
// Entry layout: A = [[0,-w.z,w.y],[w.z,0,-w.x],[-w.y,w.x,0]], |A|_F = sqrt(2)|w|.
struct AntiSym3 {
    Vec3 w;

    AntiSym3 operator+(const AntiSym3& o) const { return {w + o.w}; }
    AntiSym3 operator-(const AntiSym3& o) const { return {w - o.w}; }
    AntiSym3 operator*(double s) const { return {w * s}; }
    AntiSym3 operator-() const { return {-w}; }
};

inline double inner(const AntiSym3& a, const AntiSym3& b) { return 2.0 * dot(a.w, b.w); }
inline double norm(const AntiSym3& a) { return std::sqrt(inner(a, a)); }

// so(3) generators: Lambda_j rotates about axis e_j; axial(Lambda_j) = e_j,
// |Lambda_j|_F = sqrt(2), [Lambda_1,Lambda_2] = Lambda_3, Lambda_j^3 = -Lambda_j.
inline AntiSym3 lambda1() { return {{1, 0, 0}}; }
inline AntiSym3 lambda2() { return {{0, 1, 0}}; }
inline AntiSym3 lambda3() { return {{0, 0, 1}}; }
// The distinguished in-plane rotation generator [[0,-1,0],[1,0,0],[0,0,0]],
// i.e. Lambda_3: the current of the canonical flat map is proportional to it.
inline AntiSym3 lambda_canonical() { return lambda3(); }

// Commutators. [sym,sym] and [anti,anti] are antisymmetric; [anti,sym] is symmetric.
inline AntiSym3 commutator(const Sym3& a, const Sym3& b) {
    // Axial components of ab - ba: w_x = (ab)_{32} - (ba)_{32}, etc.
    double wx = a.xz * b.xy + a.yz * b.yy + a.zz * b.yz - (b.xz * a.xy + b.yz * a.yy + b.zz * a.yz);
    double wy = a.xx * b.xz + a.xy * b.yz + a.xz * b.zz - (b.xx * a.xz + b.xy * a.yz + b.xz * a.zz);
    double wz = a.xy * b.xx + a.yy * b.xy + a.yz * b.xz - (b.xy * a.xx + b.yy * a.xy + b.yz * a.xz);
    return {{wx, wy, wz}};
}
inline AntiSym3 commutator(const AntiSym3& a, const AntiSym3& b) { return {cross(a.w, b.w)}; }
inline Sym3 commutator(const AntiSym3& a, const Sym3& s) {
    // [w_x, S] = [w]_x S - S [w]_x, symmetric. Expand per entry.
    const Vec3& w = a.w;
    Vec3 c1 = cross(w, {s.xx, s.xy, s.xz});  // [w]_x times column j of S
    Vec3 c2 = cross(w, {s.xy, s.yy, s.yz});
    Vec3 c3 = cross(w, {s.xz, s.yz, s.zz});
    // (AS)_{ij} = c_j[i]; (AS - SA) = AS + (AS)^T since (SA)^T = A^T S = -AS.
    return {2 * c1.x, 2 * c2.y, 2 * c3.z, c1.y + c2.x, c1.z + c3.x, c2.z + c3.y};
}

// ---------------------------------------------------------------------------
// Rank-1 orthogonal projection n n^T, |n| = 1.
struct ProjectionMatrix {
    Vec3 n;
    Sym3 matrix() const { return Sym3::outer(n); }
};

// ---------------------------------------------------------------------------
// Traceless5: coordinates in the fixed orthonormal trace-free basis
//   B1 = diag(1,-1,0)/sqrt(2), B2 = diag(1,1,-2)/sqrt(6),
//   B3 = (e1 e2^T + e2 e1^T)/sqrt(2), B4 = (e1 e3^T + ..)/sqrt(2), B5 = (e2 e3^T + ..)/sqrt(2).
// reconstruct(q) = I/3 + sum q_i B_i has trace exactly 1; |reconstruct|^2 = 1/3 + |q|^2.
struct Traceless5 {
    std::array<double, 5> q{};

    double& operator[](int i) { return q[i]; }
    double operator[](int i) const { return q[i]; }
};

namespace detail {
inline constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490393;
inline constexpr double kInvSqrt6 = 0.4082482904638630163662140124509818986;
}  // namespace detail

inline Traceless5 coords(const Sym3& u) {
    // Coordinates of the trace-free part of u; the trace itself is dropped
    // (callers keep trace-1 contexts structural).
    using namespace detail;
    Traceless5 c;
    c.q[0] = (u.xx - u.yy) * kInvSqrt2;
    c.q[1] = (u.xx + u.yy - 2.0 * u.zz) * kInvSqrt6;
    c.q[2] = 2.0 * u.xy * kInvSqrt2;
    c.q[3] = 2.0 * u.xz * kInvSqrt2;
    c.q[4] = 2.0 * u.yz * kInvSqrt2;
    return c;
}

// Reconstruction without the I/3 part: maps coordinate differentials (e.g.
// finite differences of a trace-1 field) to genuinely trace-free matrices.
inline Sym3 reconstruct_traceless(const Traceless5& c) {
    using namespace detail;
    Sym3 u;
    u.xx = c.q[0] * kInvSqrt2 + c.q[1] * kInvSqrt6;
    u.yy = -c.q[0] * kInvSqrt2 + c.q[1] * kInvSqrt6;
    u.zz = -2.0 * c.q[1] * kInvSqrt6;
    u.xy = c.q[2] * kInvSqrt2;
    u.xz = c.q[3] * kInvSqrt2;
    u.yz = c.q[4] * kInvSqrt2;
    return u;
}

inline Sym3 reconstruct(const Traceless5& c) {
    using namespace detail;
    const double third = 1.0 / 3.0;
    Sym3 u;
    u.xx = third + c.q[0] * kInvSqrt2 + c.q[1] * kInvSqrt6;
    u.yy = third - c.q[0] * kInvSqrt2 + c.q[1] * kInvSqrt6;
    u.zz = third - 2.0 * c.q[1] * kInvSqrt6;
    u.xy = c.q[2] * kInvSqrt2;
    u.xz = c.q[3] * kInvSqrt2;
    u.yz = c.q[4] * kInvSqrt2;
    return u;
}

// ---------------------------------------------------------------------------
// Bulk potential W_beta(u) = (1-|u|^2)^2/4 - beta det(u), beta in [1,3).
// Nonnegative on PSD trace-1 matrices, zero exactly on P.
double potential(const Sym3& u, double beta);

// Unconstrained gradient (|u|^2-1)u + beta(u - u^2). The trace part (the
// Lagrange multiplier of the trace constraint) is removed by the caller when
// flowing; tr(grad) = (beta-1)(1-|u|^2) identically, which tests cross-check.
Sym3 grad_potential(const Sym3& u, double beta);

// Directional second derivative (D^2 W)(u)[h] for trace-free h:
// (|u|^2-1)h + 2<u,h>u + beta(h - uh - hu).
Sym3 hess_apply(const Sym3& u, const Sym3& h, double beta);

// ---------------------------------------------------------------------------
// Symmetric 3x3 eigendecomposition (cyclic Jacobi; deterministic).
// Eigenvalues sorted descending; eigenvectors form a right-handed orthonormal
// frame (det = +1) with a deterministic sign convention.
struct EigenSys {
    std::array<double, 3> lam;   // lam[0] >= lam[1] >= lam[2]
    std::array<Vec3, 3> vec;     // corresponding unit eigenvectors
};
EigenSys eigen_sym3(const Sym3& u);

// Nearest point of P: n n^T for n the top eigenvector. Throws
// AmbiguousProjection when lam1 - lam2 < tol (defect core signature).
ProjectionMatrix nearest_projection(const Sym3& u, double tie_tol = 1e-9);

// ---------------------------------------------------------------------------
// Canonical flat map: u0(x) = 1/2 diag(1,1,0) + 1/2 R(theta) with
// R = [[cos t, sin t, 0],[sin t, -cos t, 0],[0,0,0]], theta the polar angle of
// x - a. Equals n n^T with n = (cos t/2, sin t/2, 0): an exact degree-1/2 map
// whose image is a closed geodesic of P. Throws ValidationError at x = a.
Sym3 canonical_flat(double x1, double x2, double a1, double a2);

// Same map with the geodesic plane spanned by (f1, f2) instead of (e1, e2):
// n = cos(t/2) f1 + sin(t/2) f2. Used to compare a field against the flat map
// in the frame extracted from its own current.
Sym3 canonical_flat_in_frame(double x1, double x2, double a1, double a2,
                             const Vec3& f1, const Vec3& f2);

// ---------------------------------------------------------------------------
// 3x3 rotations (tests and frame changes). Stored row-major.
struct Rot3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    Vec3 apply(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    static Rot3 about_z(double c) {
        Rot3 r;
        r.m = {std::cos(c), -std::sin(c), 0, std::sin(c), std::cos(c), 0, 0, 0, 1};
        return r;
    }
};

// Q u Q^T
Sym3 conjugate(const Rot3& Q, const Sym3& u);
// Q A Q^T for antisymmetric A: axial transforms as axial(QAQ^T) = Q axial(A)
// (proper rotations only).
inline AntiSym3 conjugate(const Rot3& Q, const AntiSym3& a) { return {Q.apply(a.w)}; }

}  // namespace ldg
