#include "ldg/eigenframe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "ldg/errors.hpp"

namespace ldg {

namespace {

// Aligns v against ref by sign. Returns true when a flip was needed. A dot
// product near zero means the eigenvector rotated by ~90 degrees between
// neighboring nodes (degenerate eigenvalues nearby); we still pick the
// non-negative branch so the walk stays deterministic.
bool align_sign(const Vec3& ref, Vec3& v) {
    if (dot(ref, v) < 0.0) {
        v = {-v.x, -v.y, -v.z};
        return true;
    }
    return false;
}

}  // namespace

EigenframeField eigenframe(const Field& f) {
    const Grid2D& g = f.grid;
    EigenframeField ef;
    ef.grid = g;
    const std::size_t nn = static_cast<std::size_t>(g.n) * g.n;
    ef.lam.resize(nn);
    ef.e1.resize(nn);
    ef.e2.resize(nn);
    ef.e3.resize(nn);
    ef.flip1.assign(nn, 0);
    ef.flip2.assign(nn, 0);
    ef.flip3.assign(nn, 0);

    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            const std::size_t k = g.idx(i, j);
            EigenSys es = eigen_sym3(f.value(i, j));
            ef.lam[k] = {es.lam[0], es.lam[1], es.lam[2]};
            ef.e1[k] = es.vec[0];
            ef.e2[k] = es.vec[1];
            ef.e3[k] = es.vec[2];
            // Row-major sign continuity: compare with the left neighbor, and
            // at a row start with the node below, so the whole grid is one
            // connected walk.
            std::size_t ref = k;
            if (i > 0) {
                ref = g.idx(i - 1, j);
            } else if (j > 0) {
                ref = g.idx(0, j - 1);
            }
            if (ref != k) {
                ef.flip1[k] = align_sign(ef.e1[ref], ef.e1[k]) ? 1 : 0;
                ef.flip2[k] = align_sign(ef.e2[ref], ef.e2[k]) ? 1 : 0;
                ef.flip3[k] = align_sign(ef.e3[ref], ef.e3[k]) ? 1 : 0;
            }
        }
    }
    return ef;
}

WindingCheck eigen_winding_on_circle(const Field& f, double ax, double ay, double r, int m) {
    CircleSample cs = sample_circle(f, ax, ay, r, m);
    WindingCheck wc;
    wc.min_gap12 = 2.0;
    wc.min_gap23 = 2.0;
    Vec3 first1{}, first3{}, prev1{}, prev3{};
    for (int k = 0; k < m; ++k) {
        EigenSys es = eigen_sym3(cs.values[static_cast<std::size_t>(k)]);
        wc.min_gap12 = std::min(wc.min_gap12, es.lam[0] - es.lam[1]);
        wc.min_gap23 = std::min(wc.min_gap23, es.lam[1] - es.lam[2]);
        Vec3 v1 = es.vec[0];
        Vec3 v3 = es.vec[2];
        if (k == 0) {
            first1 = v1;
            first3 = v3;
        } else {
            align_sign(prev1, v1);
            align_sign(prev3, v3);
        }
        prev1 = v1;
        prev3 = v3;
    }
    // Continue the walk one more step back to the starting sample: a negated
    // return means the vector field picks up a sign over the loop.
    wc.e1_half = dot(prev1, first1) < 0.0;
    wc.e3_half = dot(prev3, first3) < 0.0;
    return wc;
}

DefectInfo locate_defect(const EigenframeField& ef) {
    const Grid2D& g = ef.grid;
    constexpr double kGapThreshold = 0.2;

    // Collect sub-threshold nodes and find the global argmin.
    std::vector<std::size_t> low;
    std::size_t argmin = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            const std::size_t k = g.idx(i, j);
            const double gap = ef.lam[k][0] - ef.lam[k][1];
            if (gap < best) {
                best = gap;
                argmin = k;
            }
            if (gap < kGapThreshold) low.push_back(k);
        }
    }
    if (low.empty()) {
        std::ostringstream os;
        os << "no defect: eigenvalue gap never drops below " << kGapThreshold
           << " (min " << best << ")";
        throw NoDefect(os.str());
    }

    // 8-connected clustering of the sub-threshold set. Two clusters mean two
    // separated near-degenerate cores, which this single-defect API refuses.
    std::vector<std::uint8_t> in_low(static_cast<std::size_t>(g.n) * g.n, 0);
    for (std::size_t k : low) in_low[k] = 1;
    std::vector<std::uint8_t> seen(in_low.size(), 0);
    int clusters = 0;
    for (std::size_t s : low) {
        if (seen[s]) continue;
        ++clusters;
        if (clusters > 1) {
            throw MultipleDefects("eigenvalue-gap region below 0.2 splits into multiple clusters");
        }
        std::queue<std::size_t> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            const std::size_t k = q.front();
            q.pop();
            const int i = static_cast<int>(k) % g.n;
            const int j = static_cast<int>(k) / g.n;
            for (int dj = -1; dj <= 1; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= g.n || jj >= g.n) continue;
                    const std::size_t kk = g.idx(ii, jj);
                    if (in_low[kk] && !seen[kk]) {
                        seen[kk] = 1;
                        q.push(kk);
                    }
                }
            }
        }
    }

    const int i0 = static_cast<int>(argmin) % g.n;
    const int j0 = static_cast<int>(argmin) / g.n;
    if (i0 == 0 || j0 == 0 || i0 == g.n - 1 || j0 == g.n - 1) {
        throw NoDefect("eigenvalue-gap minimum sits on the boundary; no interior defect");
    }

    // Quadratic least-squares fit of the gap over the 3x3 neighborhood in
    // units of h: gap ~ c0 + c1 x + c2 y + c3 x^2 + c4 xy + c5 y^2. The gap
    // behaves like a cone |x-a|/eps near the core, so the fitted stationary
    // point is only an O(h) refinement, which is all the contract promises.
    double ATA[6][6] = {};
    double ATb[6] = {};
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            const std::size_t k = g.idx(i0 + di, j0 + dj);
            const double gap = ef.lam[k][0] - ef.lam[k][1];
            const double row[6] = {1.0, double(di), double(dj), double(di * di),
                                   double(di * dj), double(dj * dj)};
            for (int a = 0; a < 6; ++a) {
                ATb[a] += row[a] * gap;
                for (int b = 0; b < 6; ++b) ATA[a][b] += row[a] * row[b];
            }
        }
    }
    // Gaussian elimination with partial pivoting on the 6x6 normal system.
    double c[6];
    {
        double M[6][7];
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) M[a][b] = ATA[a][b];
            M[a][6] = ATb[a];
        }
        for (int col = 0; col < 6; ++col) {
            int piv = col;
            for (int r = col + 1; r < 6; ++r) {
                if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
            }
            for (int b = 0; b < 7; ++b) std::swap(M[col][b], M[piv][b]);
            for (int r = 0; r < 6; ++r) {
                if (r == col) continue;
                const double fct = M[r][col] / M[col][col];
                for (int b = col; b < 7; ++b) M[r][b] -= fct * M[col][b];
            }
        }
        for (int a = 0; a < 6; ++a) c[a] = M[a][6] / M[a][a];
    }

    // Stationary point of the quadric, clamped to the 3x3 patch; fall back to
    // the node itself when the fitted Hessian is not positive definite.
    double dx = 0.0, dy = 0.0;
    const double hxx = 2.0 * c[3], hyy = 2.0 * c[5], hxy = c[4];
    const double det = hxx * hyy - hxy * hxy;
    if (det > 1e-14 && hxx > 0.0) {
        dx = (-c[1] * hyy + c[2] * hxy) / det;
        dy = (-c[2] * hxx + c[1] * hxy) / det;
        dx = std::clamp(dx, -1.0, 1.0);
        dy = std::clamp(dy, -1.0, 1.0);
    }

    DefectInfo info;
    info.x = g.x(i0) + dx * g.h;
    info.y = g.y(j0) + dy * g.h;
    info.gap = c[0] + c[1] * dx + c[2] * dy + c[3] * dx * dx + c[4] * dx * dy + c[5] * dy * dy;
    // Bilinear interpolation of the sorted eigenvalue fields at the refined
    // point; adequate for reporting (the exact eigenvalues of the
    // interpolated matrix differ at O(h^2)).
    {
        const int ci = dx >= 0.0 ? i0 : i0 - 1;
        const int cj = dy >= 0.0 ? j0 : j0 - 1;
        const double fx = dx >= 0.0 ? dx : dx + 1.0;
        const double fy = dy >= 0.0 ? dy : dy + 1.0;
        for (int comp = 0; comp < 3; ++comp) {
            const double v00 = ef.lam[g.idx(ci, cj)][static_cast<std::size_t>(comp)];
            const double v10 = ef.lam[g.idx(ci + 1, cj)][static_cast<std::size_t>(comp)];
            const double v01 = ef.lam[g.idx(ci, cj + 1)][static_cast<std::size_t>(comp)];
            const double v11 = ef.lam[g.idx(ci + 1, cj + 1)][static_cast<std::size_t>(comp)];
            info.lam[static_cast<std::size_t>(comp)] =
                (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
        }
    }
    return info;
}

}  // namespace ldg
