#include "ldg/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ldg/errors.hpp"

namespace ldg {

std::vector<double> radius_ladder(double r_lo, double r_hi, int count) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo) || count < 2) {
        std::ostringstream os;
        os << "radius_ladder requires 0 < r_lo < r_hi and count >= 2 (got r_lo = " << r_lo
           << ", r_hi = " << r_hi << ", count = " << count << ")";
        throw ValidationError(os.str());
    }
    std::vector<double> r(static_cast<std::size_t>(count));
    const double ratio = r_hi / r_lo;
    for (int k = 0; k < count; ++k) {
        r[static_cast<std::size_t>(k)] = r_lo * std::pow(ratio, double(k) / double(count - 1));
    }
    return r;
}

GeodesicProfiles geodesic_length_profile(const Field& f, double ax, double ay,
                                         const std::vector<double>& radii, int m) {
    if (radii.empty()) throw ValidationError("geodesic_length_profile: empty radius list");
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end());

    GeodesicProfiles out;
    for (double r : rs) {
        CircleSample cs = sample_circle(f, ax, ay, r, m);

        double len = 0.0;
        for (int k = 0; k < m; ++k) {
            const Sym3 d = cs.values[static_cast<std::size_t>((k + 1) % m)] -
                           cs.values[static_cast<std::size_t>(k)];
            len += norm(d);
        }

        // Second moment of the leading eigenvectors; its top-2 eigenvectors
        // span the best-fit plane (total least squares for directions).
        std::vector<Vec3> ns(static_cast<std::size_t>(m));
        Sym3 mom{};
        for (int k = 0; k < m; ++k) {
            const Vec3 n = eigen_sym3(cs.values[static_cast<std::size_t>(k)]).vec[0];
            ns[static_cast<std::size_t>(k)] = n;
            mom = mom + Sym3::outer(n);
        }
        mom = mom * (1.0 / m);
        const EigenSys pm = eigen_sym3(mom);
        const Vec3 v1 = pm.vec[0], v2 = pm.vec[1];

        double dist = 0.0;
        for (int k = 0; k < m; ++k) {
            const Vec3 n = ns[static_cast<std::size_t>(k)];
            Vec3 p{dot(n, v1) * v1.x + dot(n, v2) * v2.x, dot(n, v1) * v1.y + dot(n, v2) * v2.y,
                   dot(n, v1) * v1.z + dot(n, v2) * v2.z};
            const double pn = norm(p);
            const Vec3 q = pn > 1e-12 ? Vec3{p.x / pn, p.y / pn, p.z / pn} : v1;
            dist += norm(cs.values[static_cast<std::size_t>(k)] - Sym3::outer(q));
        }
        dist /= m;

        out.length.r.push_back(r);
        out.length.value.push_back(len);
        out.geodesic_fit.r.push_back(r);
        out.geodesic_fit.value.push_back(dist);
    }
    return out;
}

DecayProfiles radial_decay_diagnostics(const Field& f, double ax, double ay,
                                       const std::vector<double>& radii, const AntiSym3& lambda,
                                       const Sym3& p3, int m) {
    if (radii.empty()) throw ValidationError("radial_decay_diagnostics: empty radius list");
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end());

    DecayProfiles out;
    for (double r : rs) {
        CircleSample cs = sample_circle(f, ax, ay, r, m);
        double lat = 0.0, cp3 = 0.0, cflat = 0.0;
        for (int k = 0; k < m; ++k) {
            const Sym3& u = cs.values[static_cast<std::size_t>(k)];
            lat = std::max(lat, std::fabs(inner(u, p3)));
            const AntiSym3 c3 = commutator(u, p3);
            cp3 = std::max(cp3, std::sqrt(inner(c3, c3)));
            const double th = cs.theta[static_cast<std::size_t>(k)];
            const Sym3 u0 = canonical_flat(ax + r * std::cos(th), ay + r * std::sin(th), ax, ay);
            const AntiSym3 cu = commutator(u, u0);
            const AntiSym3 lc = commutator(lambda, cu);
            cflat = std::max(cflat, std::sqrt(inner(lc, lc)));
        }
        out.latitude.r.push_back(r);
        out.latitude.value.push_back(lat);
        out.comm_p3.r.push_back(r);
        out.comm_p3.value.push_back(cp3);
        out.comm_flat.r.push_back(r);
        out.comm_flat.value.push_back(cflat);
    }
    return out;
}

LiftAngles lift_angles(const Field& f, double ax, double ay, const std::vector<double>& radii,
                       const Sym3& p3, int m) {
    if (radii.empty()) throw ValidationError("lift_angles: empty radius list");
    std::vector<double> rs = radii;
    std::sort(rs.begin(), rs.end());
    const std::size_t nc = rs.size();

    LiftAngles out;
    out.radii = rs;
    out.alpha1.assign(nc, {});
    out.beta_lat.assign(nc, {});

    // Outermost-first so the innermost circle (which defines alpha_star)
    // inherits a branch choice anchored at the best-resolved radius.
    Vec3 ref_n{};           // aligned n at theta=0 of the previous circle
    double ref_alpha0 = 0;  // its unwrapped alpha
    bool have_ref = false;

    for (std::size_t ci = nc; ci-- > 0;) {
        const double r = rs[ci];
        CircleSample cs = sample_circle(f, ax, ay, r, m);
        std::vector<double>& a1 = out.alpha1[ci];
        std::vector<double>& bl = out.beta_lat[ci];
        a1.resize(static_cast<std::size_t>(m));
        bl.resize(static_cast<std::size_t>(m));

        double sup_lat = 0.0;
        for (int k = 0; k < m; ++k) {
            sup_lat = std::max(
                sup_lat, std::fabs(inner(cs.values[static_cast<std::size_t>(k)], p3)));
        }
        if (sup_lat >= 0.5) {
            std::ostringstream os;
            os << "latitude too large on circle r=" << r << ": sup |<u,P3>| = " << sup_lat;
            throw LatitudeTooLarge(os.str());
        }

        Vec3 prev_n{};
        double prev_alpha = 0.0, alpha0 = 0.0;
        Vec3 n0_aligned{};
        for (int k = 0; k < m; ++k) {
            Vec3 n = eigen_sym3(cs.values[static_cast<std::size_t>(k)]).vec[0];
            if (k == 0) {
                if (have_ref && dot(n, ref_n) < 0.0) n = {-n.x, -n.y, -n.z};
            } else {
                if (dot(n, prev_n) < 0.0) n = {-n.x, -n.y, -n.z};
            }
            double alpha = std::atan2(n.y, n.x);
            if (k == 0) {
                if (have_ref) alpha += 2.0 * std::numbers::pi *
                                       std::round((ref_alpha0 - alpha) / (2.0 * std::numbers::pi));
                alpha0 = alpha;
                n0_aligned = n;
            } else {
                alpha += 2.0 * std::numbers::pi *
                         std::round((prev_alpha - alpha) / (2.0 * std::numbers::pi));
            }
            const double theta = 2.0 * std::numbers::pi * k / m;
            a1[static_cast<std::size_t>(k)] = 2.0 * alpha - theta;
            bl[static_cast<std::size_t>(k)] = std::asin(std::clamp(n.z, -1.0, 1.0));
            prev_n = n;
            prev_alpha = alpha;
        }
        // Close the loop: continue the sign/phase walk back to sample 0 and
        // require the total phase gain to be +pi (one +1/2 winding).
        {
            Vec3 n = n0_aligned;
            if (dot(n, prev_n) < 0.0) n = {-n.x, -n.y, -n.z};
            double alpha = std::atan2(n.y, n.x);
            alpha += 2.0 * std::numbers::pi *
                     std::round((prev_alpha - alpha) / (2.0 * std::numbers::pi));
            const double gain = alpha - alpha0;
            if (std::fabs(gain - std::numbers::pi) > 0.1) {
                std::ostringstream os;
                os << "phase unwrap on circle r=" << r << " accumulated " << gain
                   << ", expected pi";
                throw UnwrapInconsistent(os.str());
            }
        }
        ref_n = n0_aligned;
        ref_alpha0 = alpha0;
        have_ref = true;
    }

    // alpha_star from the innermost circle; deviations per circle.
    {
        const std::vector<double>& inner_a1 = out.alpha1[0];
        double s = 0.0;
        for (double v : inner_a1) s += v;
        out.alpha_star = s / double(inner_a1.size());
    }
    for (std::size_t ci = 0; ci < nc; ++ci) {
        double dev = 0.0;
        for (double v : out.alpha1[ci]) dev += std::fabs(v - out.alpha_star);
        out.alpha1_deviation.r.push_back(rs[ci]);
        out.alpha1_deviation.value.push_back(dev / double(out.alpha1[ci].size()));
    }
    return out;
}

}  // namespace ldg
