#include <array>
#include "ldg/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ldg/dst_poisson.hpp"

namespace ldg {

void FlowConfig::validate() const {
    if (!(tolerance > 0)) throw ValidationError("FlowConfig: tolerance must be > 0");
    if (check_interval < 1) throw ValidationError("FlowConfig: check_interval must be >= 1");
    if (max_iterations < 1) throw ValidationError("FlowConfig: max_iterations must be >= 1");
    if (!(dt_safety > 0) || dt_safety > 1.0)
        throw ValidationError("FlowConfig: dt_safety must lie in (0, 1]");
    if (cascade_min_nodes < 16) throw ValidationError("FlowConfig: cascade_min_nodes must be >= 16");
}

namespace {

// Gradient of W_beta in the trace-free coordinates: reconstruct, evaluate the
// matrix gradient (|u|^2-1)u + beta(u-u^2), project back (coords drops the
// trace part, i.e. the Lagrange multiplier of the trace constraint).
inline void grad_w_coords(const double* q, double beta, double out[5]) {
    Sym3 u = reconstruct(Traceless5{{q[0], q[1], q[2], q[3], q[4]}});
    Sym3 g = grad_potential(u, beta);
    Traceless5 c = coords(g);
    for (int k = 0; k < 5; ++k) out[k] = c.q[k];
}

inline double potential_of_coords(const double* q, double beta) {
    return potential(reconstruct(Traceless5{{q[0], q[1], q[2], q[3], q[4]}}), beta);
}

double stable_dt(const FlowConfig& cfg, double h, double eps, double beta) {
    double dt_pot = eps * eps / (1.0 + beta);
    if (cfg.semi_implicit) return cfg.dt_safety * dt_pot;
    return cfg.dt_safety * std::min(h * h / 4.0, dt_pot);
}

}  // namespace

// ---------------------------------------------------------------------------
EnergyBreakdown energy(const FlowState& s) {
    const Grid2D& g = s.field.grid;
    const int n = g.n;
    const double* q = s.field.data.data();
    const double inv_e2 = 1.0 / (s.epsilon * s.epsilon);

    double dir = 0.0, pot = 0.0;
    // x-edges, weighted by the trapezoid weight of their row.
    for (int j = 0; j < n; ++j) {
        const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        double row = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            const double* a = q + 5ull * (j * n + i);
            const double* b = a + 5;
            double d2 = 0.0;
            for (int c = 0; c < 5; ++c) {
                double d = b[c] - a[c];
                d2 += d * d;
            }
            row += d2;
        }
        dir += 0.5 * wy * row;
    }
    // y-edges, weighted by the column weight.
    for (int j = 0; j < n - 1; ++j) {
        double row = 0.0, row_ends = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* a = q + 5ull * (j * n + i);
            const double* b = a + 5ull * n;
            double d2 = 0.0;
            for (int c = 0; c < 5; ++c) {
                double d = b[c] - a[c];
                d2 += d * d;
            }
            if (i == 0 || i == n - 1)
                row_ends += d2;
            else
                row += d2;
        }
        dir += 0.5 * (row + 0.5 * row_ends);
    }
    // potential, trapezoid weights in both directions
    const double cell = g.h * g.h;
    for (int j = 0; j < n; ++j) {
        const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        double row = 0.0;
        for (int i = 0; i < n; ++i) {
            const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            row += wx * potential_of_coords(q + 5ull * (j * n + i), s.beta);
        }
        pot += wy * row;
    }
    pot *= cell * inv_e2;

    return {dir, pot, dir + pot};
}

EnergyBreakdown energy_masked(const FlowState& s, const DiscMask& m) {
    const Grid2D& g = s.field.grid;
    const int n = g.n;
    const double* q = s.field.data.data();
    const double inv_e2 = 1.0 / (s.epsilon * s.epsilon);

    double dir = 0.0, pot = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            int id = j * n + i;
            // x- and y-edges owned by this node (to i+1 / j+1): counted when
            // either endpoint is mask-interior.
            if (i + 1 < n && (m.role[id] == 1 || m.role[id + 1] == 1)) {
                const double* a = q + 5ull * id;
                const double* b = a + 5;
                double d2 = 0.0;
                for (int c = 0; c < 5; ++c) {
                    double d = b[c] - a[c];
                    d2 += d * d;
                }
                dir += 0.5 * d2;
            }
            if (j + 1 < n && (m.role[id] == 1 || m.role[id + n] == 1)) {
                const double* a = q + 5ull * id;
                const double* b = a + 5ull * n;
                double d2 = 0.0;
                for (int c = 0; c < 5; ++c) {
                    double d = b[c] - a[c];
                    d2 += d * d;
                }
                dir += 0.5 * d2;
            }
            if (m.role[id] == 1) pot += potential_of_coords(q + 5ull * id, s.beta);
        }
    }
    pot *= g.h * g.h * inv_e2;
    return {dir, pot, dir + pot};
}

// ---------------------------------------------------------------------------
namespace {

void check_monotone(const FlowState& s, const EnergyBreakdown& before,
                    const EnergyBreakdown& after, double dt) {
    double slack = 1e-12 + 1e-12 * std::abs(before.total);
    if (after.total > before.total + slack) {
        std::ostringstream os;
        os << "EnergyIncrease at iteration " << s.iteration << ": E " << before.total << " -> "
           << after.total << " (dt = " << dt << ", eps = " << s.epsilon << ")";
        throw EnergyIncrease(os.str());
    }
}

// Explicit update of all non-Dirichlet nodes into `out` (same layout as field
// data): q + dt * (Delta_h q - grad W / eps^2).
void explicit_update(const FlowState& s, double dt, std::vector<double>& out) {
    const Grid2D& g = s.field.grid;
    const int n = g.n;
    const double* q = s.field.data.data();
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double inv_e2 = 1.0 / (s.epsilon * s.epsilon);
    out = s.field.data;

    double gw[5];
    for (int j = 1; j < n - 1; ++j) {
        for (int i = 1; i < n - 1; ++i) {
            int id = j * n + i;
            if (s.dirichlet[id]) continue;
            const double* c = q + 5ull * id;
            const double* l = c - 5;
            const double* r = c + 5;
            const double* d = c - 5ull * n;
            const double* u = c + 5ull * n;
            grad_w_coords(c, s.beta, gw);
            double* o = out.data() + 5ull * id;
            for (int k = 0; k < 5; ++k) {
                double lap = (l[k] + r[k] + d[k] + u[k] - 4.0 * c[k]) * inv_h2;
                o[k] = c[k] + dt * (lap - inv_e2 * gw[k]);
            }
        }
    }
}

// Semi-implicit update: (I - dt Delta_h) q_new = q - dt grad W / eps^2, with
// the fixed boundary values folded into the right-hand side. Requires the
// whole Dirichlet set to be exactly the outer ring (run_flow guarantees it).
// All five component planes are assembled in one node pass (grad W is shared),
// then solved independently in the sine basis.
void semi_implicit_update(const FlowState& s, double dt, DirichletSpectralSolver& helm,
                          std::vector<double>& out, std::vector<double>& rhs5) {
    const Grid2D& g = s.field.grid;
    const int n = g.n;
    const int L = n - 2;
    const std::size_t plane = static_cast<std::size_t>(L) * L;
    const double* q = s.field.data.data();
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double inv_e2 = 1.0 / (s.epsilon * s.epsilon);
    out = s.field.data;

    rhs5.resize(5 * plane);
    double gw[5];
    for (int j = 1; j < n - 1; ++j) {
        for (int i = 1; i < n - 1; ++i) {
            int id = j * n + i;
            const double* c = q + 5ull * id;
            grad_w_coords(c, s.beta, gw);
            std::size_t at = static_cast<std::size_t>(j - 1) * L + (i - 1);
            for (int k = 0; k < 5; ++k) {
                double b = c[k] - dt * inv_e2 * gw[k];
                // boundary neighbors contribute dt/h^2 * (fixed value)
                if (i == 1) b += dt * inv_h2 * q[5ull * (id - 1) + k];
                if (i == n - 2) b += dt * inv_h2 * q[5ull * (id + 1) + k];
                if (j == 1) b += dt * inv_h2 * q[5ull * (id - n) + k];
                if (j == n - 2) b += dt * inv_h2 * q[5ull * (id + n) + k];
                rhs5[k * plane + at] = b;
            }
        }
    }
    std::vector<double> comp(plane);
    for (int k = 0; k < 5; ++k) {
        std::copy(rhs5.begin() + k * plane, rhs5.begin() + (k + 1) * plane, comp.begin());
        helm.solve(comp, 1.0, dt);
        for (int j = 1; j < n - 1; ++j)
            for (int i = 1; i < n - 1; ++i)
                out[5ull * (j * n + i) + k] = comp[static_cast<std::size_t>(j - 1) * L + (i - 1)];
    }
}

}  // namespace

void step(FlowState& s, const FlowConfig& cfg, DirichletSpectralSolver* helm) {
    EnergyBreakdown before = s.energy;
    std::vector<double> next;
    if (cfg.semi_implicit) {
        if (!helm)
            throw ValidationError("step: semi-implicit stepping needs a spectral solver");
        std::vector<double> rhs;
        semi_implicit_update(s, s.dt, *helm, next, rhs);
    } else {
        explicit_update(s, s.dt, next);
    }
    s.field.data.swap(next);
    EnergyBreakdown after = energy(s);
    s.iteration += 1;
    check_monotone(s, before, after, s.dt);
    s.energy = after;
}

double descent_residual_norm(const FlowState& s) {
    const Grid2D& g = s.field.grid;
    const int n = g.n;
    const double* q = s.field.data.data();
    const double inv_h2 = 1.0 / (g.h * g.h);
    const double inv_e2 = 1.0 / (s.epsilon * s.epsilon);
    double acc = 0.0;
    double gw[5];
    for (int j = 1; j < n - 1; ++j) {
        for (int i = 1; i < n - 1; ++i) {
            int id = j * n + i;
            if (s.dirichlet[id]) continue;
            const double* c = q + 5ull * id;
            grad_w_coords(c, s.beta, gw);
            for (int k = 0; k < 5; ++k) {
                double lap = (c[-5 + k] + c[5 + k] + c[-5 * n + k] + c[5 * n + k] - 4.0 * c[k]) * inv_h2;
                double rk = lap - inv_e2 * gw[k];
                acc += rk * rk;
            }
        }
    }
    return std::sqrt(acc * g.h * g.h);
}

// ---------------------------------------------------------------------------
Field initial_field(const Grid2D& g, const BoundarySpec& spec, double eps) {
    spec.validate();
    Field f(g);
    const double ax = g.cx(), ay = g.cy();
    const double blend_width = 0.2 * g.side;

    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            double x = g.x(i), y = g.y(j);
            double dx = x - ax, dy = y - ay;
            double rho = std::hypot(dx, dy);
            double t = std::atan2(dy, dx);
            // mollified canonical flat core: 1/2 diag(1,1,0) + 1/2 tanh(rho/eps) R(theta)
            double m = std::tanh(rho / eps);
            double c = std::cos(t), sn = std::sin(t);
            Sym3 core{0.5 * (1.0 + m * c), 0.5 * (1.0 - m * c), 0.0, 0.5 * m * sn, 0.0, 0.0};

            // blend toward the boundary trace over the outer 20% of the domain
            double dist_bnd = std::min(std::min(x - g.ox, g.ox + g.side - x),
                                       std::min(y - g.oy, g.oy + g.side - y));
            double tt = 1.0 - dist_bnd / blend_width;
            Sym3 u = core;
            if (tt > 0.0) {
                tt = std::min(tt, 1.0);
                double w = tt * tt * (3.0 - 2.0 * tt);  // smoothstep
                Sym3 ub = spec.value(g.boundary_angle(x, y));
                u = core * (1.0 - w) + ub * w;  // affine blend keeps trace 1
            }
            f.set(i, j, u);
        }
    }
    // boundary nodes take the exact trace
    for (const auto& [id, ub] : boundary_trace(spec, g)) {
        f.set(id % g.n, id / g.n, ub);
    }
    return f;
}

// ---------------------------------------------------------------------------
namespace {

std::vector<std::uint8_t> ring_dirichlet(const Grid2D& g) {
    std::vector<std::uint8_t> d(g.num_nodes(), 0);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            if (g.is_boundary(i, j)) d[g.idx(i, j)] = 1;
    return d;
}

// Bilinear prolongation from a (m x m) grid to (2m-1 x 2m-1).
Field prolong(const Field& coarse, const Grid2D& fine_grid) {
    const Grid2D& cg = coarse.grid;
    Field f(fine_grid);
    const int m = cg.n;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < 5; ++k)
                f.at(2 * i, 2 * j)[k] = coarse.at(i, j)[k];
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m - 1; ++i)
            for (int k = 0; k < 5; ++k)
                f.at(2 * i + 1, 2 * j)[k] = 0.5 * (coarse.at(i, j)[k] + coarse.at(i + 1, j)[k]);
    for (int j = 0; j < m - 1; ++j)
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < 5; ++k)
                f.at(2 * i, 2 * j + 1)[k] = 0.5 * (coarse.at(i, j)[k] + coarse.at(i, j + 1)[k]);
    for (int j = 0; j < m - 1; ++j)
        for (int i = 0; i < m - 1; ++i)
            for (int k = 0; k < 5; ++k)
                f.at(2 * i + 1, 2 * j + 1)[k] =
                    0.25 * (coarse.at(i, j)[k] + coarse.at(i + 1, j)[k] + coarse.at(i, j + 1)[k] +
                            coarse.at(i + 1, j + 1)[k]);
    return f;
}

// Advance until the stopping rule (relative decrease per check_interval below
// tolerance) fires. Shares the iteration budget across cascade levels.
void converge(FlowState& s, const FlowConfig& cfg, DirichletSpectralSolver* helm,
              long& iterations_left, std::vector<std::array<double, 4>>* series = nullptr) {
    auto record = [&] {
        if (series)
            series->push_back({static_cast<double>(s.iteration), s.energy.dirichlet,
                               s.energy.potential, s.energy.total});
    };
    record();
    double at_check = s.energy.total;
    long since_check = 0;
    while (true) {
        if (iterations_left <= 0) {
            std::ostringstream os;
            os << "run_flow: exceeded max_iterations = " << cfg.max_iterations
               << " (grid n = " << s.field.grid.n << ", eps = " << s.epsilon
               << ", E = " << s.energy.total << ")";
            throw MaxIterations(os.str());
        }
        step(s, cfg, helm);
        --iterations_left;
        if (++since_check >= cfg.check_interval) {
            record();
            double rel = (at_check - s.energy.total) / std::max(std::abs(s.energy.total), 1e-300);
            if (rel < cfg.tolerance) return;
            at_check = s.energy.total;
            since_check = 0;
        }
    }
}

}  // namespace

FlowState run_flow(const Grid2D& g, const BoundarySpec& spec, double eps, double beta,
                   const FlowConfig& cfg, std::vector<std::array<double, 4>>* energy_series) {
    cfg.validate();
    spec.validate();
    if (!(eps > 0)) throw ValidationError("run_flow: eps must be positive");
    if (eps < 2.0 * g.h) {
        std::ostringstream os;
        os << "CoreUnresolved: eps = " << eps << " < 2h = " << 2.0 * g.h
           << "; refine the grid or increase eps";
        throw CoreUnresolved(os.str());
    }
    potential(Sym3::identity() * (1.0 / 3.0), beta);  // validates beta range

    // Grid hierarchy (finest last). Without cascade: just the target grid.
    std::vector<int> sizes{g.n};
    if (cfg.cascade) {
        while ((sizes.back() - 1) % 2 == 0 && (sizes.back() - 1) / 2 + 1 >= cfg.cascade_min_nodes)
            sizes.push_back((sizes.back() - 1) / 2 + 1);
        std::reverse(sizes.begin(), sizes.end());
    }

    FlowState s;
    long iterations_left = cfg.max_iterations;
    for (std::size_t lev = 0; lev < sizes.size(); ++lev) {
        Grid2D lg(sizes[lev], g.ox, g.oy, g.side);
        // coarse levels that cannot resolve the core anneal with eps = 2h
        double eps_level = std::max(eps, 2.0 * lg.h);

        if (lev == 0) {
            s.field = initial_field(lg, spec, eps_level);
        } else {
            Field fine = prolong(s.field, lg);
            for (const auto& [id, ub] : boundary_trace(spec, lg))
                fine.set(id % lg.n, id / lg.n, ub);
            s.field = std::move(fine);
        }
        s.dirichlet = ring_dirichlet(lg);
        s.epsilon = eps_level;
        s.beta = beta;
        s.dt = stable_dt(cfg, lg.h, eps_level, beta);
        s.energy = energy(s);

        std::unique_ptr<DirichletSpectralSolver> helm;
        if (cfg.semi_implicit) helm = std::make_unique<DirichletSpectralSolver>(lg.n - 2, lg.h);
        converge(s, cfg, helm.get(), iterations_left, energy_series);
    }
    return s;
}

// ---------------------------------------------------------------------------
DiscSolveResult solve_disc(double r, double eps, double beta, double cells_per_eps,
                           const FlowConfig& cfg, bool with_equivariant_check) {
    cfg.validate();
    if (!(r > 0) || !(eps > 0)) throw ValidationError("solve_disc: r and eps must be positive");
    if (r / eps < 2.0) {
        std::ostringstream os;
        os << "solve_disc: r/eps = " << r / eps << " < 2; the disc cannot contain a core";
        throw ValidationError(os.str());
    }
    if (cells_per_eps < 2.0) {
        std::ostringstream os;
        os << "CoreUnresolved: cells_per_eps = " << cells_per_eps << " < 2 (eps < 2h)";
        throw CoreUnresolved(os.str());
    }

    const double h = eps / cells_per_eps;
    const int half_cells = static_cast<int>(std::ceil((r + 3.0 * h) / h));
    const int n = 2 * half_cells + 1;  // odd: the disc center is a node
    Grid2D lg(n, -half_cells * h, -half_cells * h, 2.0 * half_cells * h);
    DiscMask mask = disc_mask(lg, 0.0, 0.0, r);

    FlowState s;
    s.field = Field(lg);
    s.epsilon = eps;
    s.beta = beta;
    s.dt = cfg.dt_safety * std::min(h * h / 4.0, eps * eps / (1.0 + beta));
    s.dirichlet.assign(lg.num_nodes(), 1);
    for (int id : mask.interior) s.dirichlet[id] = 0;

    // interior: mollified core; everywhere else: canonical flat ring data
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double x = lg.x(i), y = lg.y(j);
            if (mask.role[lg.idx(i, j)] == 1) {
                double rho = std::hypot(x, y), t = std::atan2(y, x);
                double m = std::tanh(rho / eps);
                double c = std::cos(t), sn = std::sin(t);
                s.field.set(i, j, {0.5 * (1.0 + m * c), 0.5 * (1.0 - m * c), 0.0, 0.5 * m * sn,
                                   0.0, 0.0});
            } else {
                s.field.set(i, j, canonical_flat(x, y, 0.0, 0.0));
            }
        }
    }

    EnergyBreakdown e = energy_masked(s, mask);
    const double inv_h2 = 1.0 / (h * h);
    const double inv_e2 = 1.0 / (eps * eps);
    std::vector<double> next;
    double at_check = e.total;
    long since_check = 0;
    long iters = 0;
    double gw[5];
    while (true) {
        if (iters >= cfg.max_iterations) {
            std::ostringstream os;
            os << "solve_disc: exceeded max_iterations = " << cfg.max_iterations
               << " (r/eps = " << r / eps << ", E = " << e.total << ")";
            throw MaxIterations(os.str());
        }
        next = s.field.data;
        const double* q = s.field.data.data();
        for (int id : mask.interior) {
            const double* c = q + 5ull * id;
            grad_w_coords(c, beta, gw);
            double* o = next.data() + 5ull * id;
            for (int k = 0; k < 5; ++k) {
                double lap = (c[-5 + k] + c[5 + k] + c[-5ll * n + k] + c[5ll * n + k] - 4.0 * c[k]) *
                             inv_h2;
                o[k] = c[k] + s.dt * (lap - inv_e2 * gw[k]);
            }
        }
        s.field.data.swap(next);
        ++iters;
        EnergyBreakdown after = energy_masked(s, mask);
        double slack = 1e-12 + 1e-12 * std::abs(e.total);
        if (after.total > e.total + slack) {
            std::ostringstream os;
            os << "EnergyIncrease in solve_disc at iteration " << iters << ": E " << e.total
               << " -> " << after.total;
            throw EnergyIncrease(os.str());
        }
        e = after;
        if (++since_check >= cfg.check_interval) {
            double rel = (at_check - e.total) / std::max(std::abs(e.total), 1e-300);
            if (rel < cfg.tolerance) break;
            at_check = e.total;
            since_check = 0;
        }
    }

    DiscSolveResult res;
    res.energy = e;
    res.iterations = iters;
    res.local_nodes = n;
    if (with_equivariant_check) res.equivariant_energy = equivariant_disc_energy(r, eps);
    return res;
}

// ---------------------------------------------------------------------------
double equivariant_disc_energy(double r, double eps, int nodes) {
    if (nodes < 64) throw ValidationError("equivariant_disc_energy: too few nodes");
    const int K = nodes;
    const double hr = r / (K - 1);
    const double inv_e2 = 1.0 / (eps * eps);

    std::vector<double> f(K), fn(K);
    for (int k = 0; k < K; ++k) f[k] = std::tanh(k * hr / eps);
    f[0] = 0.0;
    f[K - 1] = 1.0;

    auto energy1d = [&](const std::vector<double>& ff) {
        double acc = 0.0;
        for (int k = 0; k + 1 < K; ++k) {
            double d = (ff[k + 1] - ff[k]) / hr;
            acc += 0.25 * d * d * (k + 0.5) * hr * hr;
        }
        for (int k = 1; k < K; ++k) {
            double w = (k == K - 1) ? 0.5 : 1.0;
            double rho = k * hr;
            double s = 1.0 - ff[k] * ff[k];
            acc += w * (0.25 * ff[k] * ff[k] / (rho * rho) + s * s * inv_e2 / 16.0) * rho * hr;
        }
        return 2.0 * std::numbers::pi * acc;
    };

    // Semi-implicit radial flow: tridiagonal (I - dt A) with
    // A f = 1/4 (f'' + f'/rho - f/rho^2); explicit reaction f(1-f^2)/(4 eps^2).
    const double dt = 0.5 * eps * eps;
    std::vector<double> du(K), dd(K), dl(K), rhs(K);
    double prev = energy1d(f);
    for (long it = 0; it < 2'000'000; ++it) {
        for (int k = 1; k + 1 < K; ++k) {
            double rho = k * hr;
            double c2 = 0.25 / (hr * hr), c1 = 0.25 / (2.0 * hr * rho), c0 = -0.25 / (rho * rho);
            dl[k] = -dt * (c2 - c1);
            dd[k] = 1.0 - dt * (-2.0 * c2 + c0);
            du[k] = -dt * (c2 + c1);
            rhs[k] = f[k] + dt * 0.25 * inv_e2 * f[k] * (1.0 - f[k] * f[k]);
        }
        rhs[1] -= dl[1] * f[0];
        rhs[K - 2] -= du[K - 2] * f[K - 1];
        // Thomas solve on k = 1..K-2
        for (int k = 2; k + 1 < K; ++k) {
            double m = dl[k] / dd[k - 1];
            dd[k] -= m * du[k - 1];
            rhs[k] -= m * rhs[k - 1];
        }
        fn = f;
        fn[K - 2] = rhs[K - 2] / dd[K - 2];
        for (int k = K - 3; k >= 1; --k) fn[k] = (rhs[k] - du[k] * fn[k + 1]) / dd[k];
        f.swap(fn);
        if ((it + 1) % 200 == 0) {
            double cur = energy1d(f);
            if (std::abs(prev - cur) < 1e-12 * std::max(1.0, std::abs(cur))) return cur;
            prev = cur;
        }
    }
    return energy1d(f);
}

}  // namespace ldg
