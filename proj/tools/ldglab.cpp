// ldglab — batch front-end for the trace-1 line-field laboratory.
//
// Verbs:
//   run       minimize the energy for one configuration, write a checkpoint
//   analyze   derive every diagnostic field/profile/report from a checkpoint
//   sweep     repeat runs over an epsilon list, or diagnostics over a radius
//             list, and aggregate the quantities the limit theory predicts
//   selftest  run the randomized property suites of the algebra/domain layer
//
// Exit codes: 0 success, 1 runtime/solver failure, 2 usage or validation.
// Every artifact is listed (with FNV-1a checksum) in a manifest.json written
// last, so the manifest's presence certifies a complete artifact set.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ldg/config.hpp"
#include "ldg/current.hpp"
#include "ldg/eigenframe.hpp"
#include "ldg/errors.hpp"
#include "ldg/expansion.hpp"
#include "ldg/field.hpp"
#include "ldg/flow.hpp"
#include "ldg/green.hpp"
#include "ldg/grid.hpp"
#include "ldg/potentials.hpp"
#include "ldg/profiles.hpp"
#include "ldg/selfcheck.hpp"
#include "ldg/sym3.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace ldg;

namespace {

struct WallTimer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// ---------------------------------------------------------------------------
// Config assembly: optional file, then explicit flag overrides.
struct Overrides {
    std::optional<int> n;
    std::optional<double> epsilon, beta;
    std::optional<double> delta1, delta2, phase1, phase2;
    std::optional<double> expansion_r;
    std::optional<bool> semi_implicit, cascade;
    std::optional<double> tolerance;
    std::optional<long> max_iterations;
    std::optional<std::string> outdir;

    void apply(RunConfig& c) const {
        if (n) c.n = *n;
        if (epsilon) c.epsilon = *epsilon;
        if (beta) c.beta = *beta;
        if (delta1) c.boundary.delta1 = *delta1;
        if (delta2) c.boundary.delta2 = *delta2;
        if (phase1) c.boundary.phase1 = *phase1;
        if (phase2) c.boundary.phase2 = *phase2;
        if (expansion_r) c.expansion_r = *expansion_r;
        if (semi_implicit) c.flow.semi_implicit = *semi_implicit;
        if (cascade) c.flow.cascade = *cascade;
        if (tolerance) c.flow.tolerance = *tolerance;
        if (max_iterations) c.flow.max_iterations = *max_iterations;
        if (outdir) c.outdir = *outdir;
    }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("-n,--nodes", ov.n, "grid nodes per side (default 513)");
    cmd->add_option("--epsilon", ov.epsilon, "coherence length epsilon (default 0.01)");
    cmd->add_option("--beta", ov.beta, "potential parameter beta in [1,3) (default 2)");
    cmd->add_option("--delta1", ov.delta1, "boundary phase modulation amplitude (default 0.3)");
    cmd->add_option("--delta2", ov.delta2, "boundary latitude amplitude, |delta2| < pi/4 (default 0.2)");
    cmd->add_option("--phase1", ov.phase1, "boundary phase offset 1 (default 0)");
    cmd->add_option("--phase2", ov.phase2, "boundary phase offset 2 (default 0)");
    cmd->add_option("--expansion-r", ov.expansion_r, "annulus radius for the energy expansion (default 0.1)");
    cmd->add_option("--semi-implicit", ov.semi_implicit,
                    "use the spectral semi-implicit stepper (default from config)");
    cmd->add_option("--cascade", ov.cascade, "coarse-to-fine continuation (default from config)");
    cmd->add_option("--tolerance", ov.tolerance, "relative energy-decrease stopping tolerance");
    cmd->add_option("--max-iterations", ov.max_iterations, "iteration budget for the flow");
    cmd->add_option("-o,--out", ov.outdir, "output directory (default from config: ./out)");
}

RunConfig assemble_config(const std::string& config_path, const Overrides& ov) {
    RunConfig c;
    if (!config_path.empty()) c = load_config_file(config_path);
    ov.apply(c);
    return c;
}

fs::path prep_outdir(const std::string& outdir) {
    fs::path p(outdir);
    fs::create_directories(p);
    return p;
}

// Recursively list every regular file under `root` (sorted, deterministic),
// excluding the manifest itself, and record it in the manifest.
void inventory_directory(RunManifest& man, const fs::path& root) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) man.add_file(root, f);
}

void finish_manifest(RunManifest& man, const fs::path& outdir, const WallTimer& timer) {
    man.wall_seconds = timer.seconds();
    inventory_directory(man, outdir);
    man.write(outdir / "manifest.json");  // written last: certifies completeness
}

// Dirichlet mask for the outer ring of a grid (checkpoints store only the
// field; the boundary set of the square is implicit).
std::vector<std::uint8_t> ring_mask(const Grid2D& g) {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(g.n) * g.n, 0);
    for (int i = 0; i < g.n; ++i) {
        m[g.idx(i, 0)] = m[g.idx(i, g.n - 1)] = 1;
        m[g.idx(0, i)] = m[g.idx(g.n - 1, i)] = 1;
    }
    return m;
}

FlowState state_from_field(Field f, double eps, double beta) {
    FlowState s;
    s.dirichlet = ring_mask(f.grid);
    s.field = std::move(f);
    s.epsilon = eps;
    s.beta = beta;
    s.energy = energy(s);
    return s;
}

void write_energy_series(const fs::path& path, const std::vector<std::array<double, 4>>& series) {
    std::vector<std::vector<double>> cols(4);
    for (const auto& row : series)
        for (int c = 0; c < 4; ++c) cols[c].push_back(row[c]);
    write_columns_csv(path.string(), {"iteration", "dirichlet", "potential", "total"}, cols);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

// ---------------------------------------------------------------------------
// Plot scripts: plain gnuplot text referencing the CSVs by relative name.
// CSV + script keeps every figure renderer-agnostic and diff-able.
void emit_plot_scripts(const fs::path& out) {
    write_text(out / "plot_eigenvalues.gp",
               "# Eigenvalue maps (defect core structure). Render: gnuplot plot_eigenvalues.gp\n"
               "set datafile separator comma\n"
               "set terminal dumb size 120,40\n"
               "set view map\nset size square\n"
               "do for [f in \"lambda1 lambda2 lambda3\"] {\n"
               "  set title f\n"
               "  plot f.'.csv' every ::1 using 1:2:3 with points pt 5 ps 0.3 palette notitle\n"
               "}\n");
    write_text(out / "plot_hopf.gp",
               "# Pole diagnostics: |z - a| |mu| should be flat near 1/4; 1/|mu| linear in r.\n"
               "set datafile separator comma\nset terminal dumb size 120,30\n"
               "set title '|z-a| |mu| circle averages'\n"
               "plot 'zmu_circle.csv' every ::1 using 1:2 with linespoints notitle, 0.25 with lines notitle\n"
               "set title '1/|mu| circle averages (expect slope 4)'\n"
               "plot 'inv_mu_circle.csv' every ::1 using 1:2 with linespoints notitle\n");
    write_text(out / "plot_profiles.gp",
               "# Radial diagnostics of the limit theory.\n"
               "set datafile separator comma\nset terminal dumb size 120,30\nset logscale x\n"
               "set title 'image-curve length vs sqrt(2) pi'\n"
               "plot 'length_gamma.csv' every ::1 using 1:2 with linespoints notitle, 4.442883 with lines notitle\n"
               "set title 'decay diagnostics'\n"
               "plot 'decay_latitude.csv' every ::1 using 1:2 with linespoints title 'latitude', \\\n"
               "     'decay_comm_p3.csv' every ::1 using 1:2 with linespoints title '[u,P3]', \\\n"
               "     'decay_comm_flat.csv' every ::1 using 1:2 with linespoints title '[Lambda,[u,u0]]', \\\n"
               "     'alpha1_deviation.csv' every ::1 using 1:2 with linespoints title 'alpha1 dev', \\\n"
               "     'psi_decay.csv' every ::1 using 1:2 with linespoints title 'r sup|grad phi|'\n");
    write_text(out / "plot_quiver.gp",
               "# Leading eigenvector quiver (in-plane projection; color = |third component|).\n"
               "set datafile separator comma\nset terminal dumb size 120,40\nset size square\n"
               "sc = 0.02\n"
               "plot 'quiver.csv' every ::1 using ($1-sc*$3):($2-sc*$4):(2*sc*$3):(2*sc*$4) "
               "with vectors nohead notitle\n");
}

// ---------------------------------------------------------------------------
// The analyze pipeline (shared by cmd_analyze and the acceptance-style
// summaries): emits every diagnostic artifact next to the checkpoint.
struct AnalyzeResult {
    DefectInfo defect;
    double lambda3_max = 0.0;
    WindingCheck winding;
    ExpansionReport report;
};

AnalyzeResult analyze_to_dir(const FlowState& state, const RunConfig& cfg, const fs::path& out,
                             bool green_form) {
    const Field& f = state.field;
    const Grid2D& g = f.grid;
    AnalyzeResult res;

    // Eigenstructure: fields, defect, winding, quiver.
    EigenframeField ef = eigenframe(f);
    const std::size_t nn = static_cast<std::size_t>(g.n) * g.n;
    std::vector<double> l1(nn), l2(nn), l3(nn);
    double l3max = 0.0;
    for (std::size_t k = 0; k < nn; ++k) {
        l1[k] = ef.lam[k][0];
        l2[k] = ef.lam[k][1];
        l3[k] = ef.lam[k][2];
        l3max = std::max(l3max, std::abs(ef.lam[k][2]));
    }
    res.lambda3_max = l3max;
    write_field_csv((out / "lambda1.csv").string(), g, l1, "lambda1");
    write_field_csv((out / "lambda2.csv").string(), g, l2, "lambda2");
    write_field_csv((out / "lambda3.csv").string(), g, l3, "lambda3");

    res.defect = locate_defect(ef);
    const double ax = res.defect.x, ay = res.defect.y;

    const double wind_r =
        std::min({cfg.expansion_r, ax - g.ox, g.ox + g.side - ax, ay - g.oy, g.oy + g.side - ay});
    res.winding = eigen_winding_on_circle(f, ax, ay, 0.9 * wind_r);

    {
        // Quiver of e1 and e3 on a coarse sublattice (plot-sized artifact).
        const int stride = std::max(1, (g.n - 1) / 32);
        std::vector<std::vector<double>> cols(8);
        for (int j = 0; j < g.n; j += stride)
            for (int i = 0; i < g.n; i += stride) {
                const std::size_t k = ef.idx(i, j);
                const Vec3 e1 = ef.e1[k], e3 = ef.e3[k];
                const double row[8] = {g.x(i), g.y(j), e1.x, e1.y, e1.z, e3.x, e3.y, e3.z};
                for (int c = 0; c < 8; ++c) cols[c].push_back(row[c]);
            }
        write_columns_csv((out / "quiver.csv").string(),
                          {"x", "y", "e1x", "e1y", "e1z", "e3x", "e3y", "e3z"}, cols);
    }

    // Current, Hopf differential, area-factor angle.
    CurrentField jf = current_vector(f);
    HopfField hf = hopf_differential(f, ax, ay, state.epsilon);
    {
        std::vector<double> zmu(nn), inv_mu(nn);
        std::vector<std::uint8_t> inv_valid = hf.valid;
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                const std::size_t k = g.idx(i, j);
                const double rho = std::hypot(g.x(i) - ax, g.y(j) - ay);
                const double mu = mu_magnitude(hf.omega[k]);
                zmu[k] = rho * mu;
                if (mu > 1e-12)
                    inv_mu[k] = 1.0 / mu;
                else
                    inv_valid[k] = 0;
            }
        write_field_csv((out / "zmu_abs.csv").string(), g, zmu, "abs_zmu", &hf.valid);
        write_field_csv((out / "inv_mu.csv").string(), g, inv_mu, "inv_mu", &inv_valid);
    }
    GField gf = extract_g(jf, hf);
    write_field_csv((out / "gfield.csv").string(), g, gf.g, "g", &gf.valid);

    // Circle diagnostics on the analysis ladder.
    const std::vector<double> radii = cfg.radii();
    HopfCircleStats stats = hopf_circle_stats(hf, ax, ay, radii);
    write_profile_csv((out / "zmu_circle.csv").string(), stats.r, stats.zmu_abs, "mean_abs_zmu");
    write_profile_csv((out / "inv_mu_circle.csv").string(), stats.r, stats.inv_mu, "mean_inv_mu");
    write_columns_csv((out / "zsq_omega_circle.csv").string(), {"r", "re", "im"},
                      {stats.r, stats.zsq_re, stats.zsq_im});

    GeodesicProfiles geo = geodesic_length_profile(f, ax, ay, radii);
    write_profile_csv((out / "length_gamma.csv").string(), geo.length.r, geo.length.value,
                      "length");
    write_profile_csv((out / "geodesic_fit.csv").string(), geo.geodesic_fit.r,
                      geo.geodesic_fit.value, "mean_distance");

    LambdaExtraction lam = extract_lambda(jf, ax, ay, std::min(0.1, radii.back()));
    DecayProfiles dec = radial_decay_diagnostics(f, ax, ay, radii, lam.lambda, lam.p3);
    write_profile_csv((out / "decay_latitude.csv").string(), dec.latitude.r, dec.latitude.value,
                      "sup_latitude");
    write_profile_csv((out / "decay_comm_p3.csv").string(), dec.comm_p3.r, dec.comm_p3.value,
                      "sup_comm_p3");
    write_profile_csv((out / "decay_comm_flat.csv").string(), dec.comm_flat.r, dec.comm_flat.value,
                      "sup_comm_flat");

    LiftAngles lift = lift_angles(f, ax, ay, radii, lam.p3);
    write_profile_csv((out / "alpha1_deviation.csv").string(), lift.alpha1_deviation.r,
                      lift.alpha1_deviation.value, "mean_abs_dev");

    // Energy expansion report (includes the potential recovery / psi decay).
    ExpansionOptions opt;
    opt.r = cfg.expansion_r;
    opt.green_form = green_form;
    opt.disc_flow = cfg.flow;
    opt.disc_flow.semi_implicit = false;  // disc grids are small; masked stencil
    opt.disc_flow.cascade = false;
    res.report = energy_expansion_report(state, opt);
    write_text(out / "expansion.json", res.report.to_json() + "\n");

    if (green_form) {
        GreenFunction green = green_function(g, ax, ay);
        Potentials pots = recover_potentials(jf, ax, ay, lam.lambda, green, radii, state.epsilon);
        write_profile_csv((out / "psi_decay.csv").string(), pots.psi_decay.r,
                          pots.psi_decay.value, "r_sup_grad_phi");
        std::vector<double> phim(nn);
        for (std::size_t k = 0; k < nn; ++k) phim[k] = norm(pots.phi1[k]);
        write_field_csv((out / "phi1_norm.csv").string(), g, phim, "abs_phi1");
    } else {
        // Keep the artifact set stable across modes: the profile trivially
        // derived from the stream potential is the only Green-dependent CSV.
        write_profile_csv((out / "psi_decay.csv").string(), {}, {}, "r_sup_grad_phi");
    }

    // Summary of the scalar diagnostics (everything a reader would grep for).
    ordered_json js;
    js["tool"] = kToolVersion;
    js["defect"] = {{"x", ax},
                    {"y", ay},
                    {"gap", res.defect.gap},
                    {"eigenvalues", {res.defect.lam[0], res.defect.lam[1], res.defect.lam[2]}}};
    js["lambda3_max"] = res.lambda3_max;
    js["winding"] = {{"e1_half", res.winding.e1_half},
                     {"e3_half", res.winding.e3_half},
                     {"min_gap12", res.winding.min_gap12},
                     {"min_gap23", res.winding.min_gap23}};
    js["alpha_star"] = lift.alpha_star;
    js["lambda_raw_norm"] = lam.raw_norm;
    js["mean_abs_zmu"] = stats.zmu_abs;
    js["energy"] = {{"dirichlet", state.energy.dirichlet},
                    {"potential", state.energy.potential},
                    {"total", state.energy.total}};
    write_text(out / "analysis_summary.json", js.dump(2) + "\n");

    emit_plot_scripts(out);
    return res;
}

// ---------------------------------------------------------------------------
// run: minimize, checkpoint, energy series, manifest.
FlowState run_to_dir(const RunConfig& cfg, const fs::path& out, bool quiet = false) {
    Grid2D g(cfg.n, 0.0, 0.0, 1.0);
    std::vector<std::array<double, 4>> series;
    FlowState s = run_flow(g, cfg.boundary, cfg.epsilon, cfg.beta, cfg.flow, &series);

    CheckpointMeta meta;
    meta.epsilon = cfg.epsilon;  // finest-level value (cascade anneals internally)
    meta.beta = cfg.beta;
    meta.iteration = s.iteration;
    meta.energy_dirichlet = s.energy.dirichlet;
    meta.energy_potential = s.energy.potential;
    meta.energy_total = s.energy.total;
    s.epsilon = cfg.epsilon;
    write_checkpoint((out / "checkpoint.bin").string(), s.field, meta);
    write_energy_series(out / "energy_series.csv", series);
    write_text(out / "config.json", emit_config_json(cfg));

    if (!quiet) {
        std::cout << "converged: n = " << cfg.n << ", eps = " << cfg.epsilon
                  << ", iterations = " << s.iteration << ", E = " << s.energy.total
                  << " (dirichlet " << s.energy.dirichlet << ", potential " << s.energy.potential
                  << ")\n"
                  << "descent residual max-norm: " << descent_residual_norm(s) << "\n";
    }
    return s;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
    WallTimer timer;
    RunConfig cfg = assemble_config(config_path, ov);
    cfg.validate();
    fs::path out = prep_outdir(cfg.outdir);

    run_to_dir(cfg, out);

    RunManifest man;
    man.command = "run";
    man.config_json = emit_config_json(cfg);
    finish_manifest(man, out, timer);
    std::cout << "artifacts in " << out.string() << " (manifest.json)\n";
    return 0;
}

// analyze: checkpoint (or synthetic flat field) -> every diagnostic artifact.
int cmd_analyze(const std::string& checkpoint, const std::string& synthetic,
                const std::string& config_path, const Overrides& ov, bool no_green) {
    WallTimer timer;
    RunConfig cfg = assemble_config(config_path, ov);

    FlowState state;
    if (!synthetic.empty()) {
        if (synthetic != "flat")
            throw ValidationError("unknown synthetic field \"" + synthetic + "\" (supported: flat)");
        if (!checkpoint.empty())
            throw ValidationError("give either a checkpoint or --synthetic, not both");
        cfg.validate();
        Grid2D g(cfg.n, 0.0, 0.0, 1.0);
        Field f(g);
        const double ax = g.ox + 0.5 * g.side, ay = g.oy + 0.5 * g.side;
        // Mollified flat core: u = D/2 + tanh(rho/eps) (u0 - D/2). The tanh
        // factor closes the eigenvalue gap at the center (so the defect
        // locator applies) and perturbs |z mu| by under 1% outside 3 eps:
        // |z mu| = (1/4) sqrt(f^2 - rho^2 f'^2) = 0.2486 at rho = 3 eps.
        const Sym3 half_d = Sym3::diag(0.5, 0.5, 0.0);
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                const double rho = std::hypot(g.x(i) - ax, g.y(j) - ay);
                if (rho == 0.0) {
                    f.set(i, j, half_d);  // tanh(0) = 0; the flat map is undefined here
                    continue;
                }
                const Sym3 u0 = canonical_flat(g.x(i), g.y(j), ax, ay);
                f.set(i, j, half_d + (u0 - half_d) * std::tanh(rho / cfg.epsilon));
            }
        state = state_from_field(std::move(f), cfg.epsilon, cfg.beta);
        fs::path out = prep_outdir(cfg.outdir);
        CheckpointMeta meta;
        meta.epsilon = cfg.epsilon;
        meta.beta = cfg.beta;
        meta.energy_dirichlet = state.energy.dirichlet;
        meta.energy_potential = state.energy.potential;
        meta.energy_total = state.energy.total;
        write_checkpoint((out / "checkpoint.bin").string(), state.field, meta);
    } else {
        if (checkpoint.empty())
            throw ValidationError("missing checkpoint path (or --synthetic flat)");
        CheckpointMeta meta;
        Field f = read_checkpoint(checkpoint, &meta);
        if (meta.epsilon > 0) cfg.epsilon = meta.epsilon;  // the run's values win
        if (meta.beta > 0) cfg.beta = meta.beta;
        cfg.n = f.grid.n;
        cfg.validate();
        state = state_from_field(std::move(f), cfg.epsilon, cfg.beta);
    }

    fs::path out = prep_outdir(cfg.outdir);
    AnalyzeResult res = analyze_to_dir(state, cfg, out, !no_green);

    std::cout << "defect at (" << res.defect.x << ", " << res.defect.y << "), eigenvalues ("
              << res.defect.lam[0] << ", " << res.defect.lam[1] << ", " << res.defect.lam[2]
              << ")\n"
              << "lambda3 max over the grid: " << res.lambda3_max << "\n"
              << "windings: e1 half = " << (res.winding.e1_half ? "yes" : "no")
              << ", e3 half = " << (res.winding.e3_half ? "yes" : "no") << "\n"
              << "expansion residual (kappa = 2): " << res.report.residual_k2
              << ", fitted kappa: " << res.report.kappa_fit << "\n";

    RunManifest man;
    man.command = "analyze";
    man.config_json = emit_config_json(cfg);
    finish_manifest(man, out, timer);
    std::cout << "artifacts in " << out.string() << " (manifest.json)\n";
    return 0;
}

// sweep over epsilon: fresh run per point; aggregate the eps-limit columns.
int sweep_epsilon(RunConfig cfg, std::vector<double> eps_list, const fs::path& out,
                  RunManifest& man) {
    // Matched resolution for the disc solves: one cells-per-eps for the whole
    // sweep (the smallest point's grid resolution), so I(r, eps) differences
    // are free of discretization drift between points.
    const double cpe_all =
        *std::min_element(eps_list.begin(), eps_list.end()) * (cfg.n - 1);

    std::vector<std::vector<double>> cols(5);
    for (double eps : eps_list) {
        std::ostringstream tag;
        tag << "eps_" << eps;
        fs::path sub = out / tag.str();
        try {
            RunConfig c = cfg;
            c.epsilon = eps;
            c.outdir = sub.string();
            c.validate();
            fs::create_directories(sub);
            FlowState s = run_to_dir(c, sub, /*quiet=*/true);

            DiscSolveResult disc =
                solve_disc(c.expansion_r, eps, c.beta, cpe_all, c.flow);

            // sup over Omega minus the 0.1-ball of (1 - |u|^2) / eps^2: the
            // quantity whose eps-uniform boundedness the limit theory needs.
            EigenframeField ef = eigenframe(s.field);
            DefectInfo d = locate_defect(ef);
            double sup = 0.0;
            const Grid2D& g = s.field.grid;
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i) {
                    if (std::hypot(g.x(i) - d.x, g.y(j) - d.y) <= 0.1) continue;
                    const Sym3 u = s.field.value(i, j);
                    sup = std::max(sup, (1.0 - inner(u, u)) / (eps * eps));
                }

            const double row[5] = {eps, s.energy.total, disc.energy.total, sup,
                                   static_cast<double>(s.iteration)};
            for (int c2 = 0; c2 < 5; ++c2) cols[c2].push_back(row[c2]);
            std::cout << "eps = " << eps << ": E = " << s.energy.total
                      << ", I(r,eps) = " << disc.energy.total << ", sup excess = " << sup << "\n";
        } catch (const Error& e) {
            man.notes.push_back(tag.str() + " failed: " + e.what());
            std::cerr << "sweep point " << tag.str() << " failed: " << e.what() << "\n";
        }
    }
    if (cols[0].empty()) throw Error("sweep: every point failed");
    write_columns_csv((out / "sweep_eps.csv").string(),
                      {"eps", "energy_total", "I_r_eps", "sup_excess", "iterations"}, cols);
    return 0;
}

// sweep over r: one run, expansion/diagnostics per annulus radius.
int sweep_radius(RunConfig cfg, std::vector<double> r_list, const fs::path& out,
                 RunManifest& man) {
    cfg.validate();
    fs::path sub = out / "base_run";
    fs::create_directories(sub);
    RunConfig c = cfg;
    c.outdir = sub.string();
    FlowState s = run_to_dir(c, sub, /*quiet=*/true);

    EigenframeField ef = eigenframe(s.field);
    DefectInfo d = locate_defect(ef);
    CurrentField jf = current_vector(s.field);
    LambdaExtraction lam = extract_lambda(jf, d.x, d.y, std::min(0.1, r_list.back()));

    std::vector<std::vector<double>> cols(11);
    for (double r : r_list) {
        std::ostringstream tag;
        tag << "r_" << r;
        try {
            ExpansionOptions opt;
            opt.r = r;
            opt.green_form = false;  // the kappa residuals don't need the Green form
            opt.disc_flow = cfg.flow;
            opt.disc_flow.semi_implicit = false;
            opt.disc_flow.cascade = false;
            ExpansionReport rep = energy_expansion_report(s, opt);

            GeodesicProfiles geo = geodesic_length_profile(s.field, d.x, d.y, {r});
            DecayProfiles dec = radial_decay_diagnostics(s.field, d.x, d.y, {r}, lam.lambda, lam.p3);

            const double row[11] = {r,
                                    rep.energy_total,
                                    rep.core_energy,
                                    rep.residual_k2,
                                    rep.residual_k4,
                                    rep.kappa_fit,
                                    geo.length.value[0],
                                    geo.geodesic_fit.value[0],
                                    dec.latitude.value[0],
                                    dec.comm_p3.value[0],
                                    dec.comm_flat.value[0]};
            for (int c2 = 0; c2 < 11; ++c2) cols[c2].push_back(row[c2]);
            std::cout << "r = " << r << ": I = " << rep.core_energy
                      << ", residual(k=2) = " << rep.residual_k2
                      << ", length = " << geo.length.value[0] << "\n";
        } catch (const Error& e) {
            man.notes.push_back(tag.str() + " failed: " + e.what());
            std::cerr << "sweep point " << tag.str() << " failed: " << e.what() << "\n";
        }
    }
    if (cols[0].empty()) throw Error("sweep: every point failed");
    write_columns_csv((out / "sweep_r.csv").string(),
                      {"r", "energy_total", "I_r_eps", "residual_k2", "residual_k4", "kappa_fit",
                       "length_gamma", "geodesic_fit", "latitude", "comm_p3", "comm_flat"},
                      cols);
    return 0;
}

int cmd_sweep(const std::string& config_path, const Overrides& ov, std::vector<double> eps_list,
              std::vector<double> r_list) {
    WallTimer timer;
    RunConfig cfg = assemble_config(config_path, ov);
    if (eps_list.empty() == r_list.empty())
        throw ValidationError("sweep needs exactly one nonempty list: --epsilon-list or --r-list");
    for (double v : eps_list)
        if (!(v > 0)) throw ValidationError("--epsilon-list entries must be positive");
    for (double v : r_list)
        if (!(v > 0)) throw ValidationError("--r-list entries must be positive");

    fs::path out = prep_outdir(cfg.outdir);
    RunManifest man;
    man.command = "sweep";
    man.config_json = emit_config_json(cfg);

    if (!eps_list.empty())
        sweep_epsilon(cfg, eps_list, out, man);
    else
        sweep_radius(cfg, r_list, out, man);

    finish_manifest(man, out, timer);
    std::cout << "artifacts in " << out.string() << " (manifest.json";
    std::cout << (man.notes.empty() ? "" : "; some points failed, see notes") << ")\n";
    return 0;
}

int cmd_selftest(std::uint64_t seed) {
    SelfCheckResult r = run_selfcheck(seed, std::cout);
    std::cout << "selftest: " << r.checks << " checks, " << r.failures << " failures\n";
    return r.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolVersion) +
                 " — gradient-flow laboratory for trace-1 line fields with a degree-1/2 defect"};
    app.require_subcommand(1);

    std::string config_path, checkpoint, synthetic;
    Overrides ov_run, ov_analyze, ov_sweep;
    std::vector<double> eps_list, r_list;
    bool no_green = false;
    std::uint64_t seed = 20260814ULL;

    CLI::App* run = app.add_subcommand("run", "minimize the energy and write a checkpoint");
    run->add_option("-c,--config", config_path, "JSON run configuration (unknown keys rejected)");
    add_override_flags(run, ov_run);

    CLI::App* analyze =
        app.add_subcommand("analyze", "derive all diagnostic fields/profiles from a checkpoint");
    analyze->add_option("checkpoint", checkpoint, "checkpoint file from `run`");
    analyze->add_option("-c,--config", config_path, "JSON run configuration (radii, expansion r)");
    analyze->add_option("--synthetic", synthetic,
                        "analyze a generated field instead of a checkpoint (supported: flat)");
    analyze->add_flag("--no-green", no_green,
                      "skip the Green-function form (faster; omits Robin/potential artifacts)");
    add_override_flags(analyze, ov_analyze);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "run over an epsilon list, or per-radius diagnostics over an r list");
    sweep->add_option("-c,--config", config_path, "JSON template configuration");
    sweep->add_option("--epsilon-list", eps_list, "epsilon values, one run each")
        ->delimiter(',');
    sweep->add_option("--r-list", r_list, "annulus radii (single run, per-r diagnostics)")
        ->delimiter(',');
    add_override_flags(sweep, ov_sweep);

    CLI::App* selftest =
        app.add_subcommand("selftest", "randomized property suites of the algebra/domain layer");
    selftest->add_option("--seed", seed, "sampler seed (default 20260814)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // exit 0 with help text
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

    try {
        if (run->parsed()) return cmd_run(config_path, ov_run);
        if (analyze->parsed())
            return cmd_analyze(checkpoint, synthetic, config_path, ov_analyze, no_green);
        if (sweep->parsed()) return cmd_sweep(config_path, ov_sweep, eps_list, r_list);
        if (selftest->parsed()) return cmd_selftest(seed);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
