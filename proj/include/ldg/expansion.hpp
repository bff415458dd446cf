#pragma once

#include <optional>
#include <string>

#include "ldg/flow.hpp"

namespace ldg {

// Options for assembling the energy-expansion report. cells_per_eps controls
// the resolution of the core-energy disc solve; 0 means "match the grid of
// the state" (eps/h), which makes the core term and the measured total
// comparable at the same discretization.
struct ExpansionOptions {
    double r = 0.1;
    double cells_per_eps = 0.0;
    bool green_form = true;
    bool with_equivariant_check = false;
    FlowConfig disc_flow;  // stopping policy for the disc solve
};

// Every term of the two energy expansions at a fixed annulus radius r, for a
// converged state. All integrals over Omega \ B_r use trapezoid weights with
// circle-cut node cells subsampled. Both Green-form area integrals cover the
// same annulus as the energy: inside B_r the curl of the current carries the
// smeared half-degree monopole, whose logarithmic moment against G would
// otherwise pollute the pairing term at O(1).
struct ExpansionReport {
    // Inputs and located defect.
    double r = 0, epsilon = 0, beta = 0;
    double defect_x = 0, defect_y = 0;

    // Measured energy and the core term.
    double energy_total = 0;
    double core_energy = 0;            // I(r, eps) from the disc solve
    long core_iterations = 0;
    double equivariant_core = -1;      // 1D radial cross-check (if requested)

    // Hopf-differential form: E = I + 2*int|w| + kappa*int|w|sinh^2 g + q(r).
    double int2_abs_omega = 0;         // 2 * int_{Omega \ B_r} |omega|
    double int_omega_sinh2 = 0;        // int_{Omega \ B_r} |omega| sinh^2 g
    double residual_k2 = 0;            // E - I - 2int|w| - 2*int|w|sinh^2g
    double residual_k4 = 0;            //     "          - 4*...
    double kappa_fit = 0;              // (E - I - 2int|w|) / int|w|sinh^2g

    // Dirichlet identity on the annulus: int 1/2|grad u|^2 vs the same terms.
    double dirichlet_annulus = 0;
    double dirichlet_res_k2 = 0;
    double dirichlet_res_k4 = 0;
    double dirichlet_kappa_fit = 0;

    // Green-function form. Writing j = grad^perp(pi G w + phi1) and using
    // 1/2|grad u|_F^2 = |j_1|^2 + |j_2|^2 on the vacuum manifold,
    //
    //   E = I(r,eps) + (pi/2) ln(1/r) + pi^2 R(a,a)
    //     - 2 pi int_{Omega \ B_r} G <Lambda, [d1 u, d2 u]>
    //     + 1/2  int_{Omega \ B_r} |grad phi1|_F^2
    //     - 2 pi oint_{rho=r} G d(phi1 . w)/drho dl + o(1),
    //
    // an identity that closes to quadrature accuracy on exact degree-1/2
    // harmonic test maps. green_pairing stores the raw pairing integral
    // (without its -2 pi coefficient); circle_term stores the full oint term.
    bool has_green_form = false;
    double log_term = 0;               // (pi/2) ln(1/r)
    double robin_aa = 0;               // R(a,a)
    double green_pairing = 0;          // int_{Omega \ B_r} G <Lambda, [d1u, d2u]>
    double phi1_grad = 0;              // 1/2 int_{Omega \ B_r} |grad phi1|^2 (Frobenius)
    double circle_term = 0;            // -2 pi oint_{rho=r} G d(phi1.w)/drho dl
    double green_residual = 0;         // E minus all of the above

    // Diagnostics carried along.
    double lambda_raw_norm = 0;
    double closure_rel = 0;
    std::optional<double> sinh_gordon;  // relative PDE residual on the theorem annulus

    std::string to_json() const;  // single JSON object, stable key order
};

ExpansionReport energy_expansion_report(const FlowState& state, const ExpansionOptions& opt);

}  // namespace ldg
