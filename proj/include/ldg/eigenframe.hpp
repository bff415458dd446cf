#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ldg/field.hpp"
#include "ldg/grid.hpp"
#include "ldg/sym3.hpp"

namespace ldg {

// Per-node spectral data of a trace-1 symmetric field. Eigenvalues are sorted
// descending; eigenvectors are sign-aligned along grid rows (and row starts
// against the row below) so director plots are smooth away from branch cuts.
// A half-integer winding makes a global smooth alignment impossible: the flip
// masks record where the row walk had to negate a vector, so the branch cut
// shows up as a flagged curve instead of a failure.
struct EigenframeField {
    Grid2D grid;
    std::vector<std::array<double, 3>> lam;  // descending per node
    std::vector<Vec3> e1, e2, e3;
    std::vector<std::uint8_t> flip1, flip2, flip3;  // 1 = sign negated vs. walk neighbor

    [[nodiscard]] std::size_t idx(int i, int j) const { return static_cast<std::size_t>(grid.idx(i, j)); }
};

EigenframeField eigenframe(const Field& f);

// Walks a circle around (ax, ay) tracking eigenvector sign continuity.
// *_half reports whether the vector returns negated after a full loop
// (half-integer winding). min_gap12/min_gap23 are the smallest eigenvalue
// separations met on the circle; tiny gaps mean the winding answer is
// unreliable because the frame itself is ill-defined there.
struct WindingCheck {
    bool e1_half = false;
    bool e3_half = false;
    double min_gap12 = 0.0;
    double min_gap23 = 0.0;
};

WindingCheck eigen_winding_on_circle(const Field& f, double ax, double ay, double r, int m = 512);

struct DefectInfo {
    double x = 0.0, y = 0.0;          // sub-grid estimate of the defect location
    double gap = 0.0;                 // interpolated lambda1 - lambda2 at that point
    std::array<double, 3> lam{};      // eigenvalue triple at the refined location
};

// Argmin of the eigenvalue gap lambda1 - lambda2, refined by a quadratic fit
// over the 3x3 node neighborhood. Throws NoDefect if the gap never drops
// below 0.2 and MultipleDefects if the sub-0.2 region splits into more than
// one connected cluster.
DefectInfo locate_defect(const EigenframeField& ef);

}  // namespace ldg
