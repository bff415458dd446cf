#pragma once
// The order-parameter field on a grid (5 trace-free coordinates per node),
// circle sampling, checkpoint serialization, and CSV export.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ldg/grid.hpp"
#include "ldg/sym3.hpp"

namespace ldg {

// Trace-1 symmetric field stored as Traceless5 coordinates, array-of-structs:
// data[5*idx + c]. Trace-1 is structural (reconstruct adds I/3).
struct Field {
    Grid2D grid;
    std::vector<double> data;  // size 5 * n * n

    Field() = default;
    explicit Field(const Grid2D& g) : grid(g), data(5ull * g.num_nodes(), 0.0) {}

    double* at(int i, int j) { return data.data() + 5ull * grid.idx(i, j); }
    const double* at(int i, int j) const { return data.data() + 5ull * grid.idx(i, j); }

    Sym3 value(int i, int j) const {
        const double* q = at(i, j);
        return reconstruct(Traceless5{{q[0], q[1], q[2], q[3], q[4]}});
    }
    void set(int i, int j, const Sym3& u) {
        Traceless5 c = coords(u);
        double* q = at(i, j);
        for (int k = 0; k < 5; ++k) q[k] = c.q[k];
    }

    // Bilinear interpolation of the coordinates at a physical point (inside
    // the grid); reconstruction keeps trace exactly 1.
    Sym3 interpolate(double px, double py) const;
};

// ---------------------------------------------------------------------------
// Samples of the field on a circle around a (uniform angles, counterclockwise,
// theta_k = 2 pi k / m).
struct CircleSample {
    double ax = 0, ay = 0, r = 0;
    std::vector<double> theta;
    std::vector<Sym3> values;
};

// Throws CircleOutOfDomain unless the circle stays within the closed grid
// square (touching the boundary is allowed).
CircleSample sample_circle(const Field& f, double ax, double ay, double r, int m);

// ---------------------------------------------------------------------------
// Checkpoint format (versioned):
//   line 1: one JSON object + '\n'; keys: format, version, grid{n,ox,oy,side},
//           epsilon, beta, iteration, energy{dirichlet,potential,total}, layout
//   then:   raw binary, row-major over nodes (j outer, i inner), per node the
//           five independent entries (u11, u22, u12, u13, u23) as IEEE-754
//           little-endian doubles. u33 = 1 - u11 - u22.
struct CheckpointMeta {
    double epsilon = 0;
    double beta = 0;
    long iteration = 0;
    double energy_dirichlet = 0;
    double energy_potential = 0;
    double energy_total = 0;
};

void write_checkpoint(const std::string& path, const Field& f, const CheckpointMeta& meta);
// Throws CheckpointFormatError on bad header/truncation; ValidationError if missing.
Field read_checkpoint(const std::string& path, CheckpointMeta* meta_out = nullptr);

// ---------------------------------------------------------------------------
// CSV writers. Full double precision, header row mandatory.
void write_field_csv(const std::string& path, const Grid2D& g,
                     const std::vector<double>& values, const std::string& value_name,
                     const std::vector<std::uint8_t>* valid_mask = nullptr);
void write_profile_csv(const std::string& path, const std::vector<double>& r,
                       const std::vector<double>& values, const std::string& value_name);
// Multi-column variant for vector-valued per-node data (e.g. director fields).
void write_columns_csv(const std::string& path, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns);

// FNV-1a 64-bit over a file's bytes; the manifest checksum.
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace ldg
