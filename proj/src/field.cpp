#include "ldg/field.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

namespace ldg {

using nlohmann::json;

Sym3 Field::interpolate(double px, double py) const {
    const Grid2D& g = grid;
    double fx = (px - g.ox) / g.h, fy = (py - g.oy) / g.h;
    int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy));
    // clamp so that points on the far edge use the last cell
    if (i < 0) i = 0;
    if (j < 0) j = 0;
    if (i > g.n - 2) i = g.n - 2;
    if (j > g.n - 2) j = g.n - 2;
    double tx = fx - i, ty = fy - j;

    const double* q00 = at(i, j);
    const double* q10 = at(i + 1, j);
    const double* q01 = at(i, j + 1);
    const double* q11 = at(i + 1, j + 1);
    Traceless5 c;
    for (int k = 0; k < 5; ++k) {
        c.q[k] = (1 - tx) * (1 - ty) * q00[k] + tx * (1 - ty) * q10[k] +
                 (1 - tx) * ty * q01[k] + tx * ty * q11[k];
    }
    return reconstruct(c);
}

CircleSample sample_circle(const Field& f, double ax, double ay, double r, int m) {
    const Grid2D& g = f.grid;
    if (r <= 0 || m < 3) throw ValidationError("sample_circle: need r > 0 and m >= 3");
    if (ax - r < g.ox || ax + r > g.ox + g.side || ay - r < g.oy || ay + r > g.oy + g.side) {
        std::ostringstream os;
        os << "sample_circle: circle center (" << ax << "," << ay << ") radius " << r
           << " leaves the grid";
        throw CircleOutOfDomain(os.str());
    }
    CircleSample cs;
    cs.ax = ax;
    cs.ay = ay;
    cs.r = r;
    cs.theta.resize(m);
    cs.values.resize(m);
    for (int k = 0; k < m; ++k) {
        double t = 2.0 * std::numbers::pi * k / m;
        cs.theta[k] = t;
        cs.values[k] = f.interpolate(ax + r * std::cos(t), ay + r * std::sin(t));
    }
    return cs;
}

// ---------------------------------------------------------------------------
void write_checkpoint(const std::string& path, const Field& f, const CheckpointMeta& meta) {
    json header = {
        {"format", "trace1-field"},
        {"version", 1},
        {"grid", {{"n", f.grid.n}, {"ox", f.grid.ox}, {"oy", f.grid.oy}, {"side", f.grid.side}}},
        {"epsilon", meta.epsilon},
        {"beta", meta.beta},
        {"iteration", meta.iteration},
        {"energy",
         {{"dirichlet", meta.energy_dirichlet},
          {"potential", meta.energy_potential},
          {"total", meta.energy_total}}},
        {"layout", "row-major nodes (j outer), per node f64le: u11,u22,u12,u13,u23"},
    };
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("write_checkpoint: cannot open " + path);
    out << header.dump() << '\n';

    const int n = f.grid.n;
    std::vector<double> row(5ull * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Sym3 u = f.value(i, j);
            double* p = row.data() + 5ull * i;
            p[0] = u.xx;
            p[1] = u.yy;
            p[2] = u.xy;
            p[3] = u.xz;
            p[4] = u.yz;
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!out) throw Error("write_checkpoint: short write to " + path);
}

Field read_checkpoint(const std::string& path, CheckpointMeta* meta_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("read_checkpoint: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw CheckpointFormatError("read_checkpoint: empty file " + path);

    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw CheckpointFormatError("read_checkpoint: bad JSON header in " + path + ": " + e.what());
    }
    if (header.value("format", "") != "trace1-field" || header.value("version", 0) != 1) {
        throw CheckpointFormatError("read_checkpoint: unsupported format/version in " + path);
    }

    Grid2D g(header["grid"]["n"].get<int>(), header["grid"]["ox"].get<double>(),
             header["grid"]["oy"].get<double>(), header["grid"]["side"].get<double>());
    Field f(g);
    if (meta_out) {
        meta_out->epsilon = header.value("epsilon", 0.0);
        meta_out->beta = header.value("beta", 0.0);
        meta_out->iteration = header.value("iteration", 0l);
        meta_out->energy_dirichlet = header["energy"].value("dirichlet", 0.0);
        meta_out->energy_potential = header["energy"].value("potential", 0.0);
        meta_out->energy_total = header["energy"].value("total", 0.0);
    }

    const int n = g.n;
    std::vector<double> row(5ull * n);
    for (int j = 0; j < n; ++j) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(double)));
        if (!in) {
            std::ostringstream os;
            os << "read_checkpoint: truncated payload in " << path << " at node row " << j;
            throw CheckpointFormatError(os.str());
        }
        for (int i = 0; i < n; ++i) {
            const double* p = row.data() + 5ull * i;
            Sym3 u;
            u.xx = p[0];
            u.yy = p[1];
            u.zz = 1.0 - p[0] - p[1];
            u.xy = p[2];
            u.xz = p[3];
            u.yz = p[4];
            f.set(i, j, u);
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
namespace {
void write_full(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ValidationError("csv writer: cannot open " + path);
    out << text;
    if (!out) throw Error("csv writer: short write to " + path);
}
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_field_csv(const std::string& path, const Grid2D& g, const std::vector<double>& values,
                     const std::string& value_name, const std::vector<std::uint8_t>* valid_mask) {
    std::ostringstream os;
    os << "x,y," << value_name << '\n';
    for (int j = 0; j < g.n; ++j) {
        for (int i = 0; i < g.n; ++i) {
            int id = g.idx(i, j);
            if (valid_mask && !(*valid_mask)[id]) continue;
            os << fmt(g.x(i)) << ',' << fmt(g.y(j)) << ',' << fmt(values[id]) << '\n';
        }
    }
    write_full(path, os.str());
}

void write_profile_csv(const std::string& path, const std::vector<double>& r,
                       const std::vector<double>& values, const std::string& value_name) {
    if (r.size() != values.size())
        throw ValidationError("write_profile_csv: radius/value size mismatch");
    std::ostringstream os;
    os << "r," << value_name << '\n';
    for (std::size_t k = 0; k < r.size(); ++k) os << fmt(r[k]) << ',' << fmt(values[k]) << '\n';
    write_full(path, os.str());
}

void write_columns_csv(const std::string& path, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& columns) {
    if (names.size() != columns.size() || columns.empty())
        throw ValidationError("write_columns_csv: column/name mismatch");
    std::size_t rows = columns[0].size();
    for (const auto& c : columns)
        if (c.size() != rows) throw ValidationError("write_columns_csv: ragged columns");
    std::ostringstream os;
    for (std::size_t c = 0; c < names.size(); ++c) os << names[c] << (c + 1 < names.size() ? ',' : '\n');
    for (std::size_t k = 0; k < rows; ++k)
        for (std::size_t c = 0; c < columns.size(); ++c)
            os << fmt(columns[c][k]) << (c + 1 < columns.size() ? ',' : '\n');
    write_full(path, os.str());
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("fnv1a64_file: cannot open " + path);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        std::streamsize got = in.gcount();
        for (std::streamsize k = 0; k < got; ++k) {
            hash ^= static_cast<unsigned char>(buf[k]);
            hash *= 0x100000001b3ull;
        }
    }
    return hash;
}

}  // namespace ldg
