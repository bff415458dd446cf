#include "ldg/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ldg/errors.hpp"
#include "ldg/field.hpp"
#include "ldg/profiles.hpp"

namespace ldg {

namespace {

using nlohmann::ordered_json;

// Every parser below rejects keys it does not know about. A silently ignored
// typo ("epsilom": 0.04) would otherwise run the default and report results
// for the wrong experiment — the most expensive kind of bug a lab tool can
// have, because nothing crashes.
void reject_unknown(const ordered_json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known)
            throw ValidationError("unknown config key \"" + (where.empty() ? item.key() : where + "." + item.key()) + "\"");
    }
}

template <typename T>
void read_into(const ordered_json& j, const char* key, T& out, const std::string& where) {
    if (!j.contains(key)) return;  // missing key keeps the default
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config key \"" + (where.empty() ? std::string(key) : where + "." + key) +
                              "\" has the wrong type: " + e.what());
    }
}

BoundarySpec parse_boundary(const ordered_json& j) {
    reject_unknown(j, {"delta1", "delta2", "phase1", "phase2"}, "boundary");
    BoundarySpec b;
    read_into(j, "delta1", b.delta1, "boundary");
    read_into(j, "delta2", b.delta2, "boundary");
    read_into(j, "phase1", b.phase1, "boundary");
    read_into(j, "phase2", b.phase2, "boundary");
    return b;
}

FlowConfig parse_flow(const ordered_json& j) {
    reject_unknown(j,
                   {"tolerance", "check_interval", "max_iterations", "dt_safety",
                    "semi_implicit", "cascade", "cascade_min_nodes"},
                   "flow");
    FlowConfig f;
    read_into(j, "tolerance", f.tolerance, "flow");
    read_into(j, "check_interval", f.check_interval, "flow");
    read_into(j, "max_iterations", f.max_iterations, "flow");
    read_into(j, "dt_safety", f.dt_safety, "flow");
    read_into(j, "semi_implicit", f.semi_implicit, "flow");
    read_into(j, "cascade", f.cascade, "flow");
    read_into(j, "cascade_min_nodes", f.cascade_min_nodes, "flow");
    return f;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

void RunConfig::validate() const {
    if (n < 16) throw ValidationError("config field n must be >= 16 (got " + std::to_string(n) + ")");
    if (!(epsilon > 0.0)) throw ValidationError("config field epsilon must be positive");
    if (!(beta >= 1.0 && beta < 3.0))
        throw ValidationError("config field beta must lie in [1, 3) (got " + std::to_string(beta) + ")");
    boundary.validate();
    flow.validate();
    const double h = 1.0 / (n - 1);
    if (epsilon < 2.0 * h) {
        std::ostringstream os;
        os << "core is unresolved: epsilon = " << epsilon << " is below two mesh widths 2h = "
           << 2.0 * h << " at n = " << n << "; refine the grid or raise epsilon";
        throw CoreUnresolved(os.str());
    }
    if (annulus_circles < 2)
        throw ValidationError("config field annulus_circles must be >= 2");
    if (!annulus_radii.empty()) {
        double prev = 0.0;
        for (double r : annulus_radii) {
            if (!(r > prev))
                throw ValidationError("config field annulus_radii must be positive and strictly increasing");
            prev = r;
        }
        if (annulus_radii.back() >= 0.5)
            throw ValidationError("config field annulus_radii must stay below 0.5 (circles must fit in the unit square)");
    }
    if (!(expansion_r >= 5.0 * epsilon && expansion_r <= 0.2)) {
        std::ostringstream os;
        os << "config field expansion_r = " << expansion_r
           << " must lie in [5 epsilon, 0.2] = [" << 5.0 * epsilon << ", 0.2]";
        throw ValidationError(os.str());
    }
    if (outdir.empty()) throw ValidationError("config field outdir must not be empty");
}

std::vector<double> RunConfig::radii() const {
    if (!annulus_radii.empty()) return annulus_radii;
    if (5.0 * epsilon >= 0.15) {
        std::ostringstream os;
        os << "the default profile ladder spans [5 epsilon, 0.15], which is empty at epsilon = "
           << epsilon << "; pass annulus_radii explicitly for coarse runs";
        throw ValidationError(os.str());
    }
    return radius_ladder(5.0 * epsilon, 0.15, annulus_circles);
}

RunConfig parse_config_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    reject_unknown(j,
                   {"n", "epsilon", "beta", "boundary", "flow", "annulus_radii",
                    "annulus_circles", "expansion_r", "outdir", "deterministic", "seed"},
                   "");
    RunConfig c;
    read_into(j, "n", c.n, "");
    read_into(j, "epsilon", c.epsilon, "");
    read_into(j, "beta", c.beta, "");
    if (j.contains("boundary")) c.boundary = parse_boundary(j.at("boundary"));
    if (j.contains("flow")) c.flow = parse_flow(j.at("flow"));
    read_into(j, "annulus_radii", c.annulus_radii, "");
    read_into(j, "annulus_circles", c.annulus_circles, "");
    read_into(j, "expansion_r", c.expansion_r, "");
    read_into(j, "outdir", c.outdir, "");
    read_into(j, "deterministic", c.deterministic, "");
    read_into(j, "seed", c.seed, "");
    return c;
}

RunConfig load_config_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ValidationError("cannot read config file " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

std::string emit_config_json(const RunConfig& c) {
    ordered_json j;
    j["n"] = c.n;
    j["epsilon"] = c.epsilon;
    j["beta"] = c.beta;
    j["boundary"] = {{"delta1", c.boundary.delta1},
                     {"delta2", c.boundary.delta2},
                     {"phase1", c.boundary.phase1},
                     {"phase2", c.boundary.phase2}};
    j["flow"] = {{"tolerance", c.flow.tolerance},
                 {"check_interval", c.flow.check_interval},
                 {"max_iterations", c.flow.max_iterations},
                 {"dt_safety", c.flow.dt_safety},
                 {"semi_implicit", c.flow.semi_implicit},
                 {"cascade", c.flow.cascade},
                 {"cascade_min_nodes", c.flow.cascade_min_nodes}};
    j["annulus_radii"] = c.annulus_radii;
    j["annulus_circles"] = c.annulus_circles;
    j["expansion_r"] = c.expansion_r;
    j["outdir"] = c.outdir;
    j["deterministic"] = c.deterministic;
    j["seed"] = c.seed;
    return j.dump(2) + "\n";
}

void RunManifest::add_file(const std::filesystem::path& base, const std::filesystem::path& file) {
    ManifestEntry e;
    e.path = std::filesystem::relative(file, base).generic_string();
    e.bytes = std::filesystem::file_size(file);
    e.fnv1a64 = hex64(fnv1a64_file(file.string()));
    files.push_back(std::move(e));
}

void RunManifest::write(const std::filesystem::path& path) const {
    ordered_json j;
    j["tool"] = kToolVersion;
    j["command"] = command;
    try {
        j["config"] = config_json.empty() ? ordered_json() : ordered_json::parse(config_json);
    } catch (const nlohmann::json::exception&) {
        j["config"] = config_json;  // echo verbatim if not JSON
    }
    j["wall_seconds"] = wall_seconds;
    j["notes"] = notes;
    j["files"] = ordered_json::array();
    for (const auto& f : files)
        j["files"].push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", f.fnv1a64}});
    std::ofstream out(path);
    if (!out) throw Error("cannot write manifest " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace ldg
