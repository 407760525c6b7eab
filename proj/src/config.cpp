#include "macvd/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace macvd {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& path, const std::set<std::string>& allowed)
{
    if (!j.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

double get_number(const json& j, const std::string& path)
{
    if (!j.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    return j.get<double>();
}

double get_positive(const json& j, const std::string& path)
{
    const double x = get_number(j, path);
    if (!(x > 0.0)) {
        throw ConfigError(path, "must be positive");
    }
    return x;
}

long long get_integer(const json& j, const std::string& path, long long lo)
{
    if (!j.is_number_integer()) {
        throw ConfigError(path, "expected an integer");
    }
    const long long x = j.get<long long>();
    if (x < lo) {
        throw ConfigError(path, "must be at least " + std::to_string(lo));
    }
    return x;
}

std::string get_string(const json& j, const std::string& path)
{
    if (!j.is_string()) {
        throw ConfigError(path, "expected a string");
    }
    return j.get<std::string>();
}

const json& get_array(const json& j, const std::string& path)
{
    if (!j.is_array()) {
        throw ConfigError(path, "expected an array");
    }
    return j;
}

std::string item(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

MeshConfig parse_mesh(const json& j)
{
    require_object(j, "mesh", {"dim", "domain", "cells", "coords"});
    MeshConfig m;
    if (!j.contains("dim")) {
        throw ConfigError("mesh.dim", "missing");
    }
    m.dim = static_cast<int>(get_integer(j["dim"], "mesh.dim", 2));
    if (m.dim != 2 && m.dim != 3) {
        throw ConfigError("mesh.dim", "must be 2 or 3");
    }
    const auto ndim = static_cast<std::size_t>(m.dim);
    if (j.contains("domain")) {
        const json& d = get_array(j["domain"], "mesh.domain");
        if (d.size() != ndim) {
            throw ConfigError("mesh.domain", "expected one [lo, hi] pair per axis");
        }
        for (std::size_t a = 0; a < ndim; ++a) {
            const std::string p = item("mesh.domain", a);
            if (!d[a].is_array() || d[a].size() != 2) {
                throw ConfigError(p, "expected [lo, hi]");
            }
            const double lo = get_number(d[a][0], p + "[0]");
            const double hi = get_number(d[a][1], p + "[1]");
            if (!(hi > lo)) {
                throw ConfigError(p, "requires lo < hi");
            }
            m.domain.push_back({lo, hi});
        }
    } else {
        m.domain.assign(ndim, {0.0, 1.0});
    }
    const bool has_cells = j.contains("cells");
    const bool has_coords = j.contains("coords");
    if (has_cells == has_coords) {
        throw ConfigError("mesh", "give exactly one of 'cells' or 'coords'");
    }
    if (has_cells) {
        const json& c = get_array(j["cells"], "mesh.cells");
        if (c.size() != ndim) {
            throw ConfigError("mesh.cells", "expected one count per axis");
        }
        for (std::size_t a = 0; a < ndim; ++a) {
            m.cells.push_back(static_cast<Index>(get_integer(c[a], item("mesh.cells", a), 1)));
        }
    } else {
        const json& c = get_array(j["coords"], "mesh.coords");
        if (c.size() != ndim) {
            throw ConfigError("mesh.coords", "expected one coordinate list per axis");
        }
        for (std::size_t a = 0; a < ndim; ++a) {
            const std::string p = item("mesh.coords", a);
            const json& list = get_array(c[a], p);
            if (list.size() < 2) {
                throw ConfigError(p, "needs at least two coordinates");
            }
            std::vector<double> xs;
            for (std::size_t k = 0; k < list.size(); ++k) {
                xs.push_back(get_number(list[k], item(p, k)));
                if (k > 0 && !(xs[k] > xs[k - 1])) {
                    throw ConfigError(item(p, k), "coordinates must be strictly increasing");
                }
            }
            if (xs.front() != m.domain[a][0] || xs.back() != m.domain[a][1]) {
                throw ConfigError(p, "endpoints must match the domain");
            }
            m.coords.push_back(std::move(xs));
        }
    }
    return m;
}

ProblemConfig parse_problem(const json& j, int dim)
{
    require_object(j, "problem", {"preset", "rest_density", "rho_min", "rho_max"});
    ProblemConfig p;
    if (j.contains("preset")) {
        p.preset = get_string(j["preset"], "problem.preset");
        const auto names = preset_names();
        if (std::find(names.begin(), names.end(), p.preset) == names.end()) {
            throw ConfigError("problem.preset", "unknown preset '" + p.preset + "'");
        }
    }
    if (j.contains("rest_density")) {
        p.rest_density = get_positive(j["rest_density"], "problem.rest_density");
    }
    if (j.contains("rho_min")) {
        p.rho_min = get_positive(j["rho_min"], "problem.rho_min");
    }
    if (j.contains("rho_max")) {
        p.rho_max = get_positive(j["rho_max"], "problem.rho_max");
    }
    if (p.rho_min && p.rho_max && *p.rho_max < *p.rho_min) {
        throw ConfigError("problem.rho_max", "must not be below rho_min");
    }
    (void)dim;
    return p;
}

SolverOptions parse_solver(const json& j)
{
    require_object(j, "solver", {"strategy", "transport_tol", "oseen_tol", "max_iterations"});
    SolverOptions s;
    if (j.contains("strategy")) {
        const std::string name = get_string(j["strategy"], "solver.strategy");
        try {
            s.strategy = parse_strategy(name);
        } catch (const std::exception& e) {
            throw ConfigError("solver.strategy", e.what());
        }
    }
    if (j.contains("transport_tol")) {
        s.transport_tol = get_positive(j["transport_tol"], "solver.transport_tol");
    }
    if (j.contains("oseen_tol")) {
        s.oseen_tol = get_positive(j["oseen_tol"], "solver.oseen_tol");
    }
    if (j.contains("max_iterations")) {
        s.max_iterations = static_cast<int>(get_integer(j["max_iterations"], "solver.max_iterations", 1));
    }
    return s;
}

OutputConfig parse_output(const json& j)
{
    require_object(j, "output", {"directory", "formats", "cadence"});
    OutputConfig o;
    if (j.contains("directory")) {
        o.directory = get_string(j["directory"], "output.directory");
    }
    if (j.contains("formats")) {
        const json& f = get_array(j["formats"], "output.formats");
        o.formats.clear();
        for (std::size_t k = 0; k < f.size(); ++k) {
            const std::string name = get_string(f[k], item("output.formats", k));
            if (name != "csv" && name != "vtk") {
                throw ConfigError(item("output.formats", k), "expected 'csv' or 'vtk'");
            }
            o.formats.push_back(name);
        }
    }
    if (j.contains("cadence")) {
        o.cadence = static_cast<int>(get_integer(j["cadence"], "output.cadence", 1));
    }
    return o;
}

VerifyConfig parse_verify(const json& j)
{
    require_object(j, "verify", {"trials", "seed"});
    VerifyConfig v;
    if (j.contains("trials")) {
        v.trials = static_cast<int>(get_integer(j["trials"], "verify.trials", 1));
    }
    if (j.contains("seed")) {
        v.seed = static_cast<std::uint64_t>(get_integer(j["seed"], "verify.seed", 0));
    }
    return v;
}

StudyConfig parse_study(const json& j)
{
    require_object(j, "study",
                   {"levels", "base_cells", "T", "dt_over_h", "preset", "dim", "translate_preset",
                    "translate_cells", "taus"});
    StudyConfig s;
    auto& o = s.options;
    if (j.contains("levels")) {
        o.levels = static_cast<int>(get_integer(j["levels"], "study.levels", 2));
    }
    if (j.contains("base_cells")) {
        o.base_cells = static_cast<Index>(get_integer(j["base_cells"], "study.base_cells", 1));
    }
    if (j.contains("T")) {
        o.T = get_positive(j["T"], "study.T");
    }
    if (j.contains("dt_over_h")) {
        o.dt_over_h = get_positive(j["dt_over_h"], "study.dt_over_h");
    }
    if (j.contains("dim")) {
        o.dim = static_cast<int>(get_integer(j["dim"], "study.dim", 2));
        if (o.dim > 3) {
            throw ConfigError("study.dim", "must be 2 or 3");
        }
    }
    const auto names = preset_names();
    const auto check_preset = [&names](const std::string& name, const std::string& path) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw ConfigError(path, "unknown preset '" + name + "'");
        }
    };
    if (j.contains("preset")) {
        o.preset = get_string(j["preset"], "study.preset");
        check_preset(o.preset, "study.preset");
    }
    if (j.contains("translate_preset")) {
        s.translate_preset = get_string(j["translate_preset"], "study.translate_preset");
        check_preset(s.translate_preset, "study.translate_preset");
    }
    if (j.contains("translate_cells")) {
        s.translate_cells = static_cast<Index>(get_integer(j["translate_cells"], "study.translate_cells", 1));
    }
    if (j.contains("taus")) {
        const json& t = get_array(j["taus"], "study.taus");
        if (t.size() < 3) {
            throw ConfigError("study.taus", "needs at least three entries");
        }
        s.taus.clear();
        for (std::size_t k = 0; k < t.size(); ++k) {
            s.taus.push_back(get_positive(t[k], item("study.taus", k)));
        }
    }
    return s;
}

}  // namespace

std::string fnv1a_hex(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

RunConfig parse_config(const std::string& text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    require_object(root, "", {"mesh", "time", "problem", "solver", "output", "verify", "study"});
    RunConfig cfg;
    cfg.hash = fnv1a_hex(text);
    if (!root.contains("mesh")) {
        throw ConfigError("mesh", "missing");
    }
    cfg.mesh = parse_mesh(root["mesh"]);
    if (!root.contains("time")) {
        throw ConfigError("time", "missing");
    }
    const json& t = root["time"];
    require_object(t, "time", {"T", "dt"});
    if (!t.contains("T") || !t.contains("dt")) {
        throw ConfigError("time", "requires both T and dt");
    }
    cfg.T = get_positive(t["T"], "time.T");
    cfg.dt = get_positive(t["dt"], "time.dt");
    if (cfg.dt > cfg.T) {
        throw ConfigError("time.dt", "must not exceed T");
    }
    if (root.contains("problem")) {
        cfg.problem = parse_problem(root["problem"], cfg.mesh.dim);
    }
    if (root.contains("solver")) {
        cfg.solver = parse_solver(root["solver"]);
    }
    if (root.contains("output")) {
        cfg.output = parse_output(root["output"]);
    }
    if (root.contains("verify")) {
        cfg.verify = parse_verify(root["verify"]);
    }
    if (root.contains("study")) {
        cfg.study = parse_study(root["study"]);
    }
    cfg.study.options.solver = cfg.solver;
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

MeshPtr build_mesh(const MeshConfig& cfg)
{
    if (!cfg.coords.empty()) {
        return build_mesh(cfg.domain, cfg.coords);
    }
    return build_uniform_mesh(cfg.domain, cfg.cells);
}

Problem build_problem(const RunConfig& cfg)
{
    Problem p = make_preset(cfg.problem.preset, cfg.mesh.dim, cfg.problem.rest_density);
    if (cfg.problem.rho_min) {
        p.rho_min = *cfg.problem.rho_min;
    }
    if (cfg.problem.rho_max) {
        p.rho_max = *cfg.problem.rho_max;
    }
    return p;
}

SchemeConfig build_scheme(const RunConfig& cfg)
{
    SchemeConfig s;
    s.mesh = build_mesh(cfg.mesh);
    s.T = cfg.T;
    s.dt = cfg.dt;
    s.problem = build_problem(cfg);
    s.solver = cfg.solver;
    return s;
}

std::string report_header(const std::string& config_hash, std::uint64_t seed)
{
    std::ostringstream os;
    os << "# units: nondimensional\n# config_hash: " << config_hash << "\n# seed: " << seed << '\n';
    return os.str();
}

void write_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open '" + tmp + "' for writing");
        }
        out << content;
        if (!out.flush()) {
            throw std::runtime_error("write to '" + tmp + "' failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace macvd
