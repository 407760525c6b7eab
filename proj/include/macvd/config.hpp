/// @file config.hpp
/// @brief JSON run configuration, schema checks and report plumbing.
#pragma once

#include "macvd/timestepper.hpp"
#include "macvd/verify.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace macvd {

/// Schema violation; `path()` is the dotted key path ("mesh.cells[1]").
class ConfigError : public ValidationError {
public:
    ConfigError(const std::string& path, const std::string& what)
        : ValidationError(path + ": " + what), path_(path)
    {
    }
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct MeshConfig {
    int dim = 2;
    std::vector<std::array<double, 2>> domain;  ///< defaults to the unit box
    std::vector<Index> cells;                   ///< either cells ...
    std::vector<std::vector<double>> coords;    ///< ... or explicit coordinates
};

struct ProblemConfig {
    std::string preset = "rest";
    double rest_density = 1.0;
    std::optional<double> rho_min;  ///< override the preset's declared bounds
    std::optional<double> rho_max;
};

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats{"csv"};  ///< "csv", "vtk"
    int cadence = 1;                          ///< write every cadence-th step
};

struct VerifyConfig {
    int trials = 100;
    std::uint64_t seed = 1;
};

struct StudyConfig {
    StudyOptions options;
    std::string translate_preset = "rotating-patch";
    Index translate_cells = 32;
    std::vector<double> taus{1.0, 2.0, 4.0, 8.0};  ///< multiples of dt
};

struct RunConfig {
    MeshConfig mesh;
    double T = 1.0;
    double dt = 0.1;
    ProblemConfig problem;
    SolverOptions solver;
    OutputConfig output;
    VerifyConfig verify;
    StudyConfig study;
    std::string hash;  ///< FNV-1a of the source text
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

MeshPtr build_mesh(const MeshConfig& cfg);
Problem build_problem(const RunConfig& cfg);
SchemeConfig build_scheme(const RunConfig& cfg);

/// Comment rows opening every report file.
std::string report_header(const std::string& config_hash, std::uint64_t seed);

/// Writes to `path.tmp` and renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace macvd
