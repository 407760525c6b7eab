#include "macvd/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace macvd;

namespace {

const char* kMinimal = R"({"mesh": {"dim": 2, "cells": [4, 3]}, "time": {"T": 1.0, "dt": 0.25}})";

std::string error_path(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<none>";
}

}  // namespace

TEST(Config, MinimalDefaults)
{
    const RunConfig cfg = parse_config(kMinimal);
    EXPECT_EQ(cfg.mesh.dim, 2);
    EXPECT_EQ(cfg.mesh.cells, (std::vector<Index>{4, 3}));
    EXPECT_EQ(cfg.mesh.domain.size(), 2u);
    EXPECT_EQ(cfg.problem.preset, "rest");
    EXPECT_EQ(cfg.solver.strategy, SolverStrategy::Direct);
    EXPECT_DOUBLE_EQ(cfg.solver.transport_tol, 1e-12);
    EXPECT_DOUBLE_EQ(cfg.solver.oseen_tol, 1e-10);
    const SchemeConfig s = build_scheme(cfg);
    EXPECT_EQ(s.mesh->num_cells(), 12);
    EXPECT_NO_THROW(validate(s));
}

TEST(Config, FullSchema)
{
    const RunConfig cfg = parse_config(R"({
        "mesh": {"dim": 2, "domain": [[0, 2], [0, 1]], "coords": [[0, 0.5, 2], [0, 0.3, 1]]},
        "time": {"T": 0.5, "dt": 0.1},
        "problem": {"preset": "rotating-patch", "rho_min": 0.9, "rho_max": 2.5},
        "solver": {"strategy": "iterative", "transport_tol": 1e-11, "oseen_tol": 1e-9, "max_iterations": 50},
        "output": {"directory": "results", "formats": ["vtk"], "cadence": 5},
        "verify": {"trials": 10, "seed": 99},
        "study": {"levels": 3, "base_cells": 8, "T": 0.2, "dt_over_h": 0.25, "taus": [1, 3, 9]}
    })");
    EXPECT_EQ(cfg.mesh.coords.size(), 2u);
    EXPECT_EQ(cfg.solver.strategy, SolverStrategy::Iterative);
    EXPECT_EQ(cfg.solver.max_iterations, 50);
    EXPECT_EQ(cfg.output.cadence, 5);
    EXPECT_EQ(cfg.verify.seed, 99u);
    EXPECT_EQ(cfg.study.options.levels, 3);
    EXPECT_EQ(cfg.study.options.solver.strategy, SolverStrategy::Iterative);
    const Problem pb = build_problem(cfg);
    EXPECT_DOUBLE_EQ(pb.rho_min, 0.9);
    EXPECT_DOUBLE_EQ(pb.rho_max, 2.5);
    EXPECT_DOUBLE_EQ(build_mesh(cfg.mesh)->spacing(0, 0), 0.5);
}

TEST(Config, SchemaViolationsReportKeyPaths)
{
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2, "cells": [4, 4], "spacing": 1}, "time": {"T": 1, "dt": 0.1}})"),
              "mesh.spacing");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2, "cells": [4, 4]}, "time": {"T": 1, "dt": 0.1}, "extra": 1})"),
              "extra");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2, "cells": [4, 4]}, "time": {"T": 0.1, "dt": 0.5}})"), "time.dt");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2, "cells": [4, -1]}, "time": {"T": 1, "dt": 0.1}})"), "mesh.cells[1]");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2}, "time": {"T": 1, "dt": 0.1}})"), "mesh");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2, "coords": [[0, 1], [0, 0.5, 2]]}, "time": {"T": 1, "dt": 0.1}})"),
              "mesh.coords[1]");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 4, "cells": [1, 1, 1, 1]}, "time": {"T": 1, "dt": 0.1}})"), "mesh.dim");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2, "cells": [4, 4]}, "time": {"T": 1, "dt": 0.1},
                             "problem": {"preset": "lava"}})"),
              "problem.preset");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2, "cells": [4, 4]}, "time": {"T": 1, "dt": 0.1},
                             "solver": {"strategy": "guess"}})"),
              "solver.strategy");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2, "cells": [4, 4]}, "time": {"T": 1, "dt": 0.1},
                             "output": {"formats": ["hdf5"]}})"),
              "output.formats[0]");
    EXPECT_EQ(error_path(R"({"mesh": {"dim": 2, "cells": [4, 4]}, "time": {"T": 1, "dt": 0.1},
                             "study": {"taus": [1, 2]}})"),
              "study.taus");
    EXPECT_EQ(error_path("{not json"), "<root>");
    EXPECT_EQ(error_path(kMinimal), "<none>");
}

TEST(Config, HashIsDeterministic)
{
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(parse_config(kMinimal).hash, parse_config(kMinimal).hash);
    EXPECT_NE(parse_config(kMinimal).hash, parse_config(std::string(kMinimal) + " ").hash);
    const std::string h = report_header("abc", 7);
    EXPECT_NE(h.find("units: nondimensional"), std::string::npos);
    EXPECT_NE(h.find("config_hash: abc"), std::string::npos);
    EXPECT_NE(h.find("seed: 7"), std::string::npos);
}

TEST(Config, AtomicWrite)
{
    const auto dir = std::filesystem::temp_directory_path() / "macvd_config_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "out.txt").string();
    write_atomic(path, "first\n");
    write_atomic(path, "second\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "second");
    EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
    EXPECT_THROW(load_config((dir / "missing.json").string()), ValidationError);
    std::filesystem::remove_all(dir);
}
