// Command-line driver: run a simulation, run the identity battery, or run a
// refinement study with the time-translate measurement.

#include "macvd/config.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace macvd;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> levels;
};

struct Session {
    RunConfig cfg;
    fs::path out;
    std::uint64_t seed = 0;
    std::string header;
};

Session open_session(const Options& o)
{
    Session s;
    s.cfg = load_config(o.config);
    s.seed = o.seed ? *o.seed : s.cfg.verify.seed;
    s.out = o.out.empty() ? fs::path(s.cfg.output.directory) : fs::path(o.out);
    fs::create_directories(s.out);
    s.header = report_header(s.cfg.hash, s.seed);
    return s;
}

template <class Writer>
void emit(const fs::path& path, Writer&& writer)
{
    std::ostringstream os;
    writer(os);
    write_atomic(path.string(), os.str());
}

std::string step_name(const char* stem, std::size_t n, const char* ext)
{
    std::ostringstream os;
    os << stem << '_' << std::setw(5) << std::setfill('0') << n << ext;
    return os.str();
}

bool wants(const RunConfig& cfg, const std::string& format)
{
    return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), format) != cfg.output.formats.end();
}

void line(std::ostream& summary, bool pass, const std::string& what)
{
    const std::string text = std::string(pass ? "PASS " : "FAIL ") + what + '\n';
    std::cout << text;
    summary << text;
}

int cmd_run(const Options& o)
{
    Session s = open_session(o);
    const SchemeConfig scheme = build_scheme(s.cfg);
    validate(scheme);
    const RunResult r = run(scheme);

    const Trajectory& traj = r.trajectory;
    const auto cadence = static_cast<std::size_t>(s.cfg.output.cadence);
    for (std::size_t n = 0; n < traj.size(); ++n) {
        if (n % cadence != 0 && n + 1 != traj.size()) {
            continue;
        }
        if (wants(s.cfg, "csv")) {
            emit(s.out / step_name("density", n, ".csv"),
                 [&](std::ostream& os) { write_scalar_csv(os, traj.density[n], s.header); });
            emit(s.out / step_name("velocity", n, ".csv"),
                 [&](std::ostream& os) { write_velocity_csv(os, traj.velocity[n], s.header); });
            emit(s.out / step_name("pressure", n, ".csv"),
                 [&](std::ostream& os) { write_scalar_csv(os, traj.pressure[n], s.header); });
        }
        if (wants(s.cfg, "vtk")) {
            std::ostringstream title;
            title << "macvd t=" << std::setprecision(12) << traj.times[n] << " config " << s.cfg.hash;
            emit(s.out / step_name("state", n, ".vtk"), [&](std::ostream& os) {
                write_vtk(os, traj.density[n], traj.velocity[n], traj.pressure[n], title.str());
            });
        }
    }
    emit(s.out / "diagnostics.csv", [&](std::ostream& os) { write_diagnostics_csv(os, r.diagnostics, s.header); });

    std::ostringstream summary;
    summary << s.header;
    if (r.dt_adjusted) {
        std::cout << "note: dt adjusted to " << r.dt << " so that T/dt is an integer\n";
        summary << "# dt adjusted to " << std::setprecision(12) << r.dt << '\n';
    }
    const CheckFlags c = r.diagnostics.combined();
    line(summary, r.completed, "steps completed " + std::to_string(r.diagnostics.steps.size()) + "/" +
                                   std::to_string(r.steps) + (r.completed ? "" : " (" + r.failure + ")"));
    line(summary, c.bounds, "density bounds");
    line(summary, c.l2_decay, "density L2 decay");
    line(summary, c.divergence, "divergence-free velocity");
    line(summary, c.mass_dual, "dual-cell mass balance");
    line(summary, c.kinetic, "kinetic energy identity");
    line(summary, c.remainder, "kinetic remainder sign");
    line(summary, c.budget, "energy budget");
    emit(s.out / "summary.txt", [&](std::ostream& os) { os << summary.str(); });
    if (!r.completed) {
        std::cerr << "solver failure at " << r.failure << '\n';
    }
    return r.completed && c.all() ? 0 : 1;
}

int cmd_verify(const Options& o)
{
    Session s = open_session(o);
    const MeshPtr mesh = build_mesh(s.cfg.mesh);
    std::vector<MeshPtr> meshes{mesh};
    if (s.cfg.mesh.coords.empty()) {
        std::mt19937_64 rng(s.seed);
        meshes.push_back(random_nonuniform_mesh(s.cfg.mesh.cells, rng));
    }
    const int trials = s.cfg.verify.trials;
    std::vector<IdentityReport> reports;
    std::uint64_t seed = s.seed;
    for (const MeshPtr& m : meshes) {
        reports.push_back(check_duality(m, trials, seed++));
        reports.push_back(check_adjointness(m, trials, seed++));
        reports.push_back(check_coercivity(m, trials, seed++));
        reports.push_back(check_laplacian_symmetry(m));
        reports.push_back(check_block_transpose(m));
    }
    std::ostringstream summary;
    summary << s.header;
    bool all = true;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        std::ostringstream what;
        what << r.name << (k < 5 ? " (given mesh)" : " (perturbed mesh)") << ": max relative residual "
             << std::setprecision(3) << std::scientific << r.max_residual << " < " << r.threshold;
        line(summary, r.pass(), what.str());
        all = all && r.pass();
    }
    emit(s.out / "verify.csv", [&](std::ostream& os) {
        os << s.header << "check,mesh,trials,max_residual,threshold,pass\n" << std::setprecision(10);
        for (std::size_t k = 0; k < reports.size(); ++k) {
            const auto& r = reports[k];
            os << r.name << ',' << (k < 5 ? "given" : "perturbed") << ',' << r.trials << ',' << r.max_residual << ','
               << r.threshold << ',' << r.pass() << '\n';
        }
    });
    emit(s.out / "summary.txt", [&](std::ostream& os) { os << summary.str(); });
    return all ? 0 : 1;
}

int cmd_study(const Options& o)
{
    Session s = open_session(o);
    StudyConfig study = s.cfg.study;
    if (o.levels) {
        study.options.levels = *o.levels;
    }
    const ConvergenceReport conv = convergence_study(study.options);
    emit(s.out / "convergence.csv", [&](std::ostream& os) { write_convergence_csv(os, conv, s.header); });

    SchemeConfig tcfg;
    tcfg.problem = make_preset(study.translate_preset, study.options.dim);
    tcfg.mesh = build_uniform_mesh(tcfg.problem.domain,
                                   std::vector<Index>(static_cast<std::size_t>(study.options.dim), study.translate_cells));
    tcfg.T = study.options.T;
    tcfg.dt = study.options.dt_over_h / static_cast<double>(study.translate_cells);
    tcfg.solver = s.cfg.solver;
    const RunResult tr = run(tcfg);
    std::vector<double> taus;
    for (double k : study.taus) {
        taus.push_back(k * tr.dt);
    }
    const TranslateReport trans = measure_translates(tr.trajectory, taus, tcfg.problem.rho_min, tcfg.problem.rho_max);
    emit(s.out / "translates.csv", [&](std::ostream& os) { write_translate_csv(os, trans, s.header); });

    std::ostringstream summary;
    summary << s.header;
    std::ostringstream what;
    what << std::setprecision(4);
    for (std::size_t k = 0; k < conv.levels.size(); ++k) {
        const auto& l = conv.levels[k];
        std::cout << "level " << l.cells << ": velocity error " << l.velocity << ", density error " << l.density
                  << ", pressure error " << l.pressure << " (" << std::fixed << std::setprecision(2) << l.wall_time
                  << std::defaultfloat << std::setprecision(6) << " s)\n";
    }
    line(summary, conv.monotone(), "errors strictly decrease across levels");
    double minf = 1e300;
    for (std::size_t k = 0; k < conv.velocity_factors.size(); ++k) {
        minf = std::min({minf, conv.velocity_factors[k], conv.density_factors[k]});
    }
    what << "reduction factor per level " << minf << " >= " << conv.min_factor;
    line(summary, conv.factors_pass(), what.str());
    std::ostringstream slope;
    slope << std::setprecision(4) << "time-translate slope " << trans.slope << " >= 0.4";
    line(summary, trans.slope >= 0.4, slope.str());
    emit(s.out / "summary.txt", [&](std::ostream& os) { os << summary.str(); });
    return conv.factors_pass() && trans.slope >= 0.4 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Variable-density incompressible flow on MAC grids"};
    app.require_subcommand(1);
    Options opts;
    const auto add_common = [&opts](CLI::App* sub) {
        sub->add_option("--config", opts.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out, "output directory (overrides output.directory)");
        sub->add_option("--seed", opts.seed, "random seed (overrides verify.seed)");
    };
    CLI::App* run_cmd = app.add_subcommand("run", "run a simulation and write trajectory and diagnostics");
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the discrete identity battery");
    CLI::App* study_cmd = app.add_subcommand("study", "run a convergence study and the time-translate measurement");
    add_common(run_cmd);
    add_common(verify_cmd);
    add_common(study_cmd);
    study_cmd->add_option("--levels", opts.levels, "number of refinement levels")->check(CLI::Range(2, 8));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return cmd_run(opts);
        }
        if (verify_cmd->parsed()) {
            return cmd_verify(opts);
        }
        return cmd_study(opts);
    } catch (const ValidationError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
