// Command-line front end: batch experiment runner (run), operator identity
// checks (check), and a plain-text mesh dump (mesh-dump).
//
// Exit codes: 0 success, 1 run failure, 2 check failure, 3 config error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "egns/experiments.hpp"

namespace {

int dispatch_run(const std::string& config_path, const std::string& experiment,
                 const std::vector<int>& mesh_m, double dt, double T,
                 const std::vector<double>& nu, const std::string& scheme,
                 const std::string& out, int checkpoint_stride, int jobs) {
    egns::ExperimentSpec spec;
    bool have_spec = false;
    if (!config_path.empty()) {
        spec = egns::parse_config(config_path);
        have_spec = true;
    }
    if (!experiment.empty()) {
        if (experiment == "taylor_green")
            spec.kind = egns::ExperimentKind::TaylorGreen;
        else if (experiment == "conservation")
            spec.kind = egns::ExperimentKind::Conservation;
        else if (experiment == "operator_checks")
            spec.kind = egns::ExperimentKind::OperatorChecks;
        else if (experiment == "custom")
            spec.kind = egns::ExperimentKind::Custom;
        else
            throw egns::ConfigError("unknown experiment '" + experiment + "'");
        if (!have_spec) {
            // Flags only: rebuild the kind-dependent defaults.
            spec.mesh_m.clear();
            spec.nu.clear();
        }
        have_spec = true;
    }
    if (!have_spec) throw egns::ConfigError("run: provide --config or --experiment");

    // Command-line flags take precedence over config values.
    if (!mesh_m.empty()) spec.mesh_m = mesh_m;
    if (!nu.empty()) spec.nu = nu;
    if (dt > 0.0) spec.dt = dt;
    if (T > 0.0) spec.T = T;
    if (!scheme.empty()) {
        if (scheme == "linearized")
            spec.scheme = egns::Scheme::Linearized;
        else if (scheme == "nonlinear")
            spec.scheme = egns::Scheme::Nonlinear;
        else
            throw egns::ConfigError("unknown scheme '" + scheme + "'");
    }
    if (!out.empty()) spec.out_dir = out;
    if (checkpoint_stride >= 0) spec.checkpoint_stride = checkpoint_stride;
    if (jobs > 0) spec.jobs = jobs;

    egns::apply_experiment_defaults(spec);
    spec.validate();
    return egns::run_experiment(spec);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Enriched Galerkin Navier-Stokes solver on the periodic unit cube"};
    app.require_subcommand(1);

    std::string config_path, experiment, scheme, out;
    std::vector<int> mesh_m;
    std::vector<double> nu;
    double dt = -1.0, T = -1.0;
    int checkpoint_stride = -1, jobs = -1;

    CLI::App* run = app.add_subcommand("run", "run an experiment and write CSV artifacts");
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--experiment", experiment,
                    "taylor_green | conservation | operator_checks | custom");
    run->add_option("--mesh-m", mesh_m, "mesh subdivisions per axis (list)");
    run->add_option("--dt", dt, "time step");
    run->add_option("--T", T, "final time");
    run->add_option("--nu", nu, "viscosities (list)");
    run->add_option("--scheme", scheme, "linearized | nonlinear");
    run->add_option("--out", out, "output directory");
    run->add_option("--checkpoint-stride", checkpoint_stride, "steps between checkpoints");
    run->add_option("--jobs", jobs, "concurrent sweep members");

    int check_m = 2;
    CLI::App* check = app.add_subcommand("check", "run the operator identity suite");
    check->add_option("--mesh-m", check_m, "mesh subdivisions per axis");
    check->add_option("--out", out, "output directory");

    int dump_m = 2;
    std::string dump_path;
    CLI::App* dump = app.add_subcommand("mesh-dump", "write the plain-text mesh description");
    dump->add_option("--mesh-m", dump_m, "mesh subdivisions per axis");
    dump->add_option("--out", dump_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return dispatch_run(config_path, experiment, mesh_m, dt, T, nu, scheme, out,
                                checkpoint_stride, jobs);
        if (check->parsed()) {
            egns::ExperimentSpec spec;
            spec.kind = egns::ExperimentKind::OperatorChecks;
            spec.mesh_m = {check_m};
            spec.nu = {1e-8};
            if (!out.empty()) spec.out_dir = out;
            return egns::run_experiment(spec);
        }
        if (dump->parsed()) {
            const egns::PeriodicTetMesh mesh = egns::build_mesh(dump_m);
            if (dump_path.empty()) {
                egns::dump_mesh(mesh, std::cout);
            } else {
                std::ofstream file(dump_path);
                if (!file) throw egns::ConfigError("mesh-dump: cannot open '" + dump_path + "'");
                egns::dump_mesh(mesh, file);
            }
            return 0;
        }
    } catch (const egns::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
