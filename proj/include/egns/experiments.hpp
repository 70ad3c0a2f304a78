#pragma once

#include "egns/checks.hpp"
#include "egns/config.hpp"

namespace egns {

/// Runs the experiment described by the spec and writes its CSV artifacts
/// under spec.out_dir. Returns the process exit code convention:
/// 0 success, 1 run failure, 2 check failure.
int run_experiment(const ExperimentSpec& spec);

/// RunConfig for one sweep member of an experiment.
RunConfig make_run_config(const ExperimentSpec& spec, ExperimentKind kind, int m, double nu);

std::string taylor_green_csv_name(double nu, int m);
std::string conservation_csv_name(double nu, int m);

}  // namespace egns
