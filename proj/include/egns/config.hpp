#pragma once

#include <string>
#include <vector>

#include "egns/timestep.hpp"

namespace egns {

enum class ExperimentKind { TaylorGreen, Conservation, OperatorChecks, Custom };

/// Batch experiment description: a sweep over mesh resolutions and
/// viscosities around a RunConfig template.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Conservation;
    std::vector<int> mesh_m;
    std::vector<double> nu;
    double dt = 0.01;
    double T = 1.0;
    Scheme scheme = Scheme::Linearized;
    double picard_tol = 1e-10;
    int picard_max_iters = 50;
    std::string out_dir = "out";
    int checkpoint_stride = 0;
    int jobs = 1;

    void validate() const;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Key = value text config; '#' starts a comment; list values are
/// comma-separated. Unknown keys and malformed values are rejected with the
/// offending line number. Recognized keys: experiment, mesh_m, dt, T, nu,
/// scheme, picard_tol, picard_max_iters, out_dir, checkpoint_stride, jobs.
ExperimentSpec parse_config(const std::string& path);
ExperimentSpec parse_config_text(const std::string& text);

/// Fill kind-dependent defaults for fields the config left untouched.
void apply_experiment_defaults(ExperimentSpec& spec);

}  // namespace egns
