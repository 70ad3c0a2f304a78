#pragma once

#include <optional>

#include "egns/diagnostics.hpp"
#include "egns/solver.hpp"
#include "egns/spaces.hpp"

namespace egns {

enum class Scheme { Linearized, Nonlinear };

struct RunConfig {
    int m = 6;
    double dt = 0.01;
    double T = 1.0;
    double nu = 1e-8;
    Scheme scheme = Scheme::Linearized;
    double picard_tol = 1e-10;
    int picard_max_iters = 50;
    VectorFn initial;                     // u^0 = {vertex values, face averages}
    SpaceTimeFn forcing;                  // empty means f = 0
    std::optional<ExactSolution> exact;   // enables the error summary
    std::string diagnostics_csv;          // empty means no file
    std::string checkpoint_dir;
    int checkpoint_stride = 0;

    int n_steps() const;
    void validate() const;
};

struct StepResult {
    EGField u;
    PressureField p;
    double identity_residual;  // relative defect of the per-step energy identity
    int picard_iterations;
    double max_picard_identity_residual;
    Eigen::Vector3d mean_multiplier;
};

/// One transient problem: owns the mesh, caches, assembled forms and the
/// reused symbolic factorization.
class TimeStepper {
  public:
    explicit TimeStepper(const RunConfig& config);

    StepResult step_linearized(const EGField& u_old, int k);
    StepResult step_picard(const EGField& u_old, int k);

    /// u^0 = {vertex values of g, face averages of g . n}, with the face part
    /// corrected to satisfy B u^0 = 0 exactly (the analytic property of
    /// divergence-free data that face quadrature only approximates).
    EGField initial_state() const;

    const PeriodicTetMesh& mesh() const { return mesh_; }
    const ElementOperatorCache& cache() const { return cache_; }
    const DofMap& dofmap() const { return map_; }
    const GlobalForms& forms() const { return forms_; }
    const RunConfig& config() const { return config_; }

  private:
    StepResult solve_with_convection(const EGField& u_old, int k, const SparseMatrix& convection,
                                     const Eigen::VectorXd& load);
    double identity_residual(const EGField& u_old, const EGField& u_new,
                             const Eigen::VectorXd& load) const;

    RunConfig config_;
    PeriodicTetMesh mesh_;
    ElementOperatorCache cache_;
    DofMap map_;
    GlobalForms forms_;
    SparseMatrix static_matrix_;
    StepSolver solver_;
};

struct TransientResult {
    DiagnosticsLog log;
    EGField u_final;
    PressureField p_final;
};

TransientResult run_transient(const RunConfig& config);

}  // namespace egns
