#include "egns/timestep.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace egns {

int RunConfig::n_steps() const {
    const double ratio = T / dt;
    const int n = static_cast<int>(std::llround(ratio));
    if (n < 0 || std::abs(n * dt - T) > 1e-12)
        throw std::invalid_argument("RunConfig: T is not an integral multiple of dt");
    return n;
}

void RunConfig::validate() const {
    if (m < 1) throw std::invalid_argument("RunConfig: m must be >= 1");
    if (dt <= 0.0) throw std::invalid_argument("RunConfig: dt must be positive");
    if (nu <= 0.0) throw std::invalid_argument("RunConfig: nu must be positive");
    if (picard_tol <= 0.0) throw std::invalid_argument("RunConfig: picard_tol must be positive");
    if (picard_max_iters < 1)
        throw std::invalid_argument("RunConfig: picard_max_iters must be >= 1");
    if (!initial) throw std::invalid_argument("RunConfig: initial condition not set");
    n_steps();
}

TimeStepper::TimeStepper(const RunConfig& config)
    : config_(config),
      mesh_(build_mesh(config.m)),
      cache_(mesh_),
      map_(make_dofmap(mesh_)),
      forms_(assemble_global_forms(mesh_, cache_, map_)) {
    config_.validate();
    static_matrix_ = build_static_step_matrix(forms_, config_.nu, config_.dt, mesh_, cache_, map_);
}

double TimeStepper::identity_residual(const EGField& u_old, const EGField& u_new,
                                      const Eigen::VectorXd& load) const {
    // (||u_c^{k+1}||^2 - ||u_c^k||^2)/(2 dt) + nu |||u^{k+1/2}|||^2 = (f, R u^{k+1/2}),
    // measured relative to the magnitudes of its constituent terms.
    const double dt = config_.dt;
    const auto& m = forms_.mass_cg;
    const Eigen::VectorXd c_new = u_new.dofs().head(map_.n_c);
    const Eigen::VectorXd c_old = u_old.dofs().head(map_.n_c);
    const double t_new = c_new.dot(m * c_new) / (2.0 * dt);
    const double t_old = c_old.dot(m * c_old) / (2.0 * dt);
    const Eigen::VectorXd half = 0.5 * (u_new.dofs() + u_old.dofs());
    const double t_visc = config_.nu * half.dot(forms_.a * half);
    const double t_load = load.dot(half);
    const double defect = (t_new - t_old) + t_visc - t_load;
    const double scale = std::max({std::abs(t_new), std::abs(t_old), std::abs(t_visc),
                                   std::abs(t_load)});
    return scale > 0.0 ? std::abs(defect) / scale : std::abs(defect);
}

StepResult TimeStepper::solve_with_convection(const EGField& u_old, int k,
                                              const SparseMatrix& convection,
                                              const Eigen::VectorXd& load) {
    SaddleSystem sys;
    sys.n_c = map_.n_c;
    sys.n_b = map_.n_b;
    sys.n_p = map_.n_p;
    sys.matrix = csr_sum(static_matrix_, embed_convection(convection, sys.dim()));
    sys.rhs = step_rhs(forms_, convection, config_.nu, config_.dt, map_, u_old, load, sys.dim());
    SaddleSolution sol = [&] {
        try {
            return solver_.solve(sys, map_);
        } catch (const SolveError& err) {
            throw SolveError("step " + std::to_string(k) + ": " + err.what());
        }
    }();
    StepResult result{std::move(sol.u), std::move(sol.p), 0.0, 0, 0.0, sol.mean_multiplier};
    result.identity_residual = identity_residual(u_old, result.u, load);
    return result;
}

EGField TimeStepper::initial_state() const {
    const EGField raw = interpolate_eg(config_.initial, mesh_, map_);
    return project_divergence_free(raw, mesh_, cache_, forms_, map_);
}

StepResult TimeStepper::step_linearized(const EGField& u_old, int k) {
    const double t_half = (k + 0.5) * config_.dt;
    const Eigen::VectorXd load = config_.forcing
                                     ? assemble_load(config_.forcing, t_half, mesh_, cache_, map_)
                                     : Eigen::VectorXd::Zero(map_.n_velocity());
    const SparseMatrix convection = assemble_c(u_old, mesh_, cache_, map_);
    return solve_with_convection(u_old, k, convection, load);
}

StepResult TimeStepper::step_picard(const EGField& u_old, int k) {
    const double t_half = (k + 0.5) * config_.dt;
    const Eigen::VectorXd load = config_.forcing
                                     ? assemble_load(config_.forcing, t_half, mesh_, cache_, map_)
                                     : Eigen::VectorXd::Zero(map_.n_velocity());

    EGField iterate = u_old;  // u^{k+1,0} = u^k
    StepResult result{EGField(map_), PressureField(map_), 0.0, 0, 0.0, Eigen::Vector3d::Zero()};
    for (int n = 0; n < config_.picard_max_iters; ++n) {
        // Convection frozen at u^{k+1/2,n} = (u^{k+1,n} + u^k)/2.
        EGField frozen(map_, 0.5 * (iterate.dofs() + u_old.dofs()));
        const SparseMatrix convection = assemble_c(frozen, mesh_, cache_, map_);
        StepResult next = solve_with_convection(u_old, k, convection, load);
        next.picard_iterations = n + 1;
        next.max_picard_identity_residual =
            std::max(result.max_picard_identity_residual, next.identity_residual);

        const Eigen::VectorXd inc = next.u.dofs() - iterate.dofs();
        const double inc_norm = std::sqrt(std::max(0.0, inc.dot(forms_.a * inc)));
        iterate = next.u;
        result = std::move(next);
        if (inc_norm <= config_.picard_tol) return result;
    }
    throw SolveError("step " + std::to_string(k) + ": Picard iteration did not converge within " +
                     std::to_string(config_.picard_max_iters) + " iterations");
}

TransientResult run_transient(const RunConfig& config) {
    TimeStepper stepper(config);
    const PeriodicTetMesh& mesh = stepper.mesh();
    const ElementOperatorCache& cache = stepper.cache();
    const DofMap& map = stepper.dofmap();
    const int n_steps = config.n_steps();

    EGField u = stepper.initial_state();
    PressureField p(map);

    TransientResult result{DiagnosticsLog{}, u, p};
    DiagnosticsLog& log = result.log;
    log.records.push_back({0, 0.0, energy(u, mesh, cache), helicity(u, mesh, cache),
                           max_modified_divergence(u, mesh, cache), 0.0, 0, 0.0});

    std::optional<ErrorAccumulator> errors;
    if (config.exact) errors.emplace(*config.exact, mesh, cache, config.dt);

    auto flush = [&] {
        if (!config.diagnostics_csv.empty()) write_diagnostics_csv(config.diagnostics_csv, log);
    };

    try {
        for (int k = 0; k < n_steps; ++k) {
            StepResult step = config.scheme == Scheme::Linearized
                                  ? stepper.step_linearized(u, k)
                                  : stepper.step_picard(u, k);
            if (errors) {
                EGField half(map, 0.5 * (u.dofs() + step.u.dofs()));
                errors->add_half_step(k, half, step.p);
                errors->add_step(k + 1, step.u);
            }
            u = std::move(step.u);
            p = std::move(step.p);
            log.records.push_back({k + 1, (k + 1) * config.dt, energy(u, mesh, cache),
                                   helicity(u, mesh, cache),
                                   max_modified_divergence(u, mesh, cache),
                                   step.identity_residual, step.picard_iterations,
                                   step.max_picard_identity_residual});
            if (config.checkpoint_stride > 0 && (k + 1) % config.checkpoint_stride == 0) {
                std::filesystem::create_directories(config.checkpoint_dir);
                char name[64];
                std::snprintf(name, sizeof(name), "checkpoint_k%06d.egf", k + 1);
                write_checkpoint(config.checkpoint_dir + "/" + name, k + 1, u);
            }
        }
    } catch (...) {
        flush();
        throw;
    }

    if (errors) log.errors = errors->summary();
    result.u_final = std::move(u);
    result.p_final = std::move(p);
    flush();
    return result;
}

}  // namespace egns
