#pragma once

#include <optional>
#include <string>
#include <vector>

#include "egns/element_ops.hpp"
#include "egns/forms.hpp"

namespace egns {

/// E_h = (1/2) ||u_c||^2, exact element-wise P1 integration.
double energy(const EGField& u, const PeriodicTetMesh& mesh, const ElementOperatorCache& cache);
double energy_serial(const EGField& u, const PeriodicTetMesh& mesh,
                     const ElementOperatorCache& cache);

/// H_h = (u_c, curl u_c); curl is elementwise constant, so the integrand is
/// linear and the centroid value integrates it exactly.
double helicity(const EGField& u, const PeriodicTetMesh& mesh, const ElementOperatorCache& cache);
double helicity_serial(const EGField& u, const PeriodicTetMesh& mesh,
                       const ElementOperatorCache& cache);

/// |||u|||^2 = sum_K ||grad_m u||_K^2 via the per-element Gram forms.
double triple_norm_squared(const EGField& u, const PeriodicTetMesh& mesh,
                           const ElementOperatorCache& cache);
double triple_norm(const EGField& u, const PeriodicTetMesh& mesh,
                   const ElementOperatorCache& cache);

/// ||u||_{1,h}^2 = ||grad u_c||^2 + sum_K h_K^{-1} ||Q_b(u_c.n) - u_b.n||^2_{dK}.
double norm_1h(const EGField& u, const PeriodicTetMesh& mesh, const ElementOperatorCache& cache);

double max_modified_divergence(const EGField& u, const PeriodicTetMesh& mesh,
                               const ElementOperatorCache& cache);

struct StepRecord {
    int k;
    double t;
    double energy;
    double helicity;
    double max_divergence;
    double energy_residual;  // relative per-step energy-identity defect
    int picard_iterations = 0;
    double max_picard_energy_residual = 0.0;
};

struct ErrorSummary {
    double velocity_inf2 = 0.0;  // max_k ||u(t^k) - u_c^k||
    double gradient_22 = 0.0;    // (dt sum_k ||grad(u - u_c)(t^{k+1/2})||^2)^{1/2}
    double pressure_12 = 0.0;    // dt sum_k ||p(t^{k+1/2}) - p_h^{k+1/2}||, zero-mean p
};

struct DiagnosticsLog {
    std::vector<StepRecord> records;
    std::optional<ErrorSummary> errors;
};

/// Exact space-time fields for error measurement and forcing construction.
struct ExactSolution {
    std::function<Vec3(const Vec3&, double)> velocity;
    std::function<Mat3(const Vec3&, double)> velocity_gradient;  // (d u_p / d x_q)
    std::function<double(const Vec3&, double)> pressure;
};

/// Online accumulator for the three discrete error norms; integer steps feed
/// add_step, half steps feed add_half_step.
class ErrorAccumulator {
  public:
    ErrorAccumulator(const ExactSolution& exact, const PeriodicTetMesh& mesh,
                     const ElementOperatorCache& cache, double dt);

    void add_step(int k, const EGField& u);  // k >= 1
    void add_half_step(int k, const EGField& u_half, const PressureField& p_half);

    ErrorSummary summary() const;

  private:
    const ExactSolution* exact_;
    const PeriodicTetMesh* mesh_;
    const ElementOperatorCache* cache_;
    double dt_;
    double max_velocity_error_ = 0.0;
    double gradient_sq_sum_ = 0.0;
    double pressure_sum_ = 0.0;
};

/// Smallest nonzero generalized singular value of b against the a-seminorm:
/// inf over zero-mean pressures of sup over velocities of b(v,q)/(|||v|| ||q||).
/// Dense computation; refuses meshes above the dof guard (m <= 4).
double inf_sup_constant(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                        const DofMap& map);

void write_diagnostics_csv(const std::string& path, const DiagnosticsLog& log);

struct SweepRow {
    double nu;
    int m;
    ErrorSummary errors;
};
/// Table-layout summary: {nu, h, e_inf2, rate, e_grad22, rate, e_p12, rate}.
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// rate = log(e_coarse/e_fine) / log(m_fine/m_coarse).
double convergence_rate(double e_coarse, double e_fine, int m_coarse, int m_fine);

}  // namespace egns
