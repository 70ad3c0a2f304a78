#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <memory>

#include "egns/forms.hpp"

namespace egns {

/// Bordered saddle-point system of one Crank-Nicolson step: velocity block
/// M^_c/dt + (nu/2) a + (1/2) c, pressure coupling -B^T / B, three Lagrange
/// multipliers for the CG mean and one for the pressure mean.
/// Unknown layout: [u (n) | p (n_p) | mu (3) | lambda (1)].
struct SaddleSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    int n_c = 0;
    int n_b = 0;
    int n_p = 0;

    int n_velocity() const { return n_c + n_b; }
    int dim() const { return n_c + n_b + n_p + 4; }
};

SaddleSystem build_step_system(const GlobalForms& forms, const SparseMatrix& convection,
                               double nu, double dt, const PeriodicTetMesh& mesh,
                               const ElementOperatorCache& cache, const DofMap& map,
                               const EGField& u_old, const Eigen::VectorXd& load);

/// The convection-independent part of the step matrix (mass, viscous,
/// pressure coupling and constraint border); reusable across a run.
SparseMatrix build_static_step_matrix(const GlobalForms& forms, double nu, double dt,
                                      const PeriodicTetMesh& mesh,
                                      const ElementOperatorCache& cache, const DofMap& map);

/// (1/2) C placed in the velocity block of the bordered system.
SparseMatrix embed_convection(const SparseMatrix& convection, int dim);

Eigen::VectorXd step_rhs(const GlobalForms& forms, const SparseMatrix& convection, double nu,
                         double dt, const DofMap& map, const EGField& u_old,
                         const Eigen::VectorXd& load, int dim);

struct SaddleSolution {
    EGField u;
    PressureField p;
    Eigen::Vector3d mean_multiplier;
    double pressure_multiplier;
    double relative_residual;
};

class SolveError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Direct sparse LU with pivoting. Throws SolveError on singular systems or
/// when the relative residual exceeds 1e-10.
SaddleSolution factor_solve(const SaddleSystem& system, const DofMap& map);

/// Same factor/solve, but the symbolic analysis (fill-reducing ordering and
/// pattern) is computed once and reused across time steps.
class StepSolver {
  public:
    StepSolver() = default;
    SaddleSolution solve(const SaddleSystem& system, const DofMap& map);

  private:
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    bool analyzed_ = false;
};

/// Shared implementation: solve, residual check, unpack.
SaddleSolution solve_with(Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu, bool& analyzed,
                          const SaddleSystem& system, const DofMap& map);

/// Plain residual-checked sparse LU solve of a square system.
Eigen::VectorXd sparse_lu_solve(const SparseMatrix& matrix, const Eigen::VectorXd& rhs);

/// Minimal l2 correction of the face dofs so that B u = 0 exactly. The time
/// stepping applies this to the interpolated initial state: analytically
/// b(u^0, q) = 0 for divergence-free data, and the per-step conservation
/// identities assume it; face quadrature alone leaves an O(h^5)-ish defect.
EGField project_divergence_free(const EGField& u, const PeriodicTetMesh& mesh,
                                const ElementOperatorCache& cache, const GlobalForms& forms,
                                const DofMap& map);

constexpr double kSolverResidualTol = 1e-10;

}  // namespace egns
