#pragma once

#include <Eigen/Dense>

#include "egns/element_ops.hpp"
#include "egns/sparse.hpp"

namespace egns {

using SpaceTimeFn = std::function<Vec3(const Vec3&, double)>;

/// Global operators that stay fixed over a transient run. The convection
/// block C(u^k) is rebuilt every step via assemble_c.
struct GlobalForms {
    SparseMatrix mass_cg;  // n_c x n_c, SPD
    SparseMatrix a;        // n x n, symmetric PSD, constant pairs in the kernel
    SparseMatrix b;        // n_p x n, nonzero only on face columns
    Eigen::VectorXd vertex_weights;  // integral of each scalar P1 basis function
};

GlobalForms assemble_global_forms(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                                  const DofMap& map);

// Each kernel has an OpenMP version (per-element locals computed in
// parallel, scattered serially in element order) and a serial reference;
// the two produce bit-identical matrices.
SparseMatrix assemble_mass_cg(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                              const DofMap& map);
SparseMatrix assemble_mass_cg_serial(const PeriodicTetMesh& mesh,
                                     const ElementOperatorCache& cache, const DofMap& map);

// a and b are pure scatters of cached per-element data; the parallel kernel
// behind them is the ElementOperatorCache build.
SparseMatrix assemble_a(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                        const DofMap& map);
SparseMatrix assemble_b(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                        const DofMap& map);

/// Convection matrix of c(u, ., .): n x n with entries only in the face
/// block, exactly skew-symmetric. Entry (i, j) tests basis j against basis i:
/// z^T C w = c(u, w, z).
SparseMatrix assemble_c(const EGField& u, const PeriodicTetMesh& mesh,
                        const ElementOperatorCache& cache, const DofMap& map);
SparseMatrix assemble_c_serial(const EGField& u, const PeriodicTetMesh& mesh,
                               const ElementOperatorCache& cache, const DofMap& map);

/// Load vector (f(t), R v): entries only on face dofs, degree-4 quadrature.
Eigen::VectorXd assemble_load(const SpaceTimeFn& f, double t, const PeriodicTetMesh& mesh,
                              const ElementOperatorCache& cache, const DofMap& map);
Eigen::VectorXd assemble_load_serial(const SpaceTimeFn& f, double t, const PeriodicTetMesh& mesh,
                                     const ElementOperatorCache& cache, const DofMap& map);

/// c(v, w, z) evaluated directly by element-wise quadrature.
double eval_trilinear(const EGField& v, const EGField& w, const EGField& z,
                      const PeriodicTetMesh& mesh, const ElementOperatorCache& cache);

/// Dof vector of the constant pair {c, Q_b(c . n)}; spans the kernel of a.
EGField constant_pair(const Vec3& c, const PeriodicTetMesh& mesh, const DofMap& map);

}  // namespace egns
