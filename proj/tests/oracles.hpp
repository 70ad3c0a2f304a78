// Independent oracles for the unit and acceptance tests. Everything here is
// deliberately written against different math than the library paths it
// checks: analytic integrals, brute-force enumeration, dense elimination,
// finite differences, and plain quadrature loops.
#pragma once

#include <Eigen/Dense>

#include "egns/element_ops.hpp"
#include "egns/mesh.hpp"

namespace egns::test {

/// int over the reference tet of x^a y^b z^c = a! b! c! / (a+b+c+3)!.
double exact_tet_monomial(int a, int b, int c);
/// int over the reference triangle of x^a y^b = a! b! / (a+b+2)!.
double exact_triangle_monomial(int a, int b);

/// Brute-force canonical edge enumeration (periodic identification).
long canonical_edge_count(const PeriodicTetMesh& mesh);

/// Gram matrix of the 13 P_0^+(K) basis tensors by pointwise quadrature.
Mat13 gram_by_quadrature(const ElementOps& e, int points_per_dir);

/// Right-hand side of the modified-gradient solve by pointwise volume and
/// face quadrature (no closed-form shortcuts).
Vec13 gradient_rhs_by_quadrature(const ElementOps& e, const Vec16& local, int points_per_dir);

/// Dense Gaussian elimination with partial pivoting.
Eigen::VectorXd dense_gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b);

/// High-order integral of a scalar field over the periodic unit cube,
/// composite conical rule with n points per direction on every tet.
double integrate_over_mesh(const PeriodicTetMesh& mesh, const ScalarFn& f, int points_per_dir);

/// Same, restricted to one element.
double integrate_over_element(const PeriodicTetMesh& mesh, int k, const ScalarFn& f,
                              int points_per_dir);

/// Face average of v . n_F by a high-order triangle rule.
double face_average_by_quadrature(const PeriodicTetMesh& mesh, int f, const VectorFn& v,
                                  int points_per_dir);

}  // namespace egns::test
