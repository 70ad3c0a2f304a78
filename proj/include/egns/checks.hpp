#pragma once

#include <string>
#include <vector>

#include "egns/element_ops.hpp"
#include "egns/forms.hpp"

namespace egns {

struct CheckResult {
    std::string name;
    bool pass;
    double observed;   // the measured defect or quantity
    double threshold;  // what it was compared against

    std::string line() const;
};

/// Deterministic smooth periodic trig fields for identity checks.
VectorFn random_smooth_field(unsigned seed);
struct QuadraticField {
    VectorFn value;
    ScalarFn divergence;
};
QuadraticField random_quadratic_field(unsigned seed);
EGField random_eg_field(unsigned seed, const DofMap& map);

// Element-operator identities.
CheckResult check_s_matrices();
CheckResult check_reconstruction_divergence(const PeriodicTetMesh& mesh,
                                            const ElementOperatorCache& cache, const DofMap& map,
                                            unsigned seed);
CheckResult check_commuting_reconstruction(const PeriodicTetMesh& mesh, const DofMap& map,
                                           int n_fields, unsigned seed);
CheckResult check_commuting_divergence(const PeriodicTetMesh& mesh,
                                       const ElementOperatorCache& cache, int n_fields,
                                       unsigned seed);

// Global form structure.
CheckResult check_a_symmetry(const SparseMatrix& a);
CheckResult check_a_kernel(const PeriodicTetMesh& mesh, const DofMap& map,
                           const SparseMatrix& a);
CheckResult check_c_skew(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                         const DofMap& map, int n_fields, unsigned seed);
CheckResult check_trilinear_zero(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                                 const DofMap& map, int n_fields, unsigned seed);
CheckResult check_triple_norm_vs_a(const PeriodicTetMesh& mesh,
                                   const ElementOperatorCache& cache, const DofMap& map,
                                   const SparseMatrix& a, int n_fields, unsigned seed);

/// The full runtime identity suite on one mesh.
std::vector<CheckResult> run_operator_checks(int m);

}  // namespace egns
