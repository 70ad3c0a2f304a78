#pragma once

#include "egns/dofmap.hpp"
#include "egns/fields.hpp"
#include "egns/mesh.hpp"

namespace egns {

/// Per-tet averages (1/|K|) int_K f, degree-4 quadrature.
std::vector<double> project_q0(const ScalarFn& f, const PeriodicTetMesh& mesh);
std::vector<Vec3> project_q0(const VectorFn& f, const PeriodicTetMesh& mesh);

/// Per-face averages Q_b(v . n_F) = (1/|F|) int_F v . n_F, degree-4 rule.
std::vector<double> project_qb(const VectorFn& v, const PeriodicTetMesh& mesh);

/// Interpolation into the EG space: vertex values for the CG part, face
/// averages of the normal trace for the DG part.
EGField interpolate_eg(const VectorFn& g, const PeriodicTetMesh& mesh, const DofMap& map);

/// Value of v_c at a point of a tet (barycentric coordinates must be in
/// [0,1] up to round-off) together with the element's constant curl v_c.
struct CGValue {
    Vec3 value;
    Vec3 curl;
};
CGValue eval_cg(const EGField& u, const PeriodicTetMesh& mesh, int k, const Vec3& x);

}  // namespace egns
