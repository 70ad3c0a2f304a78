#pragma once

#include "egns/mesh.hpp"

namespace egns {

/// Global indexing for V_h (3 CG dofs per canonical vertex followed by one
/// DG dof per canonical face) and Q_h (one pressure dof per tet).
struct DofMap {
    int n_c = 0;  // CG velocity dofs
    int n_b = 0;  // DG face dofs
    int n_p = 0;  // pressure dofs

    int n_velocity() const { return n_c + n_b; }

    int cg(int vertex, int comp) const { return 3 * vertex + comp; }
    int dg(int face) const { return n_c + face; }
};

DofMap make_dofmap(const PeriodicTetMesh& mesh);

}  // namespace egns
