#include "egns/dofmap.hpp"

namespace egns {

DofMap make_dofmap(const PeriodicTetMesh& mesh) {
    DofMap map;
    map.n_c = 3 * mesh.n_vertices();
    map.n_b = mesh.n_faces();
    map.n_p = mesh.n_tets();
    return map;
}

}  // namespace egns
