#include "egns/forms.hpp"

#include <array>

#include "egns/parallel.hpp"
#include "egns/quadrature.hpp"

namespace egns {

namespace {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat4 = Eigen::Matrix4d;

Mat12 local_mass(const ElementOps& e) {
    const QuadratureRule rule = quadrature(Domain::Tet, 2);
    Mat4 scalar = Mat4::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double w = 6.0 * e.volume * rule.weights[q];
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                scalar(i, j) += w * rule.points[q][i] * rule.points[q][j];
    }
    Mat12 local = Mat12::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int d = 0; d < 3; ++d) local(3 * i + d, 3 * j + d) = scalar(i, j);
    return local;
}

void scatter_mass(const PeriodicTetMesh& mesh, const DofMap& map, int k, const Mat12& local,
                  std::vector<Triplet>& out) {
    const Tet& tet = mesh.tets[k];
    for (int i = 0; i < 4; ++i)
        for (int di = 0; di < 3; ++di)
            for (int j = 0; j < 4; ++j)
                for (int dj = 0; dj < 3; ++dj)
                    out.push_back({map.cg(tet.v[i], di), map.cg(tet.v[j], dj),
                                   local(3 * i + di, 3 * j + dj)});
}

std::array<int, 16> local_dofs(const PeriodicTetMesh& mesh, const DofMap& map, int k) {
    const Tet& tet = mesh.tets[k];
    std::array<int, 16> dof;
    for (int i = 0; i < 4; ++i)
        for (int d = 0; d < 3; ++d) dof[3 * i + d] = map.cg(tet.v[i], d);
    for (int lf = 0; lf < 4; ++lf) dof[12 + lf] = map.dg(tet.face[lf]);
    return dof;
}

void scatter_16(const std::array<int, 16>& dof, const Mat16& local, std::vector<Triplet>& out) {
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) out.push_back({dof[i], dof[j], local(i, j)});
}

Mat4 local_convection(const ElementOps& e, const Vec3& omega, const QuadratureRule& rule) {
    // C_loc[f][f'] = int_K (omega x R-basis_{f'}) . R-basis_f with the
    // global-dof scaling sign * |F| folded in; quadratic integrand.
    Mat4 local = Mat4::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double w = 6.0 * e.volume * rule.weights[q];
        Vec3 x = Vec3::Zero();
        for (int i = 0; i < 4; ++i) x += rule.points[q][i] * e.corner[i];
        std::array<Vec3, 4> psi;
        for (int lf = 0; lf < 4; ++lf)
            psi[lf] = e.face[lf].sign * e.face[lf].area * (x - e.corner[lf]) / (3.0 * e.volume);
        for (int f = 0; f < 4; ++f) {
            const Vec3 wxpsi_f = omega.cross(psi[f]);
            for (int g = 0; g < 4; ++g) local(g, f) += w * wxpsi_f.dot(psi[g]);
        }
    }
    return local;
}

void scatter_convection(const PeriodicTetMesh& mesh, const DofMap& map, int k, const Mat4& local,
                        std::vector<Triplet>& out) {
    const Tet& tet = mesh.tets[k];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out.push_back({map.dg(tet.face[i]), map.dg(tet.face[j]), local(i, j)});
}

Eigen::Vector4d local_load(const ElementOps& e, const SpaceTimeFn& f, double t,
                           const QuadratureRule& rule) {
    Eigen::Vector4d local = Eigen::Vector4d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double w = 6.0 * e.volume * rule.weights[q];
        Vec3 x = Vec3::Zero();
        for (int i = 0; i < 4; ++i) x += rule.points[q][i] * e.corner[i];
        const Vec3 fx = f(x, t);
        for (int lf = 0; lf < 4; ++lf) {
            const Vec3 psi =
                e.face[lf].sign * e.face[lf].area * (x - e.corner[lf]) / (3.0 * e.volume);
            local[lf] += w * fx.dot(psi);
        }
    }
    return local;
}

}  // namespace

SparseMatrix assemble_mass_cg(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                              const DofMap& map) {
    std::vector<Mat12> locals(mesh.n_tets());
    parallel_for(mesh.n_tets(), [&](int k) { locals[k] = local_mass(cache[k]); });
    std::vector<Triplet> triplets;
    triplets.reserve(144ul * mesh.n_tets());
    for (int k = 0; k < mesh.n_tets(); ++k) scatter_mass(mesh, map, k, locals[k], triplets);
    return SparseMatrix::from_triplets(map.n_c, map.n_c, std::move(triplets));
}

SparseMatrix assemble_mass_cg_serial(const PeriodicTetMesh& mesh,
                                     const ElementOperatorCache& cache, const DofMap& map) {
    std::vector<Triplet> triplets;
    triplets.reserve(144ul * mesh.n_tets());
    for (int k = 0; k < mesh.n_tets(); ++k) scatter_mass(mesh, map, k, local_mass(cache[k]), triplets);
    return SparseMatrix::from_triplets(map.n_c, map.n_c, std::move(triplets));
}

SparseMatrix assemble_a(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                        const DofMap& map) {
    const int n = map.n_velocity();
    std::vector<Triplet> triplets;
    triplets.reserve(256ul * mesh.n_tets());
    for (int k = 0; k < mesh.n_tets(); ++k)
        scatter_16(local_dofs(mesh, map, k), cache[k].local_a, triplets);
    return SparseMatrix::from_triplets(n, n, std::move(triplets));
}

SparseMatrix assemble_b(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                        const DofMap& map) {
    std::vector<Triplet> triplets;
    triplets.reserve(4ul * mesh.n_tets());
    for (int k = 0; k < mesh.n_tets(); ++k) {
        const ElementOps& e = cache[k];
        const Tet& tet = mesh.tets[k];
        for (int lf = 0; lf < 4; ++lf)
            triplets.push_back({k, map.dg(tet.face[lf]), e.face[lf].sign * e.face[lf].area});
    }
    return SparseMatrix::from_triplets(map.n_p, map.n_velocity(), std::move(triplets));
}

SparseMatrix assemble_c(const EGField& u, const PeriodicTetMesh& mesh,
                        const ElementOperatorCache& cache, const DofMap& map) {
    const QuadratureRule rule = quadrature(Domain::Tet, 2);
    std::vector<Mat4> locals(mesh.n_tets());
    parallel_for(mesh.n_tets(), [&](int k) {
        const Vec3 omega =
            ElementOps::curl_from_gradient(cache[k].cg_gradient(u, mesh.tets[k]));
        locals[k] = local_convection(cache[k], omega, rule);
    });
    std::vector<Triplet> triplets;
    triplets.reserve(16ul * mesh.n_tets());
    for (int k = 0; k < mesh.n_tets(); ++k) scatter_convection(mesh, map, k, locals[k], triplets);
    const int n = map.n_velocity();
    return SparseMatrix::from_triplets(n, n, std::move(triplets));
}

SparseMatrix assemble_c_serial(const EGField& u, const PeriodicTetMesh& mesh,
                               const ElementOperatorCache& cache, const DofMap& map) {
    const QuadratureRule rule = quadrature(Domain::Tet, 2);
    std::vector<Triplet> triplets;
    triplets.reserve(16ul * mesh.n_tets());
    for (int k = 0; k < mesh.n_tets(); ++k) {
        const Vec3 omega =
            ElementOps::curl_from_gradient(cache[k].cg_gradient(u, mesh.tets[k]));
        scatter_convection(mesh, map, k, local_convection(cache[k], omega, rule), triplets);
    }
    const int n = map.n_velocity();
    return SparseMatrix::from_triplets(n, n, std::move(triplets));
}

Eigen::VectorXd assemble_load(const SpaceTimeFn& f, double t, const PeriodicTetMesh& mesh,
                              const ElementOperatorCache& cache, const DofMap& map) {
    const QuadratureRule rule = quadrature(Domain::Tet, 4);
    std::vector<Eigen::Vector4d> locals(mesh.n_tets());
    parallel_for(mesh.n_tets(), [&](int k) { locals[k] = local_load(cache[k], f, t, rule); });
    Eigen::VectorXd load = Eigen::VectorXd::Zero(map.n_velocity());
    for (int k = 0; k < mesh.n_tets(); ++k)
        for (int lf = 0; lf < 4; ++lf) load[map.dg(mesh.tets[k].face[lf])] += locals[k][lf];
    return load;
}

Eigen::VectorXd assemble_load_serial(const SpaceTimeFn& f, double t, const PeriodicTetMesh& mesh,
                                     const ElementOperatorCache& cache, const DofMap& map) {
    const QuadratureRule rule = quadrature(Domain::Tet, 4);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(map.n_velocity());
    for (int k = 0; k < mesh.n_tets(); ++k) {
        const Eigen::Vector4d local = local_load(cache[k], f, t, rule);
        for (int lf = 0; lf < 4; ++lf) load[map.dg(mesh.tets[k].face[lf])] += local[lf];
    }
    return load;
}

double eval_trilinear(const EGField& v, const EGField& w, const EGField& z,
                      const PeriodicTetMesh& mesh, const ElementOperatorCache& cache) {
    const QuadratureRule rule = quadrature(Domain::Tet, 2);
    std::vector<double> partial(mesh.n_tets());
    parallel_for(mesh.n_tets(), [&](int k) {
        const ElementOps& e = cache[k];
        const Vec3 omega = ElementOps::curl_from_gradient(e.cg_gradient(v, mesh.tets[k]));
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            Vec3 x = Vec3::Zero();
            for (int i = 0; i < 4; ++i) x += rule.points[q][i] * e.corner[i];
            s += 6.0 * e.volume * rule.weights[q] *
                 omega.cross(e.rt_value(w, x)).dot(e.rt_value(z, x));
        }
        partial[k] = s;
    });
    double total = 0.0;
    for (int k = 0; k < mesh.n_tets(); ++k) total += partial[k];
    return total;
}

EGField constant_pair(const Vec3& c, const PeriodicTetMesh& mesh, const DofMap& map) {
    EGField u(map);
    for (int v = 0; v < mesh.n_vertices(); ++v) u.set_c(v, c);
    for (int f = 0; f < mesh.n_faces(); ++f) u.b(f) = c.dot(mesh.faces[f].normal);
    return u;
}

GlobalForms assemble_global_forms(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                                  const DofMap& map) {
    GlobalForms forms;
    forms.mass_cg = assemble_mass_cg(mesh, cache, map);
    forms.a = assemble_a(mesh, cache, map);
    forms.b = assemble_b(mesh, cache, map);
    forms.vertex_weights = Eigen::VectorXd::Zero(mesh.n_vertices());
    for (int k = 0; k < mesh.n_tets(); ++k)
        for (int i = 0; i < 4; ++i) forms.vertex_weights[mesh.tets[k].v[i]] += cache[k].volume / 4.0;
    return forms;
}

}  // namespace egns
