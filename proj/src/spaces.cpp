#include "egns/spaces.hpp"

#include <stdexcept>

#include "egns/parallel.hpp"
#include "egns/quadrature.hpp"

namespace egns {

namespace {

template <class Value, class Fn>
std::vector<Value> q0_impl(const Fn& f, const PeriodicTetMesh& mesh, const Value& zero) {
    const QuadratureRule rule = quadrature(Domain::Tet, 4);
    std::vector<Value> avg(mesh.n_tets());
    parallel_for(mesh.n_tets(), [&](int k) {
        const Tet& tet = mesh.tets[k];
        Value s = zero;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            Vec3 x = Vec3::Zero();
            for (int i = 0; i < 4; ++i) x += rule.points[q][i] * tet.corner[i];
            s += rule.weights[q] * f(x);
        }
        avg[k] = 6.0 * s;  // weights sum to 1/6; the volume cancels in the average
    });
    return avg;
}

}  // namespace

std::vector<double> project_q0(const ScalarFn& f, const PeriodicTetMesh& mesh) {
    return q0_impl(f, mesh, 0.0);
}

std::vector<Vec3> project_q0(const VectorFn& f, const PeriodicTetMesh& mesh) {
    return q0_impl(f, mesh, Vec3(Vec3::Zero()));
}

std::vector<double> project_qb(const VectorFn& v, const PeriodicTetMesh& mesh) {
    const QuadratureRule rule = quadrature(Domain::Triangle, 4);
    std::vector<double> avg(mesh.n_faces());
    parallel_for(mesh.n_faces(), [&](int f) {
        const Face& face = mesh.faces[f];
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec3 x = rule.points[q][0] * face.corners[0] +
                           rule.points[q][1] * face.corners[1] +
                           rule.points[q][2] * face.corners[2];
            s += rule.weights[q] * v(x).dot(face.normal);
        }
        avg[f] = 2.0 * s;  // weights sum to 1/2; the area cancels in the average
    });
    return avg;
}

EGField interpolate_eg(const VectorFn& g, const PeriodicTetMesh& mesh, const DofMap& map) {
    EGField u(map);
    for (int v = 0; v < mesh.n_vertices(); ++v) u.set_c(v, g(mesh.vertices[v]));
    const std::vector<double> qb = project_qb(g, mesh);
    for (int f = 0; f < mesh.n_faces(); ++f) u.b(f) = qb[f];
    return u;
}

CGValue eval_cg(const EGField& u, const PeriodicTetMesh& mesh, int k, const Vec3& x) {
    if (k < 0 || k >= mesh.n_tets()) throw std::out_of_range("eval_cg: bad tet id");
    const Tet& tet = mesh.tets[k];
    Mat3 B;
    for (int i = 0; i < 3; ++i) B.col(i) = tet.corner[i + 1] - tet.corner[0];
    const Mat3 invB = B.inverse();
    const Vec3 xi = invB * (x - tet.corner[0]);
    const std::array<double, 4> bary = {1.0 - xi.sum(), xi[0], xi[1], xi[2]};
    for (double l : bary)
        if (l < -1e-12 || l > 1.0 + 1e-12)
            throw std::invalid_argument("eval_cg: point outside element");

    CGValue out;
    out.value = Vec3::Zero();
    for (int i = 0; i < 4; ++i) out.value += bary[i] * u.c(tet.v[i]);

    const Mat3 invT = invB.transpose();
    std::array<Vec3, 4> grad_lambda;
    grad_lambda[0] = -invT * Vec3::Ones();
    for (int i = 0; i < 3; ++i) grad_lambda[i + 1] = invT.col(i);
    Mat3 grad = Mat3::Zero();
    for (int i = 0; i < 4; ++i) grad += u.c(tet.v[i]) * grad_lambda[i].transpose();
    out.curl = Vec3(grad(2, 1) - grad(1, 2), grad(0, 2) - grad(2, 0), grad(1, 0) - grad(0, 1));
    return out;
}

}  // namespace egns
