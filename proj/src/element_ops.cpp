#include "egns/element_ops.hpp"

#include <cmath>
#include <stdexcept>

#include "egns/parallel.hpp"
#include "egns/quadrature.hpp"

namespace egns {

const std::array<Mat3, 4>& s_matrices() {
    static const std::array<Mat3, 4> S = [] {
        std::array<Mat3, 4> s;
        s[0] << 0, 0, 3, 0, 0, 0, 3, 0, 0;
        s[1] << 2, -1, 0, -1, 0, 0, 0, 0, 0;
        s[2] << 0, -1, 1, -1, 2, -1, 1, -1, 0;
        s[3] << 0, 0, 0, 0, 0, -1, 0, -1, 2;
        return s;
    }();
    return S;
}

void verify_s_matrices() {
    // Unnormalized reference normals keep the arithmetic exact: for the
    // oblique face, n^ S n^ / |n^|^2 = (sum of all entries) / 3.
    static const std::array<Vec3, 4> nhat = {Vec3(1, 1, 1), Vec3(-1, 0, 0), Vec3(0, -1, 0),
                                             Vec3(0, 0, -1)};
    const auto& S = s_matrices();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double v = nhat[j].dot(S[i] * nhat[j]) / nhat[j].squaredNorm();
            if (v != (i == j ? 2.0 : 0.0))
                throw std::logic_error("verify_s_matrices: n^.S.n^ != 2 delta");
        }
}

namespace {

ElementOps build_element(const PeriodicTetMesh& mesh, int k) {
    const Tet& tet = mesh.tets[k];
    ElementOps e;
    e.corner = tet.corner;
    e.v0 = tet.corner[0];
    for (int i = 0; i < 3; ++i) e.B.col(i) = tet.corner[i + 1] - tet.corner[0];
    const double det = e.B.determinant();
    if (det <= 0.0) throw std::runtime_error("ElementOperatorCache: non-positive element volume");
    e.volume = det / 6.0;
    e.invB = e.B.inverse();

    // grad lambda_0 = -B^{-T}(1,1,1); grad lambda_i = B^{-T} e_i.
    const Mat3 invT = e.invB.transpose();
    e.grad_lambda[0] = -invT * Vec3::Ones();
    for (int i = 0; i < 3; ++i) e.grad_lambda[i + 1] = invT.col(i);

    static const std::array<Vec3, 4> nhat = {Vec3(1, 1, 1), Vec3(-1, 0, 0), Vec3(0, -1, 0),
                                             Vec3(0, 0, -1)};
    for (int lf = 0; lf < 4; ++lf) {
        e.face[lf].gid = tet.face[lf];
        e.face[lf].sign = tet.sign[lf];
        e.face[lf].normal = (invT * nhat[lf]).normalized();
        int a = (lf + 1) % 4, b = (lf + 2) % 4, c = (lf + 3) % 4;
        e.face[lf].area =
            0.5 * (tet.corner[b] - tet.corner[a]).cross(tet.corner[c] - tet.corner[a]).norm();
    }

    const auto& S = s_matrices();
    for (int i = 0; i < 4; ++i) {
        e.Phi[i] = e.B * S[i] * e.B.transpose();
        e.Phi_hat[i] = e.Phi[i] / e.Phi[i].norm();
    }

    // Gram matrix in closed form:
    //   (E_pq, E_rs)_K = |K| d_pr d_qs
    //   (E_pq, B_i)_K  = (|K|/4) (Phi^_i)_pq
    //   (B_i, B_j)_K   = |K| (1 + d_ij)/20 (Phi^_i : Phi^_j)
    Mat13 G = Mat13::Zero();
    const double vol = e.volume;
    for (int a = 0; a < 9; ++a) G(a, a) = vol;
    for (int i = 0; i < 4; ++i)
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) {
                G(3 * p + q, 9 + i) = 0.25 * vol * e.Phi_hat[i](p, q);
                G(9 + i, 3 * p + q) = G(3 * p + q, 9 + i);
            }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            G(9 + i, 9 + j) = vol * (1.0 + (i == j ? 1.0 : 0.0)) / 20.0 *
                              e.Phi_hat[i].cwiseProduct(e.Phi_hat[j]).sum();
    e.gram = G;
    e.gram_llt.compute(G);
    if (e.gram_llt.info() != Eigen::Success)
        throw std::runtime_error("ElementOperatorCache: P_0^+ Gram matrix not SPD");

    // Linear map from the 16 local dofs to the rhs of the gradient solve,
    //   r_a = (grad v_c, tau_a)_K - <Q_b(v_c.n) - v_b.n, n.tau_a.n>_{dK}.
    // The boundary term vanishes for the B_i rows (n.B_i.n = 0 on dK), and
    // for the E_pq rows every integrand is constant per face.
    Mat13x16 L = Mat13x16::Zero();
    for (int vtx = 0; vtx < 4; ++vtx)
        for (int d = 0; d < 3; ++d) {
            const int col = 3 * vtx + d;
            // (grad v_c)_{pq} = sum_vtx c_{vtx,p} (grad lambda_vtx)_q
            for (int q = 0; q < 3; ++q) L(3 * d + q, col) += vol * e.grad_lambda[vtx][q];
            for (int i = 0; i < 4; ++i)
                L(9 + i, col) += 0.25 * vol * e.Phi_hat[i].row(d).dot(e.grad_lambda[vtx]);
        }
    for (int lf = 0; lf < 4; ++lf) {
        const Vec3 n = e.face[lf].normal;
        const double area = e.face[lf].area;
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q) {
                const double nn = n[p] * n[q];
                // Q_b(v_c.n) on this face is the mean of the three corner values.
                for (int vtx = 0; vtx < 4; ++vtx) {
                    if (vtx == lf) continue;  // corner lf is opposite the face
                    for (int d = 0; d < 3; ++d)
                        L(3 * p + q, 3 * vtx + d) -= area * nn * n[d] / 3.0;
                }
                L(3 * p + q, 12 + lf) += area * nn * e.face[lf].sign;
            }
    }
    e.dof_to_rhs = L;

    const Mat13x16 W = e.gram_llt.solve(L);
    Mat16 A = L.transpose() * W;
    e.local_a = 0.5 * (A + A.transpose());
    return e;
}

}  // namespace

ElementOperatorCache::ElementOperatorCache(const PeriodicTetMesh& mesh, Exec exec) {
    verify_s_matrices();
    ops_.resize(mesh.n_tets());
    run_indexed(exec, mesh.n_tets(), [&](int k) { ops_[k] = build_element(mesh, k); });
}

Vec16 ElementOps::gather(const EGField& u, const Tet& tet) const {
    Vec16 local;
    for (int vtx = 0; vtx < 4; ++vtx) local.segment<3>(3 * vtx) = u.c(tet.v[vtx]);
    for (int lf = 0; lf < 4; ++lf) local[12 + lf] = u.b(face[lf].gid);
    return local;
}

Mat3 ElementOps::p0plus_basis_tensor(int a, const Vec3& x) const {
    if (a < 9) {
        Mat3 t = Mat3::Zero();
        t(a / 3, a % 3) = 1.0;
        return t;
    }
    const int i = a - 9;
    const Vec3 xi = invB * (x - v0);
    const double lambda = i == 0 ? 1.0 - xi.sum() : xi[i - 1];
    return lambda * Phi_hat[i];
}

Mat3 ElementOps::gradient_tensor(const Vec13& coeffs, const Vec3& x) const {
    Mat3 t = Mat3::Zero();
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) t(p, q) = coeffs[3 * p + q];
    const Vec3 xi = invB * (x - v0);
    for (int i = 0; i < 4; ++i) {
        const double lambda = i == 0 ? 1.0 - xi.sum() : xi[i - 1];
        t += coeffs[9 + i] * lambda * Phi_hat[i];
    }
    return t;
}

Vec13 ElementOps::modified_gradient(const Vec16& local) const {
    return gram_llt.solve(dof_to_rhs * local);
}

double ElementOps::modified_divergence(const EGField& u) const {
    double flux = 0.0;
    for (int lf = 0; lf < 4; ++lf) flux += face[lf].sign * u.b(face[lf].gid) * face[lf].area;
    return flux / volume;
}

Vec3 ElementOps::rt_value(const EGField& u, const Vec3& x) const {
    Vec3 value = Vec3::Zero();
    for (int lf = 0; lf < 4; ++lf) {
        const double outward_flux = face[lf].sign * u.b(face[lf].gid) * face[lf].area;
        value += outward_flux * (x - corner[lf]) / (3.0 * volume);
    }
    return value;
}

Mat3 ElementOps::cg_gradient(const EGField& u, const Tet& tet) const {
    Mat3 grad = Mat3::Zero();  // grad_pq = d v_p / d x_q
    for (int vtx = 0; vtx < 4; ++vtx) grad += u.c(tet.v[vtx]) * grad_lambda[vtx].transpose();
    return grad;
}

Vec3 ElementOps::curl_from_gradient(const Mat3& g) {
    return Vec3(g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1));
}

Vec13 modified_gradient(const ElementOperatorCache& cache, const PeriodicTetMesh& mesh,
                        const EGField& u, int k) {
    return cache[k].modified_gradient(cache[k].gather(u, mesh.tets[k]));
}

double modified_divergence(const ElementOperatorCache& cache, const EGField& u, int k) {
    return cache[k].modified_divergence(u);
}

Vec3 rt_reconstruct(const ElementOperatorCache& cache, const EGField& u, int k, const Vec3& x) {
    return cache[k].rt_value(u, x);
}

std::vector<double> rt_interpolate(const PeriodicTetMesh& mesh, const VectorFn& v) {
    const QuadratureRule rule = quadrature(Domain::Triangle, 4);
    std::vector<double> flux(mesh.n_faces());
    parallel_for(mesh.n_faces(), [&](int f) {
        const Face& face = mesh.faces[f];
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec3 x = rule.points[q][0] * face.corners[0] +
                           rule.points[q][1] * face.corners[1] +
                           rule.points[q][2] * face.corners[2];
            s += rule.weights[q] * v(x).dot(face.normal);
        }
        flux[f] = 2.0 * face.area * s;
    });
    return flux;
}

}  // namespace egns
