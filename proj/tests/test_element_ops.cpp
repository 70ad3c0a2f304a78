#include <doctest.h>

#include <random>

#include "egns/checks.hpp"
#include "egns/element_ops.hpp"
#include "egns/quadrature.hpp"
#include "egns/spaces.hpp"
#include "oracles.hpp"

using namespace egns;

namespace {

// A random positively-oriented tet wrapped in a one-element mesh container.
PeriodicTetMesh random_tet_mesh(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    PeriodicTetMesh mesh;
    mesh.m = 1;
    Tet tet;
    for (;;) {
        for (int i = 0; i < 4; ++i) tet.corner[i] = Vec3(dist(rng), dist(rng), dist(rng));
        Mat3 B;
        for (int i = 0; i < 3; ++i) B.col(i) = tet.corner[i + 1] - tet.corner[0];
        if (B.determinant() > 0.05) break;
    }
    tet.v = {0, 0, 0, 0};
    tet.face = {0, 1, 2, 3};
    tet.sign = {1, 1, 1, 1};
    mesh.tets.push_back(tet);
    mesh.vertices.assign(1, Vec3::Zero());
    for (int lf = 0; lf < 4; ++lf) {
        Face face;
        face.adj[0] = {0, lf, 1.0};
        face.adj[1] = {0, lf, -1.0};
        mesh.faces.push_back(face);
    }
    return mesh;
}

Vec16 random_local(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vec16 local;
    for (int i = 0; i < 16; ++i) local[i] = dist(rng);
    return local;
}

}  // namespace

TEST_CASE("S matrices satisfy n^.S_i.n^ = 2 delta_ij exactly") {
    CHECK_NOTHROW(verify_s_matrices());
    CHECK(check_s_matrices().pass);
}

TEST_CASE("reference element: Phi_i = S_i and B_i normal-normal traces vanish") {
    PeriodicTetMesh mesh;
    mesh.m = 1;
    Tet tet;
    tet.corner = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    tet.v = {0, 0, 0, 0};
    tet.face = {0, 1, 2, 3};
    tet.sign = {1, 1, 1, 1};
    mesh.tets.push_back(tet);
    mesh.vertices.assign(1, Vec3::Zero());
    for (int lf = 0; lf < 4; ++lf) {
        Face face;
        face.adj[0] = {0, lf, 1.0};
        face.adj[1] = {0, lf, -1.0};
        mesh.faces.push_back(face);
    }
    const ElementOperatorCache cache(mesh);
    const ElementOps& e = cache[0];
    const auto& S = s_matrices();
    for (int i = 0; i < 4; ++i) CHECK((e.Phi[i] - S[i]).cwiseAbs().maxCoeff() <= 1e-14);

    // n.B_i.n on face i: lambda_i vanishes there, so the trace is zero at
    // any face point; sample the centroid.
    for (int i = 0; i < 4; ++i) {
        Vec3 centroid = Vec3::Zero();
        for (int j = 0; j < 4; ++j)
            if (j != i) centroid += tet.corner[j] / 3.0;
        const Vec3 xi = e.invB * (centroid - e.v0);
        const double lambda = i == 0 ? 1.0 - xi.sum() : xi[i - 1];
        const Vec3 n = e.face[i].normal;
        CHECK(std::abs(lambda * n.dot(e.Phi[i] * n)) <= 1e-14);
    }
}

TEST_CASE("n.B_i.n vanishes on the whole boundary (random tets)") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const PeriodicTetMesh mesh = random_tet_mesh(seed);
        const ElementOperatorCache cache(mesh);
        const ElementOps& e = cache[0];
        const QuadratureRule rule = conical_triangle_rule(3);
        for (int lf = 0; lf < 4; ++lf) {
            std::array<Vec3, 3> corners;
            int n = 0;
            for (int j = 0; j < 4; ++j)
                if (j != lf) corners[n++] = e.corner[j];
            for (std::size_t q = 0; q < rule.size(); ++q) {
                Vec3 x = rule.points[q][0] * corners[0] + rule.points[q][1] * corners[1] +
                         rule.points[q][2] * corners[2];
                const Vec3 xi = e.invB * (x - e.v0);
                for (int i = 0; i < 4; ++i) {
                    const double lambda = i == 0 ? 1.0 - xi.sum() : xi[i - 1];
                    const Vec3 nrm = e.face[lf].normal;
                    CHECK(std::abs(lambda * nrm.dot(e.Phi[i] * nrm)) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("closed-form Gram matrix matches the quadrature oracle on random tets") {
    for (unsigned seed : {11u, 12u, 13u, 14u}) {
        const PeriodicTetMesh mesh = random_tet_mesh(seed);
        const ElementOperatorCache cache(mesh);
        const Mat13 oracle = test::gram_by_quadrature(cache[0], 3);
        const double scale = oracle.cwiseAbs().maxCoeff();
        CHECK((cache[0].gram - oracle).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("Gram matrix is SPD and the normal-normal trace identity holds") {
    const PeriodicTetMesh mesh = build_mesh(2);
    const ElementOperatorCache cache(mesh);
    for (int k = 0; k < mesh.n_tets(); ++k) {
        const ElementOps& e = cache[k];
        Eigen::SelfAdjointEigenSolver<Mat13> es(e.gram);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        // n_j . Phi_i . n_j = 2 delta_ij / |B^{-T} n^_j|^2
        static const std::array<Vec3, 4> nhat = {Vec3(1, 1, 1), Vec3(-1, 0, 0), Vec3(0, -1, 0),
                                                 Vec3(0, 0, -1)};
        const Mat3 invT = e.invB.transpose();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double denom = (invT * nhat[j].normalized()).squaredNorm();
                const double expected = i == j ? 2.0 / denom : 0.0;
                const Vec3 n = e.face[j].normal;
                CHECK(n.dot(e.Phi[i] * n) == doctest::Approx(expected).epsilon(1e-11));
            }
    }
}

TEST_CASE("RT0 basis unisolvence: unit flux through own face, zero through others") {
    const PeriodicTetMesh mesh = random_tet_mesh(21);
    const ElementOperatorCache cache(mesh);
    const ElementOps& e = cache[0];
    const QuadratureRule rule = conical_triangle_rule(2);
    const DofMap fake{3, 4, 1};
    for (int f = 0; f < 4; ++f) {
        EGField u(fake);
        u.b(f) = 1.0;  // one unit of mean normal trace on face f
        for (int lf = 0; lf < 4; ++lf) {
            std::array<Vec3, 3> corners;
            int n = 0;
            for (int j = 0; j < 4; ++j)
                if (j != lf) corners[n++] = e.corner[j];
            double flux = 0.0;
            for (std::size_t q = 0; q < rule.size(); ++q) {
                Vec3 x = rule.points[q][0] * corners[0] + rule.points[q][1] * corners[1] +
                         rule.points[q][2] * corners[2];
                flux += 2.0 * e.face[lf].area * rule.weights[q] *
                        e.rt_value(u, x).dot(e.face[lf].normal);
            }
            const double expected = lf == f ? e.face[f].area : 0.0;
            CHECK(flux == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("modified gradient: linear CG part with matching face averages") {
    const PeriodicTetMesh mesh = random_tet_mesh(31);
    const ElementOperatorCache cache(mesh);
    const ElementOps& e = cache[0];
    const DofMap fake{12, 4, 1};

    // v_c linear: v(x) = L x + c, with v_b = face averages of v_c . n.
    Mat3 L;
    L << 0.5, -1.0, 2.0, 0.25, 0.0, -0.5, 1.0, 1.0, 0.125;
    const Vec3 c0(0.2, -0.4, 0.9);
    Vec16 local;
    for (int vtx = 0; vtx < 4; ++vtx) local.segment<3>(3 * vtx) = L * e.corner[vtx] + c0;
    for (int lf = 0; lf < 4; ++lf) {
        Vec3 mean = Vec3::Zero();
        for (int j = 0; j < 4; ++j)
            if (j != lf) mean += (L * e.corner[j] + c0) / 3.0;
        // global dof stores the trace against n_F = sign * n_K
        local[12 + lf] = e.face[lf].sign * mean.dot(e.face[lf].normal);
    }

    const Vec13 x = e.modified_gradient(local);
    // grad_m v = grad v_c exactly: E-part = L, B-part = 0.
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) CHECK(x[3 * p + q] == doctest::Approx(L(p, q)).epsilon(1e-11));
    for (int i = 0; i < 4; ++i) CHECK(std::abs(x[9 + i]) <= 1e-11);

    // Constant pair: gradient vanishes.
    Vec16 const_local;
    for (int vtx = 0; vtx < 4; ++vtx) const_local.segment<3>(3 * vtx) = c0;
    for (int lf = 0; lf < 4; ++lf)
        const_local[12 + lf] = e.face[lf].sign * c0.dot(e.face[lf].normal);
    CHECK(e.modified_gradient(const_local).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("modified gradient matches the dense quadrature oracle on random data") {
    for (unsigned seed : {41u, 42u, 43u, 44u, 45u}) {
        const PeriodicTetMesh mesh = random_tet_mesh(seed);
        const ElementOperatorCache cache(mesh);
        const ElementOps& e = cache[0];
        const Vec16 local = random_local(seed + 100);

        const Mat13 gram = test::gram_by_quadrature(e, 3);
        const Vec13 rhs = test::gradient_rhs_by_quadrature(e, local, 3);
        const Eigen::VectorXd oracle = test::dense_gauss_solve(gram, rhs);

        const Vec13 x = e.modified_gradient(local);
        CHECK((x - oracle).cwiseAbs().maxCoeff() <= 1e-11);
    }
}

TEST_CASE("modified divergence equals the signed flux sum (brute force oracle)") {
    const PeriodicTetMesh mesh = build_mesh(2);
    const DofMap map = make_dofmap(mesh);
    const ElementOperatorCache cache(mesh);
    const EGField u = random_eg_field(99, map);
    for (int k = 0; k < mesh.n_tets(); ++k) {
        const Tet& tet = mesh.tets[k];
        double flux = 0.0;
        for (int lf = 0; lf < 4; ++lf)
            flux += tet.sign[lf] * u.b(tet.face[lf]) * mesh.faces[tet.face[lf]].area;
        const double vol = 1.0 / 48.0;
        CHECK(modified_divergence(cache, u, k) == doctest::Approx(flux / vol).epsilon(1e-12));
        // zero b-part => zero divergence
    }
    EGField zero_b(map);
    for (int v = 0; v < mesh.n_vertices(); ++v) zero_b.set_c(v, Vec3(1.0, -2.0, 0.5));
    for (int k = 0; k < mesh.n_tets(); ++k)
        CHECK(modified_divergence(cache, zero_b, k) == 0.0);
}

TEST_CASE("reconstruction of a constant pair is that constant") {
    const PeriodicTetMesh mesh = build_mesh(2);
    const DofMap map = make_dofmap(mesh);
    const ElementOperatorCache cache(mesh);
    const Vec3 c(0.7, -0.3, 1.1);
    const EGField u = constant_pair(c, mesh, map);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int k = 0; k < mesh.n_tets(); ++k) {
        // random barycentric point
        Vec3 x = Vec3::Zero();
        double l0 = dist(rng), l1 = dist(rng) * (1 - l0), l2 = dist(rng) * (1 - l0 - l1);
        const double bary[4] = {l0, l1, l2, 1 - l0 - l1 - l2};
        for (int i = 0; i < 4; ++i) x += bary[i] * mesh.tets[k].corner[i];
        CHECK((rt_reconstruct(cache, u, k, x) - c).norm() <= 1e-12);
    }
}

TEST_CASE("div(Rv) equals the modified divergence for random fields") {
    const PeriodicTetMesh mesh = build_mesh(2);
    const DofMap map = make_dofmap(mesh);
    const ElementOperatorCache cache(mesh);
    CHECK(check_reconstruction_divergence(mesh, cache, map, 77).pass);
}

TEST_CASE("face fluxes of Rv recomputed by quadrature equal v_F |F|") {
    const PeriodicTetMesh mesh = build_mesh(2);
    const DofMap map = make_dofmap(mesh);
    const ElementOperatorCache cache(mesh);
    const EGField u = random_eg_field(55, map);
    const QuadratureRule rule = conical_triangle_rule(2);
    for (int k = 0; k < mesh.n_tets(); ++k) {
        const ElementOps& e = cache[k];
        for (int lf = 0; lf < 4; ++lf) {
            std::array<Vec3, 3> corners;
            int n = 0;
            for (int j = 0; j < 4; ++j)
                if (j != lf) corners[n++] = e.corner[j];
            double flux = 0.0;  // flux w.r.t. the canonical normal n_F
            for (std::size_t q = 0; q < rule.size(); ++q) {
                Vec3 x = rule.points[q][0] * corners[0] + rule.points[q][1] * corners[1] +
                         rule.points[q][2] * corners[2];
                flux += 2.0 * e.face[lf].area * rule.weights[q] * e.face[lf].sign *
                        e.rt_value(u, x).dot(e.face[lf].normal);
            }
            const int gf = mesh.tets[k].face[lf];
            CHECK(flux ==
                  doctest::Approx(u.b(gf) * mesh.faces[gf].area).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("commuting identity R(Pi_h v) = r_h v for smooth fields") {
    const PeriodicTetMesh mesh = build_mesh(2);
    const DofMap map = make_dofmap(mesh);
    CHECK(check_commuting_reconstruction(mesh, map, 20, 123).pass);
}

TEST_CASE("commuting divergence identity for quadratic fields") {
    const PeriodicTetMesh mesh = build_mesh(2);
    const ElementOperatorCache cache(mesh);
    CHECK(check_commuting_divergence(mesh, cache, 20, 321).pass);
}

TEST_CASE("rt_interpolate of quadratics converges at first order") {
    const QuadraticField v = random_quadratic_field(17);
    double errors[2];
    int idx = 0;
    for (int m : {4, 8}) {
        const PeriodicTetMesh mesh = build_mesh(m);
        // Per-element RT interpolant on unwrapped faces (v is not periodic),
        // measured in L2 against v by mid-order quadrature.
        const QuadratureRule face_rule = conical_triangle_rule(3);
        const QuadratureRule vol_rule = conical_tet_rule(3);
        const ElementOperatorCache cache(mesh);
        double err_sq = 0.0;
        for (int k = 0; k < mesh.n_tets(); ++k) {
            const ElementOps& e = cache[k];
            std::array<double, 4> flux{};
            for (int lf = 0; lf < 4; ++lf) {
                std::array<Vec3, 3> corners;
                int n = 0;
                for (int j = 0; j < 4; ++j)
                    if (j != lf) corners[n++] = e.corner[j];
                for (std::size_t q = 0; q < face_rule.size(); ++q) {
                    Vec3 x = face_rule.points[q][0] * corners[0] +
                             face_rule.points[q][1] * corners[1] +
                             face_rule.points[q][2] * corners[2];
                    flux[lf] += 2.0 * e.face[lf].area * face_rule.weights[q] *
                                v.value(x).dot(e.face[lf].normal);
                }
            }
            for (std::size_t q = 0; q < vol_rule.size(); ++q) {
                Vec3 x = Vec3::Zero();
                for (int i = 0; i < 4; ++i) x += vol_rule.points[q][i] * e.corner[i];
                Vec3 rh = Vec3::Zero();
                for (int lf = 0; lf < 4; ++lf)
                    rh += flux[lf] * (x - e.corner[lf]) / (3.0 * e.volume);
                err_sq += 6.0 * e.volume * vol_rule.weights[q] * (v.value(x) - rh).squaredNorm();
            }
        }
        errors[idx++] = std::sqrt(err_sq);
    }
    const double rate = std::log(errors[0] / errors[1]) / std::log(2.0);
    CHECK(rate >= 0.9);
    CHECK(rate <= 1.1);
}

TEST_CASE("element cache: serial and parallel builds agree bitwise") {
    const PeriodicTetMesh mesh = build_mesh(2);
    const ElementOperatorCache par(mesh, Exec::Parallel);
    const ElementOperatorCache ser(mesh, Exec::Serial);
    for (int k = 0; k < mesh.n_tets(); ++k) {
        CHECK((par[k].gram - ser[k].gram).cwiseAbs().maxCoeff() == 0.0);
        CHECK((par[k].local_a - ser[k].local_a).cwiseAbs().maxCoeff() == 0.0);
        CHECK((par[k].dof_to_rhs - ser[k].dof_to_rhs).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("Gram condition numbers stay uniformly bounded under refinement") {
    double max_cond[3];
    int idx = 0;
    for (int m : {1, 2, 4}) {
        const PeriodicTetMesh mesh = build_mesh(m);
        const ElementOperatorCache cache(mesh);
        double worst = 0.0;
        for (int k = 0; k < mesh.n_tets(); ++k) {
            Eigen::SelfAdjointEigenSolver<Mat13> es(cache[k].gram);
            worst = std::max(worst, es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff());
        }
        max_cond[idx++] = worst;
    }
    CHECK(max_cond[1] / max_cond[0] <= 2.0);
    CHECK(max_cond[2] / max_cond[1] <= 2.0);
}
