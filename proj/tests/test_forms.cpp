#include <doctest.h>

#include <random>

#include "egns/checks.hpp"
#include "egns/diagnostics.hpp"
#include "egns/forms.hpp"
#include "egns/quadrature.hpp"
#include "egns/spaces.hpp"
#include "oracles.hpp"

using namespace egns;

namespace {

struct Setup {
    PeriodicTetMesh mesh;
    ElementOperatorCache cache;
    DofMap map;
    explicit Setup(int m) : mesh(build_mesh(m)), cache(mesh), map(make_dofmap(mesh)) {}
};

}  // namespace

TEST_CASE("mass matrix: partition of unity gives total 3, SPD, analytic oracle") {
    Setup s(1);
    const SparseMatrix mass = assemble_mass_cg(s.mesh, s.cache, s.map);

    double total = 0.0;
    for (double v : mass.values()) total += v;
    CHECK(total == doctest::Approx(3.0).epsilon(1e-12));

    // Analytic per-element P1 mass oracle: |K|/20 (1 + delta_ij) per scalar pair.
    std::vector<Triplet> trip;
    for (int k = 0; k < s.mesh.n_tets(); ++k) {
        const Tet& tet = s.mesh.tets[k];
        const double vol = s.cache[k].volume;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int d = 0; d < 3; ++d)
                    trip.push_back({s.map.cg(tet.v[i], d), s.map.cg(tet.v[j], d),
                                    vol / 20.0 * (1.0 + (i == j ? 1.0 : 0.0))});
    }
    const SparseMatrix oracle = SparseMatrix::from_triplets(s.map.n_c, s.map.n_c, std::move(trip));
    REQUIRE(oracle.nnz() == mass.nnz());
    for (std::size_t i = 0; i < mass.values().size(); ++i)
        CHECK(mass.values()[i] == doctest::Approx(oracle.values()[i]).epsilon(1e-14));
}

TEST_CASE("mass matrix on m=2 is symmetric positive definite") {
    Setup s(2);
    const SparseMatrix mass = assemble_mass_cg(s.mesh, s.cache, s.map);
    const Eigen::MatrixXd dense = mass.to_dense();
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("a: constant pairs in the kernel, exactly symmetric") {
    Setup s(2);
    const SparseMatrix a = assemble_a(s.mesh, s.cache, s.map);
    CHECK(check_a_symmetry(a).pass);
    CHECK(check_a_kernel(s.mesh, s.map, a).pass);
}

TEST_CASE("a: global linear field with matching b-part gives |Omega| |grad|^2") {
    Setup s(2);
    // Periodic seams exclude non-constant global linears; emulate by the
    // element-level identity instead: v^T A v summed from local forms equals
    // the element-wise |grad_m|^2 oracle for random fields.
    const EGField u = random_eg_field(7, s.map);
    const SparseMatrix a = assemble_a(s.mesh, s.cache, s.map);
    double oracle = 0.0;
    for (int k = 0; k < s.mesh.n_tets(); ++k) {
        const Vec13 x = modified_gradient(s.cache, s.mesh, u, k);
        oracle += x.dot(s.cache[k].gram * x);
    }
    const double via_a = u.dofs().dot(a * u.dofs());
    CHECK(via_a == doctest::Approx(oracle).epsilon(1e-11));
}

TEST_CASE("a is PSD with a 3-dimensional kernel on the torus") {
    Setup s(2);
    const SparseMatrix a = assemble_a(s.mesh, s.cache, s.map);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.to_dense());
    const double lmax = es.eigenvalues().maxCoeff();
    int near_zero = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        CHECK(es.eigenvalues()[i] >= -1e-12 * lmax);
        if (es.eigenvalues()[i] <= 1e-10 * lmax) ++near_zero;
    }
    CHECK(near_zero == 3);
}

TEST_CASE("b: row entries are signed face areas; CG columns vanish") {
    Setup s(2);
    const SparseMatrix b = assemble_b(s.mesh, s.cache, s.map);
    for (int r = 0; r < b.rows(); ++r) {
        double surface = 0.0;
        for (int i = b.row_ptr()[r]; i < b.row_ptr()[r + 1]; ++i) {
            CHECK(b.col_idx()[i] >= s.map.n_c);
            surface += std::abs(b.values()[i]);
        }
        double expected = 0.0;
        for (int lf = 0; lf < 4; ++lf) expected += s.cache[r].face[lf].area;
        CHECK(surface == doctest::Approx(expected).epsilon(1e-13));
    }

    // B applied to the interpolant of (x,0,0): q-weighted divergence 1 per tet.
    const VectorFn v = [](const Vec3& x) -> Vec3 { return {x[0], 0.0, 0.0}; };
    const EGField u = interpolate_eg(v, s.mesh, s.map);
    const Eigen::VectorXd bu = b * u.dofs();
    for (int k = 0; k < s.mesh.n_tets(); ++k) {
        bool seam_free = true;
        for (int lf = 0; lf < 4; ++lf) {
            Vec3 centroid = Vec3::Zero();
            for (int i = 0; i < 4; ++i)
                if (i != lf) centroid += s.mesh.tets[k].corner[i] / 3.0;
            seam_free = seam_free && centroid.maxCoeff() < 1.0 - 1e-12;
        }
        if (seam_free) CHECK(bu[k] == doctest::Approx(s.cache[k].volume).epsilon(1e-11));
    }

    // B^T applied to p = 1 telescopes to zero on the torus.
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.map.n_p);
    CHECK(b.transpose_times(ones).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("convection matrix: zero for constant CG part, skew for random fields") {
    Setup s(2);
    EGField constant(s.map);
    for (int v = 0; v < s.mesh.n_vertices(); ++v) constant.set_c(v, Vec3(1.0, 2.0, -0.5));
    const SparseMatrix c0 = assemble_c(constant, s.mesh, s.cache, s.map);
    CHECK(Eigen::Map<const Eigen::VectorXd>(c0.values().data(), c0.nnz()).cwiseAbs().maxCoeff() ==
          0.0);

    CHECK(check_c_skew(s.mesh, s.cache, s.map, 10, 31).pass);
}

TEST_CASE("convection block only couples face dofs") {
    Setup s(2);
    const EGField u = random_eg_field(3, s.map);
    const SparseMatrix c = assemble_c(u, s.mesh, s.cache, s.map);
    for (int r = 0; r < s.map.n_c; ++r) CHECK(c.row_ptr()[r + 1] == c.row_ptr()[r]);
    for (int r = s.map.n_c; r < c.rows(); ++r)
        for (int i = c.row_ptr()[r]; i < c.row_ptr()[r + 1]; ++i)
            CHECK(c.col_idx()[i] >= s.map.n_c);
}

TEST_CASE("single-element convection block matches a pointwise quadrature oracle") {
    // One reference tet, omega = (0,0,1), hand-picked fluxes.
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

    // CG part chosen so curl u_c = (0,0,1): u_c = (0, x, 0) has that curl,
    // but a one-vertex fake mesh cannot host it; instead check the local
    // kernel directly through eval of the RT basis against a z-curl.
    const Vec3 omega(0.0, 0.0, 1.0);
    const Eigen::Vector4d fluxes(0.3, -1.2, 0.5, 0.7);  // mean traces v_F per local face

    // Oracle: 4x4 block by dense quadrature with an independent rule.
    const QuadratureRule rule = conical_tet_rule(3);
    Eigen::Matrix4d oracle = Eigen::Matrix4d::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        Vec3 x = Vec3::Zero();
        for (int i = 0; i < 4; ++i) x += rule.points[q][i] * tet.corner[i];
        const double w = 6.0 * e.volume * rule.weights[q];
        for (int f = 0; f < 4; ++f)
            for (int g = 0; g < 4; ++g) {
                const Vec3 psi_f =
                    e.face[f].sign * e.face[f].area * (x - tet.corner[f]) / (3.0 * e.volume);
                const Vec3 psi_g =
                    e.face[g].sign * e.face[g].area * (x - tet.corner[g]) / (3.0 * e.volume);
                oracle(g, f) += w * omega.cross(psi_f).dot(psi_g);
            }
    }

    // c(omega-field, w, z) with w, z spanning the face dofs must match
    // z^T C w; reconstruct via eval_trilinear-style sums on this element.
    const DofMap fake{3, 4, 1};
    double worst = 0.0;
    for (int f = 0; f < 4; ++f)
        for (int g = 0; g < 4; ++g) {
            EGField w(fake), z(fake);
            w.b(f) = fluxes[f];
            z.b(g) = 1.0;
            // direct quadrature of (omega x R w) . R z, degree-2 rule
            const QuadratureRule r2 = quadrature(Domain::Tet, 2);
            double val = 0.0;
            for (std::size_t q = 0; q < r2.size(); ++q) {
                Vec3 x = Vec3::Zero();
                for (int i = 0; i < 4; ++i) x += r2.points[q][i] * tet.corner[i];
                val += 6.0 * e.volume * r2.weights[q] *
                       omega.cross(e.rt_value(w, x)).dot(e.rt_value(z, x));
            }
            worst = std::max(worst, std::abs(val - oracle(g, f) * fluxes[f]));
        }
    CHECK(worst <= 1e-13);
}

TEST_CASE("load vector: zero forcing, constant-pair pairing, trig oracle") {
    Setup s(2);
    const SpaceTimeFn zero = [](const Vec3&, double) { return Vec3::Zero(); };
    CHECK(assemble_load(zero, 0.0, s.mesh, s.cache, s.map).cwiseAbs().maxCoeff() == 0.0);

    // (f, R v) for the constant pair v = {c, Q_b(c.n)} equals c . int f.
    const SpaceTimeFn fconst = [](const Vec3&, double) { return Vec3(1.0, 0.0, 0.0); };
    const Eigen::VectorXd load = assemble_load(fconst, 0.0, s.mesh, s.cache, s.map);
    CHECK(load.head(s.map.n_c).cwiseAbs().maxCoeff() == 0.0);
    for (const Vec3& c : {Vec3(1, 0, 0), Vec3(0.5, -2.0, 3.0)}) {
        const EGField v = constant_pair(c, s.mesh, s.map);
        CHECK(load.dot(v.dofs()) == doctest::Approx(c[0]).epsilon(1e-12));
    }

    // Trig forcing: (f, R v) for random v against a degree-9 quadrature oracle.
    const SpaceTimeFn trig = [](const Vec3& x, double) -> Vec3 {
        return {std::sin(2 * M_PI * x[1]), std::cos(2 * M_PI * x[2]),
                std::sin(2 * M_PI * x[0]) * std::cos(2 * M_PI * x[1])};
    };
    const Eigen::VectorXd trig_load = assemble_load(trig, 0.0, s.mesh, s.cache, s.map);
    const EGField v = random_eg_field(8, s.map);
    const double pairing = trig_load.dot(v.dofs());
    const ScalarFn integrand = [&](const Vec3& x) {
        const PointLocation loc = locate_point(s.mesh, x);
        return trig(x, 0.0).dot(rt_reconstruct(s.cache, v, loc.tet, x));
    };
    const double oracle = test::integrate_over_mesh(s.mesh, integrand, 5);
    CHECK(std::abs(pairing - oracle) <= 1e-6);
}

TEST_CASE("eval_trilinear: skew identities and matrix cross-check") {
    Setup s(2);
    CHECK(check_trilinear_zero(s.mesh, s.cache, s.map, 10, 17).pass);

    const EGField v = random_eg_field(100, s.map);
    const EGField w = random_eg_field(101, s.map);
    const EGField z = random_eg_field(102, s.map);
    const double cvwz = eval_trilinear(v, w, z, s.mesh, s.cache);
    CHECK(cvwz == doctest::Approx(-eval_trilinear(v, z, w, s.mesh, s.cache)).epsilon(1e-12));

    const SparseMatrix c = assemble_c(v, s.mesh, s.cache, s.map);
    CHECK(cvwz == doctest::Approx(z.dofs().dot(c * w.dofs())).epsilon(1e-12));
}

TEST_CASE("|||u|||^2 equals u^T A u") {
    Setup s(2);
    const SparseMatrix a = assemble_a(s.mesh, s.cache, s.map);
    CHECK(check_triple_norm_vs_a(s.mesh, s.cache, s.map, a, 5, 23).pass);
}
