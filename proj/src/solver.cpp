#include "egns/solver.hpp"

#include <string>

namespace egns {

SparseMatrix build_static_step_matrix(const GlobalForms& forms, double nu, double dt,
                                      const PeriodicTetMesh& mesh,
                                      const ElementOperatorCache& cache, const DofMap& map) {
    if (dt <= 0.0) throw std::invalid_argument("build_step_system: dt must be positive");
    const int n = map.n_velocity();
    if (forms.a.rows() != n || forms.b.cols() != n)
        throw std::invalid_argument("build_step_system: dimension mismatch");
    const int dim = n + map.n_p + 4;
    const int pcol = n;             // pressure block start
    const int mucol = n + map.n_p;  // CG-mean multipliers
    const int lcol = mucol + 3;     // pressure-mean multiplier

    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(forms.mass_cg.nnz() + forms.a.nnz() +
                                          4 * forms.b.nnz()) +
                 8ul * mesh.n_vertices() + 2ul * map.n_p);

    auto add_csr = [&trip](const SparseMatrix& mat, double scale, int row0, int col0) {
        for (int r = 0; r < mat.rows(); ++r)
            for (int i = mat.row_ptr()[r]; i < mat.row_ptr()[r + 1]; ++i)
                trip.push_back({row0 + r, col0 + mat.col_idx()[i], scale * mat.values()[i]});
    };

    // Velocity rows: (M^_c/dt + (nu/2) A) u^{k+1} - B^T p + G^T mu.
    add_csr(forms.mass_cg, 1.0 / dt, 0, 0);
    add_csr(forms.a, 0.5 * nu, 0, 0);
    for (int r = 0; r < forms.b.rows(); ++r)
        for (int i = forms.b.row_ptr()[r]; i < forms.b.row_ptr()[r + 1]; ++i)
            trip.push_back({forms.b.col_idx()[i], pcol + r, -forms.b.values()[i]});

    // Pressure rows: B u^{k+1} + |K| lambda = 0, and the pressure-mean row.
    add_csr(forms.b, 1.0, pcol, 0);
    for (int k = 0; k < map.n_p; ++k) {
        trip.push_back({pcol + k, lcol, cache[k].volume});
        trip.push_back({lcol, pcol + k, cache[k].volume});
    }

    // CG mean constraints, rows and columns.
    for (int v = 0; v < mesh.n_vertices(); ++v)
        for (int d = 0; d < 3; ++d) {
            trip.push_back({mucol + d, map.cg(v, d), forms.vertex_weights[v]});
            trip.push_back({map.cg(v, d), mucol + d, forms.vertex_weights[v]});
        }

    return SparseMatrix::from_triplets(dim, dim, std::move(trip));
}

SparseMatrix embed_convection(const SparseMatrix& convection, int dim) {
    std::vector<Triplet> trip;
    trip.reserve(convection.nnz());
    for (int r = 0; r < convection.rows(); ++r)
        for (int i = convection.row_ptr()[r]; i < convection.row_ptr()[r + 1]; ++i)
            trip.push_back({r, convection.col_idx()[i], 0.5 * convection.values()[i]});
    return SparseMatrix::from_triplets(dim, dim, std::move(trip));
}

Eigen::VectorXd step_rhs(const GlobalForms& forms, const SparseMatrix& convection, double nu,
                         double dt, const DofMap& map, const EGField& u_old,
                         const Eigen::VectorXd& load, int dim) {
    // rhs: M^_c u^k/dt - (nu/2) A u^k - (1/2) C u^k + (f(t^{k+1/2}), R v).
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd rv =
        load - 0.5 * nu * (forms.a * u_old.dofs()) - 0.5 * (convection * u_old.dofs());
    rv.head(map.n_c) += (forms.mass_cg * u_old.dofs().head(map.n_c)) / dt;
    rhs.head(map.n_velocity()) = rv;
    return rhs;
}

SaddleSystem build_step_system(const GlobalForms& forms, const SparseMatrix& convection,
                               double nu, double dt, const PeriodicTetMesh& mesh,
                               const ElementOperatorCache& cache, const DofMap& map,
                               const EGField& u_old, const Eigen::VectorXd& load) {
    const int n = map.n_velocity();
    if (convection.rows() != n || u_old.dofs().size() != n || load.size() != n)
        throw std::invalid_argument("build_step_system: dimension mismatch");
    SaddleSystem sys;
    sys.n_c = map.n_c;
    sys.n_b = map.n_b;
    sys.n_p = map.n_p;
    sys.matrix = csr_sum(build_static_step_matrix(forms, nu, dt, mesh, cache, map),
                         embed_convection(convection, sys.dim()));
    sys.rhs = step_rhs(forms, convection, nu, dt, map, u_old, load, sys.dim());
    return sys;
}

namespace {

double checked_residual(const SparseMatrix& matrix, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& rhs) {
    const Eigen::VectorXd residual = matrix * x - rhs;
    const double bnorm = rhs.norm();
    const double rel = bnorm > 0.0 ? residual.norm() / bnorm : residual.norm();
    if (!(rel <= kSolverResidualTol))
        throw SolveError("factor_solve: relative residual " + std::to_string(rel) +
                         " exceeds tolerance");
    return rel;
}

}  // namespace

SaddleSolution solve_with(Eigen::SparseLU<Eigen::SparseMatrix<double>>& lu, bool& analyzed,
                          const SaddleSystem& system, const DofMap& map) {
    Eigen::SparseMatrix<double> mat = system.matrix.eigen_map();
    if (!analyzed) {
        lu.analyzePattern(mat);
        analyzed = true;
    }
    lu.factorize(mat);
    if (lu.info() != Eigen::Success)
        throw SolveError("factor_solve: factorization failed (" + lu.lastErrorMessage() + ")");
    const Eigen::VectorXd x = lu.solve(system.rhs);
    if (lu.info() != Eigen::Success) throw SolveError("factor_solve: substitution failed");
    const double rel = checked_residual(system.matrix, x, system.rhs);

    const int n = system.n_velocity();
    SaddleSolution sol{EGField(map, x.head(n)),
                       PressureField(Eigen::VectorXd(x.segment(n, system.n_p))),
                       x.segment<3>(n + system.n_p), x[n + system.n_p + 3], rel};
    return sol;
}

Eigen::VectorXd sparse_lu_solve(const SparseMatrix& matrix, const Eigen::VectorXd& rhs) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
        throw std::invalid_argument("sparse_lu_solve: dimension mismatch");
    Eigen::SparseMatrix<double> mat = matrix.eigen_map();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(mat);
    if (lu.info() != Eigen::Success)
        throw SolveError("sparse_lu_solve: factorization failed (" + lu.lastErrorMessage() + ")");
    const Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw SolveError("sparse_lu_solve: substitution failed");
    checked_residual(matrix, x, rhs);
    return x;
}

SaddleSolution factor_solve(const SaddleSystem& system, const DofMap& map) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    return solve_with(lu, analyzed, system, map);
}

SaddleSolution StepSolver::solve(const SaddleSystem& system, const DofMap& map) {
    return solve_with(lu_, analyzed_, system, map);
}

EGField project_divergence_free(const EGField& u, const PeriodicTetMesh& mesh,
                                const ElementOperatorCache& cache, const GlobalForms& forms,
                                const DofMap& map) {
    // Solve [B B^T, W; W^T, 0] [y; lambda] = [B u; 0] and subtract B^T y from
    // the face dofs. B^T 1 = 0 on the torus, so the volume border W makes the
    // system nonsingular; the data B u is compatible (columns of B sum to 0).
    const int np = map.n_p;
    std::vector<Triplet> trip;
    trip.reserve(4ul * np + 2ul * np);
    for (int f = 0; f < mesh.n_faces(); ++f) {
        const Face& face = mesh.faces[f];
        const double v0 = face.adj[0].sign * face.area;
        const double v1 = face.adj[1].sign * face.area;
        const int k0 = face.adj[0].tet, k1 = face.adj[1].tet;
        trip.push_back({k0, k0, v0 * v0});
        trip.push_back({k0, k1, v0 * v1});
        trip.push_back({k1, k0, v1 * v0});
        trip.push_back({k1, k1, v1 * v1});
    }
    for (int k = 0; k < np; ++k) {
        trip.push_back({k, np, cache[k].volume});
        trip.push_back({np, k, cache[k].volume});
    }
    const SparseMatrix lhs = SparseMatrix::from_triplets(np + 1, np + 1, std::move(trip));

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(np + 1);
    rhs.head(np) = forms.b * u.dofs();
    const Eigen::VectorXd y = sparse_lu_solve(lhs, rhs);
    const Eigen::VectorXd correction = forms.b.transpose_times(y.head(np));

    EGField projected = u;
    projected.dofs().tail(map.n_b) -= correction.tail(map.n_b);
    return projected;
}

}  // namespace egns
