#include "egns/diagnostics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "egns/parallel.hpp"
#include "egns/quadrature.hpp"

namespace egns {

namespace {

// Exact simplex identity: int_K (sum a_i l_i).(sum b_j l_j) = |K|/20 sum_ij (1+d_ij) a_i.b_j.
double element_energy(const ElementOps& e, const Tet& tet, const EGField& u) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            s += (1.0 + (i == j ? 1.0 : 0.0)) * u.c(tet.v[i]).dot(u.c(tet.v[j]));
    return 0.5 * e.volume / 20.0 * s;
}

double element_helicity(const ElementOps& e, const Tet& tet, const EGField& u) {
    const Vec3 omega = ElementOps::curl_from_gradient(e.cg_gradient(u, tet));
    Vec3 mean = Vec3::Zero();
    for (int i = 0; i < 4; ++i) mean += u.c(tet.v[i]);
    return e.volume * omega.dot(mean / 4.0);
}

template <class PerElement>
double sum_elements(Exec exec, const PeriodicTetMesh& mesh, PerElement&& fn) {
    std::vector<double> partial(mesh.n_tets());
    run_indexed(exec, mesh.n_tets(), [&](int k) { partial[k] = fn(k); });
    double total = 0.0;
    for (int k = 0; k < mesh.n_tets(); ++k) total += partial[k];
    return total;
}

}  // namespace

double energy(const EGField& u, const PeriodicTetMesh& mesh, const ElementOperatorCache& cache) {
    return sum_elements(Exec::Parallel, mesh,
                        [&](int k) { return element_energy(cache[k], mesh.tets[k], u); });
}

double energy_serial(const EGField& u, const PeriodicTetMesh& mesh,
                     const ElementOperatorCache& cache) {
    return sum_elements(Exec::Serial, mesh,
                        [&](int k) { return element_energy(cache[k], mesh.tets[k], u); });
}

double helicity(const EGField& u, const PeriodicTetMesh& mesh, const ElementOperatorCache& cache) {
    return sum_elements(Exec::Parallel, mesh,
                        [&](int k) { return element_helicity(cache[k], mesh.tets[k], u); });
}

double helicity_serial(const EGField& u, const PeriodicTetMesh& mesh,
                       const ElementOperatorCache& cache) {
    return sum_elements(Exec::Serial, mesh,
                        [&](int k) { return element_helicity(cache[k], mesh.tets[k], u); });
}

double triple_norm_squared(const EGField& u, const PeriodicTetMesh& mesh,
                           const ElementOperatorCache& cache) {
    return sum_elements(Exec::Parallel, mesh, [&](int k) {
        const Vec16 local = cache[k].gather(u, mesh.tets[k]);
        const Vec13 x = cache[k].modified_gradient(local);
        return x.dot(cache[k].gram * x);
    });
}

double triple_norm(const EGField& u, const PeriodicTetMesh& mesh,
                   const ElementOperatorCache& cache) {
    return std::sqrt(std::max(0.0, triple_norm_squared(u, mesh, cache)));
}

double norm_1h(const EGField& u, const PeriodicTetMesh& mesh, const ElementOperatorCache& cache) {
    const double sq = sum_elements(Exec::Parallel, mesh, [&](int k) {
        const ElementOps& e = cache[k];
        const Tet& tet = mesh.tets[k];
        const Mat3 grad = e.cg_gradient(u, tet);
        double s = e.volume * grad.squaredNorm();
        double h_K = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                h_K = std::max(h_K, (tet.corner[i] - tet.corner[j]).norm());
        for (int lf = 0; lf < 4; ++lf) {
            Vec3 mean = Vec3::Zero();
            for (int i = 0; i < 4; ++i)
                if (i != lf) mean += u.c(tet.v[i]);
            const double qb = (mean / 3.0).dot(e.face[lf].normal);
            const double jump = qb - e.face[lf].sign * u.b(e.face[lf].gid);
            s += e.face[lf].area * jump * jump / h_K;
        }
        return s;
    });
    return std::sqrt(std::max(0.0, sq));
}

double max_modified_divergence(const EGField& u, const PeriodicTetMesh& mesh,
                               const ElementOperatorCache& cache) {
    std::vector<double> partial(mesh.n_tets());
    parallel_for(mesh.n_tets(), [&](int k) { partial[k] = std::abs(cache[k].modified_divergence(u)); });
    double m = 0.0;
    for (double v : partial) m = std::max(m, v);
    return m;
}

ErrorAccumulator::ErrorAccumulator(const ExactSolution& exact, const PeriodicTetMesh& mesh,
                                   const ElementOperatorCache& cache, double dt)
    : exact_(&exact), mesh_(&mesh), cache_(&cache), dt_(dt) {}

void ErrorAccumulator::add_step(int k, const EGField& u) {
    const double t = k * dt_;
    const QuadratureRule rule = quadrature(Domain::Tet, 4);
    const double err_sq = sum_elements(Exec::Parallel, *mesh_, [&](int e) {
        const ElementOps& ops = (*cache_)[e];
        const Tet& tet = mesh_->tets[e];
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            Vec3 x = Vec3::Zero();
            Vec3 uc = Vec3::Zero();
            for (int i = 0; i < 4; ++i) {
                x += rule.points[q][i] * tet.corner[i];
                uc += rule.points[q][i] * u.c(tet.v[i]);
            }
            s += 6.0 * ops.volume * rule.weights[q] * (exact_->velocity(x, t) - uc).squaredNorm();
        }
        return s;
    });
    max_velocity_error_ = std::max(max_velocity_error_, std::sqrt(err_sq));
}

void ErrorAccumulator::add_half_step(int k, const EGField& u_half, const PressureField& p_half) {
    const double t = (k + 0.5) * dt_;
    const QuadratureRule rule = quadrature(Domain::Tet, 4);

    // Spatial mean of the exact pressure at this time, removed before comparison.
    const double p_mean = sum_elements(Exec::Parallel, *mesh_, [&](int e) {
        const ElementOps& ops = (*cache_)[e];
        const Tet& tet = mesh_->tets[e];
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            Vec3 x = Vec3::Zero();
            for (int i = 0; i < 4; ++i) x += rule.points[q][i] * tet.corner[i];
            s += 6.0 * ops.volume * rule.weights[q] * exact_->pressure(x, t);
        }
        return s;
    });

    double grad_sq = 0.0, p_sq = 0.0;
    std::vector<double> pg(mesh_->n_tets()), pp(mesh_->n_tets());
    parallel_for(mesh_->n_tets(), [&](int e) {
        const ElementOps& ops = (*cache_)[e];
        const Tet& tet = mesh_->tets[e];
        const Mat3 grad_h = ops.cg_gradient(u_half, tet);
        double sg = 0.0, sp = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            Vec3 x = Vec3::Zero();
            for (int i = 0; i < 4; ++i) x += rule.points[q][i] * tet.corner[i];
            const double w = 6.0 * ops.volume * rule.weights[q];
            sg += w * (exact_->velocity_gradient(x, t) - grad_h).squaredNorm();
            const double dp = exact_->pressure(x, t) - p_mean - p_half[e];
            sp += w * dp * dp;
        }
        pg[e] = sg;
        pp[e] = sp;
    });
    for (int e = 0; e < mesh_->n_tets(); ++e) {
        grad_sq += pg[e];
        p_sq += pp[e];
    }
    gradient_sq_sum_ += dt_ * grad_sq;
    pressure_sum_ += dt_ * std::sqrt(std::max(0.0, p_sq));
}

ErrorSummary ErrorAccumulator::summary() const {
    return {max_velocity_error_, std::sqrt(std::max(0.0, gradient_sq_sum_)), pressure_sum_};
}

double inf_sup_constant(const PeriodicTetMesh& mesh, const ElementOperatorCache& cache,
                        const DofMap& map) {
    if (map.n_velocity() > 1000)
        throw std::invalid_argument("inf_sup_constant: mesh too large for the dense estimator");

    const SparseMatrix a = assemble_a(mesh, cache, map);
    const SparseMatrix b = assemble_b(mesh, cache, map);
    const Eigen::MatrixXd A = a.to_dense();
    const Eigen::MatrixXd B = b.to_dense();
    const int n = map.n_velocity();
    const int np = map.n_p;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double lmax = es.eigenvalues().maxCoeff();
    const double cutoff = 1e-10 * lmax;
    int kernel_dim = 0;
    Eigen::MatrixXd apinv = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (es.eigenvalues()[i] <= cutoff) {
            ++kernel_dim;
            continue;
        }
        apinv += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() /
                 es.eigenvalues()[i];
    }
    if (kernel_dim != 3)
        throw std::runtime_error("inf_sup_constant: unexpected kernel dimension " +
                                 std::to_string(kernel_dim));

    // Schur complement against the pressure mass, constants projected out.
    Eigen::VectorXd vol(np);
    for (int k = 0; k < np; ++k) vol[k] = cache[k].volume;
    const Eigen::VectorXd dinv = vol.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd S = dinv.asDiagonal() * (B * apinv * B.transpose()) * dinv.asDiagonal();
    Eigen::VectorXd cdir = vol.cwiseSqrt();
    cdir.normalize();
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(np, np) - cdir * cdir.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esS(P * S * P);
    // ascending eigenvalues; slot 0 is the projected-out constant direction
    return std::sqrt(std::max(0.0, esS.eigenvalues()[1]));
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

void write_diagnostics_csv(const std::string& path, const DiagnosticsLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_diagnostics_csv: cannot open " + path);
    out << "k,t,energy,helicity,maxdiv,energy_residual\n";
    for (const StepRecord& r : log.records)
        out << r.k << ',' << fmt(r.t) << ',' << fmt(r.energy) << ',' << fmt(r.helicity) << ','
            << fmt(r.max_divergence) << ',' << fmt(r.energy_residual) << '\n';
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_sweep_csv: cannot open " + path);
    out << "nu,h,e_inf2,rate,e_grad22,rate,e_p12,rate\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& r = rows[i];
        const bool first_of_nu = i == 0 || rows[i - 1].nu != r.nu;
        out << fmt(r.nu) << ",1/" << r.m << ',' << fmt(r.errors.velocity_inf2) << ',';
        if (first_of_nu)
            out << '-';
        else
            out << fmt(convergence_rate(rows[i - 1].errors.velocity_inf2, r.errors.velocity_inf2,
                                        rows[i - 1].m, r.m));
        out << ',' << fmt(r.errors.gradient_22) << ',';
        if (first_of_nu)
            out << '-';
        else
            out << fmt(convergence_rate(rows[i - 1].errors.gradient_22, r.errors.gradient_22,
                                        rows[i - 1].m, r.m));
        out << ',' << fmt(r.errors.pressure_12) << ',';
        if (first_of_nu)
            out << '-';
        else
            out << fmt(convergence_rate(rows[i - 1].errors.pressure_12, r.errors.pressure_12,
                                        rows[i - 1].m, r.m));
        out << '\n';
    }
}

double convergence_rate(double e_coarse, double e_fine, int m_coarse, int m_fine) {
    return std::log(e_coarse / e_fine) / std::log(static_cast<double>(m_fine) / m_coarse);
}

}  // namespace egns
