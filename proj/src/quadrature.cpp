#include "egns/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace egns {

namespace {

struct Rule1d {
    std::vector<double> nodes;    // on [0,1]
    std::vector<double> weights;  // absorb the (1-u)^alpha factor
};

// Gauss-Jacobi rule for the weight (1-u)^alpha on [0,1] via Golub-Welsch.
// Recurrence coefficients are for monic Jacobi polynomials with beta = 0.
Rule1d gauss_jacobi(int n, int alpha) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    const double a = static_cast<double>(alpha);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + a;
        J(k, k) = (k == 0 && alpha == 0) ? 0.0 : -a * a / (s * (s + 2.0));
        if (k >= 1) {
            const double num = 4.0 * k * k * (k + a) * (k + a);
            const double den = s * s * (s + 1.0) * (s - 1.0);
            const double offdiag = std::sqrt(num / den);
            J(k, k - 1) = offdiag;
            J(k - 1, k) = offdiag;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);  // integral of (1-x)^a over [-1,1]
    Rule1d rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        const double x = es.eigenvalues()(k);
        const double w = mu0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
        rule.nodes[k] = 0.5 * (1.0 + x);
        rule.weights[k] = w / std::pow(2.0, a + 1.0);
    }
    return rule;
}

}  // namespace

QuadratureRule conical_tet_rule(int n) {
    if (n < 1) throw std::invalid_argument("conical_tet_rule: n must be >= 1");
    const Rule1d r2 = gauss_jacobi(n, 2);
    const Rule1d r1 = gauss_jacobi(n, 1);
    const Rule1d r0 = gauss_jacobi(n, 0);

    QuadratureRule rule;
    rule.domain = Domain::Tet;
    rule.degree = 2 * n - 1;
    rule.points.reserve(static_cast<std::size_t>(n) * n * n);
    rule.weights.reserve(static_cast<std::size_t>(n) * n * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const double x = r2.nodes[i];
                const double y = r1.nodes[j] * (1.0 - x);
                const double z = r0.nodes[k] * (1.0 - r2.nodes[i]) * (1.0 - r1.nodes[j]);
                rule.points.push_back({1.0 - x - y - z, x, y, z});
                rule.weights.push_back(r2.weights[i] * r1.weights[j] * r0.weights[k]);
            }
        }
    }
    return rule;
}

QuadratureRule conical_triangle_rule(int n) {
    if (n < 1) throw std::invalid_argument("conical_triangle_rule: n must be >= 1");
    const Rule1d r1 = gauss_jacobi(n, 1);
    const Rule1d r0 = gauss_jacobi(n, 0);

    QuadratureRule rule;
    rule.domain = Domain::Triangle;
    rule.degree = 2 * n - 1;
    rule.points.reserve(static_cast<std::size_t>(n) * n);
    rule.weights.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = r1.nodes[i];
            const double y = r0.nodes[j] * (1.0 - x);
            rule.points.push_back({1.0 - x - y, x, y, 0.0});
            rule.weights.push_back(r1.weights[i] * r0.weights[j]);
        }
    }
    return rule;
}

QuadratureRule quadrature(Domain domain, int degree) {
    if (degree < 1 || degree > 6)
        throw std::invalid_argument("quadrature: supported degrees are 1..6, got " +
                                    std::to_string(degree));
    const int n = (degree + 2) / 2;  // 2n-1 >= degree
    return domain == Domain::Tet ? conical_tet_rule(n) : conical_triangle_rule(n);
}

}  // namespace egns
