#include "egns/exact_solutions.hpp"

#include <cmath>

namespace egns {

SpaceTimeFn manufactured_forcing(const AnalyticSolution& exact, double nu) {
    return [exact, nu](const Vec3& x, double t) -> Vec3 {
        return exact.u_t(x, t) - nu * exact.lap_u(x, t) +
               exact.curl_u(x, t).cross(exact.u(x, t)) + exact.grad_p(x, t);
    };
}

AnalyticSolution taylor_green(double nu) {
    const double a = 2.0 * M_PI;
    auto uf = [a, nu](const Vec3& x, double t) -> Vec3 {
        const double E = std::exp(-2.0 * nu * t);
        return {E * std::sin(a * x[0]) * std::cos(a * x[1]),
                -E * std::cos(a * x[0]) * std::sin(a * x[1]), 0.0};
    };

    AnalyticSolution s;
    s.u = uf;
    s.u_t = [uf, nu](const Vec3& x, double t) -> Vec3 { return -2.0 * nu * uf(x, t); };
    s.lap_u = [uf, a](const Vec3& x, double t) -> Vec3 { return -2.0 * a * a * uf(x, t); };
    s.grad_u = [a, nu](const Vec3& x, double t) -> Mat3 {
        const double E = std::exp(-2.0 * nu * t);
        const double sx = std::sin(a * x[0]), cx = std::cos(a * x[0]);
        const double sy = std::sin(a * x[1]), cy = std::cos(a * x[1]);
        Mat3 g = Mat3::Zero();
        g(0, 0) = E * a * cx * cy;
        g(0, 1) = -E * a * sx * sy;
        g(1, 0) = E * a * sx * sy;
        g(1, 1) = -E * a * cx * cy;
        return g;
    };
    s.curl_u = [a, nu](const Vec3& x, double t) -> Vec3 {
        const double E = std::exp(-2.0 * nu * t);
        return {0.0, 0.0, 2.0 * E * a * std::sin(a * x[0]) * std::sin(a * x[1])};
    };
    s.p = [a, nu, uf](const Vec3& x, double t) {
        const double E2 = std::exp(-4.0 * nu * t);
        return 0.25 * E2 * (std::cos(2.0 * a * x[0]) + std::cos(2.0 * a * x[1])) +
               0.5 * uf(x, t).squaredNorm();
    };
    s.grad_p = [a, nu](const Vec3& x, double t) -> Vec3 {
        const double E2 = std::exp(-4.0 * nu * t);
        const double s2x = std::sin(2.0 * a * x[0]), c2x = std::cos(2.0 * a * x[0]);
        const double s2y = std::sin(2.0 * a * x[1]), c2y = std::cos(2.0 * a * x[1]);
        // grad of |u|^2/2 = (a/2) E^2 (sin(2ax) cos(2ay), sin(2ay) cos(2ax), 0)
        return {-0.5 * a * E2 * s2x + 0.5 * a * E2 * s2x * c2y,
                -0.5 * a * E2 * s2y + 0.5 * a * E2 * s2y * c2x, 0.0};
    };
    return s;
}

VectorFn helical_initial_condition() {
    const double a = 2.0 * M_PI;
    return [a](const Vec3& x) -> Vec3 {
        return {std::cos(a * x[2]), std::sin(a * x[2]), std::sin(a * x[0])};
    };
}

VectorFn helical_curl() {
    const double a = 2.0 * M_PI;
    return [a](const Vec3& x) -> Vec3 {
        return {-a * std::cos(a * x[2]), -a * std::sin(a * x[2]) - a * std::cos(a * x[0]), 0.0};
    };
}

ExactSolution as_exact(const AnalyticSolution& s) {
    return {s.u, s.grad_u, s.p};
}

}  // namespace egns
