#include <doctest.h>

#include <random>

#include "egns/exact_solutions.hpp"

using namespace egns;

namespace {

// Central finite differences of the rotational-form momentum equation.
Vec3 momentum_residual_fd(const AnalyticSolution& s, double nu, const SpaceTimeFn& f,
                          const Vec3& x, double t, double h = 1e-5) {
    Vec3 ut = (s.u(x, t + h) - s.u(x, t - h)) / (2.0 * h);
    Vec3 lap = Vec3::Zero();
    Mat3 jac;  // d u_p / d x_q by central differences
    for (int d = 0; d < 3; ++d) {
        Vec3 xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        lap += (s.u(xp, t) - 2.0 * s.u(x, t) + s.u(xm, t)) / (h * h);
        jac.col(d) = (s.u(xp, t) - s.u(xm, t)) / (2.0 * h);
    }
    const Vec3 curl(jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1));
    Vec3 gp;
    for (int d = 0; d < 3; ++d) {
        Vec3 xp = x, xm = x;
        xp[d] += h;
        xm[d] -= h;
        gp[d] = (s.p(xp, t) - s.p(xm, t)) / (2.0 * h);
    }
    return ut - nu * lap + curl.cross(s.u(x, t)) + gp - f(x, t);
}

}  // namespace

TEST_CASE("inviscid-limit forcing closes the momentum equation (FD oracle, step 1e-5)") {
    // At nu -> 0 the viscous term drops and the (curl u) x u + grad p part of
    // the rotational form must close against f on its own.
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const AnalyticSolution tg = taylor_green(0.0);
    const SpaceTimeFn f = manufactured_forcing(tg, 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 x(dist(rng), dist(rng), dist(rng));
        const double t = dist(rng);
        CHECK(momentum_residual_fd(tg, 0.0, f, x, t).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("viscous forcing closes the momentum equation (FD oracle)") {
    // The second-difference Laplacian has a round-off floor of eps/h^2, so
    // the step is widened to 3e-5 where truncation and noise balance.
    std::mt19937 rng(2025);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (double nu : {1.0, 1e-8}) {
        const AnalyticSolution tg = taylor_green(nu);
        const SpaceTimeFn f = manufactured_forcing(tg, nu);
        for (int trial = 0; trial < 100; ++trial) {
            const Vec3 x(dist(rng), dist(rng), dist(rng));
            const double t = dist(rng);
            CHECK(momentum_residual_fd(tg, nu, f, x, t, 3e-5).cwiseAbs().maxCoeff() <= 1e-6);
        }
    }
}

TEST_CASE("Taylor-Green forcing at a pinned point matches the FD oracle") {
    const AnalyticSolution tg = taylor_green(1.0);
    const SpaceTimeFn f = manufactured_forcing(tg, 1.0);
    const Vec3 x(0.125, 0.0, 0.0);
    CHECK(momentum_residual_fd(tg, 1.0, f, x, 0.0, 3e-5).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("constant fields force nothing") {
    AnalyticSolution s;
    s.u = [](const Vec3&, double) { return Vec3(1.0, -2.0, 0.5); };
    s.u_t = [](const Vec3&, double) { return Vec3::Zero(); };
    s.grad_u = [](const Vec3&, double) { return Mat3::Zero(); };
    s.lap_u = [](const Vec3&, double) { return Vec3::Zero(); };
    s.curl_u = [](const Vec3&, double) { return Vec3::Zero(); };
    s.p = [](const Vec3&, double) { return 3.0; };
    s.grad_p = [](const Vec3&, double) { return Vec3::Zero(); };
    const SpaceTimeFn f = manufactured_forcing(s, 0.7);
    CHECK(f(Vec3(0.3, 0.4, 0.5), 1.2).norm() == 0.0);
}

TEST_CASE("closed-form derivatives of the Taylor-Green fields are consistent") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const AnalyticSolution tg = taylor_green(0.3);
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 x(dist(rng), dist(rng), dist(rng));
        const double t = dist(rng);
        // grad_u vs FD
        for (int d = 0; d < 3; ++d) {
            Vec3 xp = x, xm = x;
            xp[d] += h;
            xm[d] -= h;
            const Vec3 col = (tg.u(xp, t) - tg.u(xm, t)) / (2.0 * h);
            CHECK((tg.grad_u(x, t).col(d) - col).cwiseAbs().maxCoeff() <= 1e-7);
        }
        // curl consistency with grad
        const Mat3 g = tg.grad_u(x, t);
        const Vec3 curl(g(2, 1) - g(1, 2), g(0, 2) - g(2, 0), g(1, 0) - g(0, 1));
        CHECK((curl - tg.curl_u(x, t)).cwiseAbs().maxCoeff() <= 1e-12);
        // grad_p vs FD
        for (int d = 0; d < 3; ++d) {
            Vec3 xp = x, xm = x;
            xp[d] += h;
            xm[d] -= h;
            CHECK(tg.grad_p(x, t)[d] ==
                  doctest::Approx((tg.p(xp, t) - tg.p(xm, t)) / (2.0 * h)).epsilon(1e-5));
        }
    }
}

TEST_CASE("helical curl is the analytic curl of the helical field") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const VectorFn g = helical_initial_condition();
    const VectorFn curl = helical_curl();
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 x(dist(rng), dist(rng), dist(rng));
        Mat3 jac;
        for (int d = 0; d < 3; ++d) {
            Vec3 xp = x, xm = x;
            xp[d] += h;
            xm[d] -= h;
            jac.col(d) = (g(xp) - g(xm)) / (2.0 * h);
        }
        const Vec3 fd_curl(jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1));
        CHECK((fd_curl - curl(x)).cwiseAbs().maxCoeff() <= 1e-6);
        // divergence-free
        CHECK(std::abs(jac(0, 0) + jac(1, 1) + jac(2, 2)) <= 1e-6);
    }
}
