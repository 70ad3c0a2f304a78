#pragma once

#include "egns/diagnostics.hpp"
#include "egns/forms.hpp"

namespace egns {

/// Closed-form ingredients of a manufactured solution on the unit torus.
struct AnalyticSolution {
    std::function<Vec3(const Vec3&, double)> u;
    std::function<Vec3(const Vec3&, double)> u_t;
    std::function<Mat3(const Vec3&, double)> grad_u;  // (d u_p / d x_q)
    std::function<Vec3(const Vec3&, double)> lap_u;
    std::function<Vec3(const Vec3&, double)> curl_u;
    std::function<double(const Vec3&, double)> p;
    std::function<Vec3(const Vec3&, double)> grad_p;
};

/// f = u_t - nu lap(u) + (curl u) x u + grad p, the rotational-form momentum
/// residual of the manufactured fields.
SpaceTimeFn manufactured_forcing(const AnalyticSolution& exact, double nu);

/// Taylor-Green vortex with total pressure; all derivatives in closed form.
/// u = e^{-2 nu t} (sin(2pi x)cos(2pi y), -cos(2pi x)sin(2pi y), 0),
/// p = (1/4) e^{-4 nu t} (cos(4pi x) + cos(4pi y)) + |u|^2 / 2.
AnalyticSolution taylor_green(double nu);

/// Helical initial condition g = (cos(2pi z), sin(2pi z), sin(2pi x)):
/// divergence-free with helicity integral -2pi and energy 3/4.
VectorFn helical_initial_condition();
VectorFn helical_curl();

ExactSolution as_exact(const AnalyticSolution& s);

}  // namespace egns
