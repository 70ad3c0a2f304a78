#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace egns {

enum class Domain { Tet, Triangle };

/// Quadrature rule on the reference simplex, stored in barycentric
/// coordinates. Weights sum to the reference measure (1/6 for the
/// tetrahedron, 1/2 for the triangle) and are all positive.
struct QuadratureRule {
    Domain domain;
    int degree;  // every polynomial of total degree <= degree integrates exactly
    std::vector<std::array<double, 4>> points;  // barycentric; [3] unused for triangles
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
};

/// Conical-product rules (Gauss-Jacobi in the collapsed directions),
/// n points per direction, exact up to total degree 2n-1. Weights are
/// products of Gauss weights, hence positive for any n.
QuadratureRule conical_tet_rule(int n);
QuadratureRule conical_triangle_rule(int n);

/// Rule of at least the requested exactness degree. Supported range 1..6;
/// anything else throws std::invalid_argument.
QuadratureRule quadrature(Domain domain, int degree);

}  // namespace egns
