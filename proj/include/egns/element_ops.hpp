#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <array>
#include <vector>

#include "egns/dofmap.hpp"
#include "egns/fields.hpp"
#include "egns/mesh.hpp"
#include "egns/parallel.hpp"

namespace egns {

using Vec13 = Eigen::Matrix<double, 13, 1>;
using Vec16 = Eigen::Matrix<double, 16, 1>;
using Mat13 = Eigen::Matrix<double, 13, 13>;
using Mat13x16 = Eigen::Matrix<double, 13, 16>;
using Mat16 = Eigen::Matrix<double, 16, 16>;

/// The four symmetric reference matrices with n^_j . S_i . n^_j = 2 d_ij for
/// the reference-tet face normals (face j opposite vertex j).
const std::array<Mat3, 4>& s_matrices();

/// Exact integer check of the defining property above; throws on failure.
void verify_s_matrices();

/// Per-element data for the modified differential operators. The 13 basis
/// tensors of P_0^+(K) are the 9 constant matrices E_pq and the 4 linear
/// matrices B_i = lambda_i Phi_i with Phi_i = B_K S_i B_K^T. Basis order:
/// a = 3p + q for E_pq (a = 0..8), then a = 9 + i for B_i. The stored B_i
/// are Frobenius-normalized in Phi (Phi_i scales like h_K^2 otherwise and
/// would let the Gram condition number grow like h^-4 under refinement);
/// the span, and hence every operator built on it, is unchanged.
struct ElementOps {
    Mat3 B;
    Mat3 invB;
    Vec3 v0;
    double volume;
    std::array<Vec3, 4> corner;
    std::array<Vec3, 4> grad_lambda;  // constant P1 basis gradients
    struct FaceData {
        int gid;
        double sign;  // n_F . n_K
        double area;
        Vec3 normal;  // outward
    };
    std::array<FaceData, 4> face;  // face i opposite corner i
    std::array<Mat3, 4> Phi;       // B_K S_i B_K^T, unnormalized
    std::array<Mat3, 4> Phi_hat;   // Phi_i / |Phi_i|_F, used in the basis
    Mat13 gram;  // G_ab = (tau_a, tau_b)_K, closed form
    Eigen::LLT<Mat13> gram_llt;
    Mat13x16 dof_to_rhs;  // local dofs -> rhs of the gradient solve
    Mat16 local_a;        // (grad_m ., grad_m .)_K on local dofs, symmetric

    /// Local dof order: [v0x v0y v0z ... v3z | b0 b1 b2 b3].
    Vec16 gather(const EGField& u, const Tet& tet) const;

    /// tau_a evaluated at a point (constant for a < 9, lambda_i Phi^_i else).
    Mat3 p0plus_basis_tensor(int a, const Vec3& x) const;
    /// The tensor represented by a coefficient vector, at a point.
    Mat3 gradient_tensor(const Vec13& coeffs, const Vec3& x) const;

    Vec13 modified_gradient(const Vec16& local) const;
    double modified_divergence(const EGField& u) const;

    /// Value of the RT0 reconstruction R u at a point of the element.
    Vec3 rt_value(const EGField& u, const Vec3& x) const;

    /// Constant 3x3 gradient of the CG part and its curl on this element.
    Mat3 cg_gradient(const EGField& u, const Tet& tet) const;
    static Vec3 curl_from_gradient(const Mat3& grad);
};

/// Immutable per-element cache; construction is element-parallel with a
/// serial reference path producing bit-identical entries.
class ElementOperatorCache {
  public:
    explicit ElementOperatorCache(const PeriodicTetMesh& mesh, Exec exec = Exec::Parallel);

    const ElementOps& operator[](int k) const { return ops_[k]; }
    int size() const { return static_cast<int>(ops_.size()); }

  private:
    std::vector<ElementOps> ops_;
};

// Standalone operations on a cached mesh.
Vec13 modified_gradient(const ElementOperatorCache& cache, const PeriodicTetMesh& mesh,
                        const EGField& u, int k);
double modified_divergence(const ElementOperatorCache& cache, const EGField& u, int k);
Vec3 rt_reconstruct(const ElementOperatorCache& cache, const EGField& u, int k, const Vec3& x);

/// Flux coefficients of the lowest-order Raviart-Thomas interpolant:
/// per-face integral of v . n_F by a degree-4 triangle rule.
std::vector<double> rt_interpolate(const PeriodicTetMesh& mesh, const VectorFn& v);

}  // namespace egns
