#pragma once

#include <Eigen/Dense>
#include <string>

#include "egns/dofmap.hpp"
#include "egns/mesh.hpp"

namespace egns {

/// Coefficients of v_h = {v_c, v_b}: one 3-vector per canonical vertex and
/// one scalar per canonical face (v_b|_F = v_F n_F). Stored as a single flat
/// dof vector [c | b] so the solver can treat it as plain linear algebra.
class EGField {
  public:
    EGField() = default;
    explicit EGField(const DofMap& map) : n_c_(map.n_c), x_(Eigen::VectorXd::Zero(map.n_velocity())) {}
    EGField(const DofMap& map, Eigen::VectorXd dofs) : n_c_(map.n_c), x_(std::move(dofs)) {}

    Eigen::Vector3d c(int vertex) const { return x_.segment<3>(3 * vertex); }
    void set_c(int vertex, const Eigen::Vector3d& value) { x_.segment<3>(3 * vertex) = value; }
    double b(int face) const { return x_[n_c_ + face]; }
    double& b(int face) { return x_[n_c_ + face]; }

    int n_c() const { return n_c_; }
    int n_b() const { return static_cast<int>(x_.size()) - n_c_; }
    const Eigen::VectorXd& dofs() const { return x_; }
    Eigen::VectorXd& dofs() { return x_; }

  private:
    int n_c_ = 0;
    Eigen::VectorXd x_;
};

/// Piecewise-constant pressure, one value per tet.
class PressureField {
  public:
    PressureField() = default;
    explicit PressureField(const DofMap& map) : x_(Eigen::VectorXd::Zero(map.n_p)) {}
    explicit PressureField(Eigen::VectorXd values) : x_(std::move(values)) {}

    double operator[](int tet) const { return x_[tet]; }
    double& operator[](int tet) { return x_[tet]; }
    const Eigen::VectorXd& values() const { return x_; }

    double mean(const PeriodicTetMesh& mesh) const;

  private:
    Eigen::VectorXd x_;
};

// Checkpoint format: magic "EGNSFLD1", then int64 {step, n_c, n_b}, then the
// flat dof vector [c | b] as little-endian doubles.
void write_checkpoint(const std::string& path, int step, const EGField& u);
struct Checkpoint {
    int step;
    EGField u;
};
Checkpoint read_checkpoint(const std::string& path, const DofMap& map);

}  // namespace egns
