#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace egns {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using ScalarFn = std::function<double(const Vec3&)>;
using VectorFn = std::function<Vec3(const Vec3&)>;

/// One of the two (tet, local face) incidences of a canonical face.
/// sign = n_F . n_K, where n_K is the outward normal of the tet.
struct FaceIncidence {
    int tet = -1;
    int local_face = -1;
    double sign = 0.0;
};

struct Face {
    std::array<Vec3, 3> corners;    // canonical representative geometry
    std::array<int, 3> corner_ids;  // canonical vertex ids (may repeat for m <= 2)
    double area = 0.0;
    Vec3 normal = Vec3::Zero();  // fixed unit normal n_F
    std::array<FaceIncidence, 2> adj;
};

struct Tet {
    std::array<int, 4> v;          // canonical vertex ids
    std::array<Vec3, 4> corner;    // unwrapped positions; a genuine simplex across seams
    std::array<int, 4> face;       // canonical face ids; face i is opposite corner i
    std::array<double, 4> sign;    // n_F . n_K per local face
};

/// Uniform periodic tetrahedral mesh of the unit 3-torus: m^3 cubes, each
/// split into 6 tets by the Kuhn triangulation. Immutable after construction.
struct PeriodicTetMesh {
    int m = 0;
    double h = 0.0;  // max element diameter
    std::vector<Vec3> vertices;
    std::vector<Tet> tets;
    std::vector<Face> faces;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_tets() const { return static_cast<int>(tets.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }
    double grid_h() const { return 1.0 / m; }
};

PeriodicTetMesh build_mesh(int m);

/// Affine map F_K(x^) = B_K x^ + b_K from the reference tet
/// {(0,0,0),(1,0,0),(0,1,0),(0,0,1)} onto tet k, plus per-face data.
struct ElementGeometry {
    Mat3 B;
    Vec3 b;
    double volume;
    struct FaceGeom {
        Vec3 outward_normal;
        double area;
        Vec3 centroid;
    };
    std::array<FaceGeom, 4> face;  // face i opposite vertex i
};

ElementGeometry element_geometry(const PeriodicTetMesh& mesh, int k);

/// Locate the canonical element containing a point (any representative of
/// its periodicity class) and its barycentric coordinates there.
struct PointLocation {
    int tet;
    std::array<double, 4> bary;
};
PointLocation locate_point(const PeriodicTetMesh& mesh, const Vec3& x);

/// Plain-text debug dump: vertices, tets, faces with normals and signs.
void dump_mesh(const PeriodicTetMesh& mesh, std::ostream& out);

}  // namespace egns
