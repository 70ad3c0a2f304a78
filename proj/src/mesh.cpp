#include "egns/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace egns {

namespace {

using IVec3 = std::array<long, 3>;

IVec3 add(const IVec3& a, const IVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

// The 6 permutations of (0,1,2) with their signs; each yields one Kuhn tet
// along the cube's main diagonal.
constexpr std::array<std::array<int, 3>, 6> kPerms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
constexpr std::array<int, 6> kPermSign = {+1, -1, -1, +1, +1, -1};

long floor_div(long a, long b) {
    long q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

PeriodicTetMesh build_mesh(int m) {
    if (m < 1) throw std::invalid_argument("build_mesh: m must be >= 1");

    PeriodicTetMesh mesh;
    mesh.m = m;

    mesh.vertices.resize(static_cast<std::size_t>(m) * m * m);
    auto vid = [m](long i, long j, long k) {
        auto w = [m](long a) { return ((a % m) + m) % m; };
        return static_cast<int>(w(i) + m * (w(j) + m * w(k)));
    };
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i)
                mesh.vertices[vid(i, j, k)] = Vec3(i, j, k) / m;

    // Tets with integer grid corners; odd permutations get their last two
    // vertices swapped so every tet is positively oriented.
    std::vector<std::array<IVec3, 4>> tet_grid;
    tet_grid.reserve(6ul * m * m * m);
    for (int cz = 0; cz < m; ++cz)
        for (int cy = 0; cy < m; ++cy)
            for (int cx = 0; cx < m; ++cx)
                for (int p = 0; p < 6; ++p) {
                    IVec3 c0 = {cx, cy, cz};
                    IVec3 e[3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
                    e[0][kPerms[p][0]] = 1;
                    e[1][kPerms[p][1]] = 1;
                    e[2][kPerms[p][2]] = 1;
                    std::array<IVec3, 4> corners = {c0, add(c0, e[0]),
                                                    add(add(c0, e[0]), e[1]),
                                                    add(add(add(c0, e[0]), e[1]), e[2])};
                    if (kPermSign[p] < 0) std::swap(corners[2], corners[3]);
                    tet_grid.push_back(corners);
                }

    mesh.tets.resize(tet_grid.size());
    for (std::size_t t = 0; t < tet_grid.size(); ++t) {
        Tet& tet = mesh.tets[t];
        for (int i = 0; i < 4; ++i) {
            const IVec3& p = tet_grid[t][i];
            tet.v[i] = vid(p[0], p[1], p[2]);
            tet.corner[i] = Vec3(p[0], p[1], p[2]) / m;
            tet.face[i] = -1;
            tet.sign[i] = 0.0;
        }
    }

    // Canonical faces, identified modulo the lattice: translate each face so
    // its centroid lands in [0,1)^3 and key it by the translated integer
    // corners. Exact integer arithmetic, no geometric tolerances.
    std::map<std::array<long, 9>, int> face_index;
    for (std::size_t t = 0; t < tet_grid.size(); ++t) {
        const ElementGeometry geom = element_geometry(mesh, static_cast<int>(t));
        for (int lf = 0; lf < 4; ++lf) {
            std::array<IVec3, 3> fc;
            int n = 0;
            for (int i = 0; i < 4; ++i)
                if (i != lf) fc[n++] = tet_grid[t][i];
            IVec3 c3 = add(add(fc[0], fc[1]), fc[2]);
            IVec3 shift = {m * floor_div(c3[0], 3 * m), m * floor_div(c3[1], 3 * m),
                           m * floor_div(c3[2], 3 * m)};
            std::array<IVec3, 3> q;
            for (int i = 0; i < 3; ++i)
                q[i] = {fc[i][0] - shift[0], fc[i][1] - shift[1], fc[i][2] - shift[2]};
            std::sort(q.begin(), q.end());
            std::array<long, 9> key = {q[0][0], q[0][1], q[0][2], q[1][0], q[1][1],
                                       q[1][2], q[2][0], q[2][1], q[2][2]};

            auto it = face_index.find(key);
            if (it == face_index.end()) {
                Face face;
                for (int i = 0; i < 3; ++i) {
                    face.corners[i] = Vec3(q[i][0], q[i][1], q[i][2]) / m;
                    face.corner_ids[i] = vid(q[i][0], q[i][1], q[i][2]);
                }
                face.area = geom.face[lf].area;
                face.normal = geom.face[lf].outward_normal;
                face.adj[0] = {static_cast<int>(t), lf, +1.0};
                const int fid = mesh.n_faces();
                mesh.faces.push_back(face);
                face_index.emplace(key, fid);
                mesh.tets[t].face[lf] = fid;
                mesh.tets[t].sign[lf] = +1.0;
            } else {
                Face& face = mesh.faces[it->second];
                if (face.adj[1].tet != -1)
                    throw std::runtime_error("build_mesh: face with more than two incidences");
                if ((geom.face[lf].outward_normal + face.normal).norm() > 1e-12)
                    throw std::runtime_error("build_mesh: inconsistent face normals");
                face.adj[1] = {static_cast<int>(t), lf, -1.0};
                mesh.tets[t].face[lf] = it->second;
                mesh.tets[t].sign[lf] = -1.0;
            }
        }
    }

    for (const Face& face : mesh.faces)
        if (face.adj[1].tet == -1)
            throw std::runtime_error("build_mesh: boundary face on a torus");

    double h = 0.0;
    for (const Tet& tet : mesh.tets)
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                h = std::max(h, (tet.corner[i] - tet.corner[j]).norm());
    mesh.h = h;
    return mesh;
}

ElementGeometry element_geometry(const PeriodicTetMesh& mesh, int k) {
    if (k < 0 || k >= mesh.n_tets()) throw std::out_of_range("element_geometry: bad tet id");
    const Tet& tet = mesh.tets[k];

    ElementGeometry g;
    g.b = tet.corner[0];
    for (int i = 0; i < 3; ++i) g.B.col(i) = tet.corner[i + 1] - tet.corner[0];
    const double det = g.B.determinant();
    if (det <= 0.0) throw std::runtime_error("element_geometry: degenerate or inverted tet");
    g.volume = det / 6.0;

    // Reference face normals, face j opposite vertex j (unnormalized).
    static const std::array<Vec3, 4> nhat = {Vec3(1, 1, 1), Vec3(-1, 0, 0), Vec3(0, -1, 0),
                                             Vec3(0, 0, -1)};
    const Mat3 invT = g.B.inverse().transpose();
    for (int lf = 0; lf < 4; ++lf) {
        Vec3 n = invT * nhat[lf];
        g.face[lf].outward_normal = n.normalized();
        Vec3 centroid = Vec3::Zero();
        for (int i = 0; i < 4; ++i)
            if (i != lf) centroid += tet.corner[i];
        g.face[lf].centroid = centroid / 3.0;
        int a = (lf + 1) % 4, b = (lf + 2) % 4, c = (lf + 3) % 4;
        g.face[lf].area =
            0.5 * (tet.corner[b] - tet.corner[a]).cross(tet.corner[c] - tet.corner[a]).norm();
    }
    return g;
}

PointLocation locate_point(const PeriodicTetMesh& mesh, const Vec3& x) {
    const int m = mesh.m;
    Vec3 w;
    for (int d = 0; d < 3; ++d) w[d] = x[d] - std::floor(x[d]);

    std::array<int, 3> cube;
    for (int d = 0; d < 3; ++d)
        cube[d] = std::min(static_cast<int>(std::floor(w[d] * m)), m - 1);
    const int cube_id = cube[0] + m * (cube[1] + m * cube[2]);

    int best = -1;
    double best_min = -1e300;
    std::array<double, 4> best_bary{};
    for (int p = 0; p < 6; ++p) {
        const int t = 6 * cube_id + p;
        const Tet& tet = mesh.tets[t];
        Mat3 B;
        for (int i = 0; i < 3; ++i) B.col(i) = tet.corner[i + 1] - tet.corner[0];
        Vec3 xi = B.inverse() * (w - tet.corner[0]);
        std::array<double, 4> bary = {1.0 - xi.sum(), xi[0], xi[1], xi[2]};
        const double lo = *std::min_element(bary.begin(), bary.end());
        if (lo > best_min) {
            best_min = lo;
            best = t;
            best_bary = bary;
        }
    }
    if (best_min < -1e-12) throw std::runtime_error("locate_point: point escaped its cube");
    return {best, best_bary};
}

void dump_mesh(const PeriodicTetMesh& mesh, std::ostream& out) {
    out << "egns-mesh m=" << mesh.m << " vertices=" << mesh.n_vertices()
        << " tets=" << mesh.n_tets() << " faces=" << mesh.n_faces() << "\n";
    char buf[256];
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        std::snprintf(buf, sizeof(buf), "v %d %.17g %.17g %.17g\n", v, mesh.vertices[v][0],
                      mesh.vertices[v][1], mesh.vertices[v][2]);
        out << buf;
    }
    for (int t = 0; t < mesh.n_tets(); ++t) {
        const Tet& tet = mesh.tets[t];
        std::snprintf(buf, sizeof(buf), "t %d %d %d %d %d\n", t, tet.v[0], tet.v[1], tet.v[2],
                      tet.v[3]);
        out << buf;
    }
    for (int f = 0; f < mesh.n_faces(); ++f) {
        const Face& face = mesh.faces[f];
        std::snprintf(buf, sizeof(buf),
                      "f %d %d %d %d %.17g %.17g %.17g %.17g t%d:%+g t%d:%+g\n", f,
                      face.corner_ids[0], face.corner_ids[1], face.corner_ids[2], face.area,
                      face.normal[0], face.normal[1], face.normal[2], face.adj[0].tet,
                      face.adj[0].sign, face.adj[1].tet, face.adj[1].sign);
        out << buf;
    }
}

}  // namespace egns
