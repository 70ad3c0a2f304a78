#include "egns/fields.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace egns {

double PressureField::mean(const PeriodicTetMesh& mesh) const {
    double s = 0.0;
    for (int k = 0; k < mesh.n_tets(); ++k) s += element_geometry(mesh, k).volume * x_[k];
    return s;
}

namespace {
constexpr char kMagic[8] = {'E', 'G', 'N', 'S', 'F', 'L', 'D', '1'};
}

void write_checkpoint(const std::string& path, int step, const EGField& u) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_checkpoint: cannot open " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::int64_t header[3] = {step, u.n_c(), u.n_b()};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(u.dofs().data()),
              static_cast<std::streamsize>(sizeof(double)) * u.dofs().size());
    if (!out) throw std::runtime_error("write_checkpoint: write failed for " + path);
}

Checkpoint read_checkpoint(const std::string& path, const DofMap& map) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_checkpoint: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("read_checkpoint: bad magic in " + path);
    std::int64_t header[3];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || header[1] != map.n_c || header[2] != map.n_b)
        throw std::runtime_error("read_checkpoint: dof layout mismatch in " + path);
    Eigen::VectorXd dofs(map.n_velocity());
    in.read(reinterpret_cast<char*>(dofs.data()),
            static_cast<std::streamsize>(sizeof(double)) * dofs.size());
    if (!in) throw std::runtime_error("read_checkpoint: truncated file " + path);
    return {static_cast<int>(header[0]), EGField(map, std::move(dofs))};
}

}  // namespace egns
