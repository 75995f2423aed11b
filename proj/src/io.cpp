#include "gbhe/io.hpp"

#include <fstream>
#include <stdexcept>

namespace gbhe {

void VtkWriter::add_cell_data(std::string name, std::vector<double> values) {
  if (values.size() != mesh_.num_cells()) throw std::invalid_argument("cell data size mismatch: " + name);
  cell_data_.emplace_back(std::move(name), std::move(values));
}

void VtkWriter::add_point_data(std::string name, std::vector<double> values) {
  if (values.size() != mesh_.num_vertices()) throw std::invalid_argument("point data size mismatch: " + name);
  point_data_.emplace_back(std::move(name), std::move(values));
}

void VtkWriter::add_field(std::string name, const DgField& u) {
  if (&u.dofs.mesh() != &mesh_) throw std::invalid_argument("field lives on a different mesh");
  std::vector<double> sum(mesh_.num_vertices(), 0.0), count(mesh_.num_vertices(), 0.0);
  constexpr double ref[3][2] = {{0, 0}, {1, 0}, {0, 1}};
  for (int c = 0; c < static_cast<int>(mesh_.num_cells()); ++c) {
    for (int i = 0; i < 3; ++i) {
      const int v = mesh_.cell(c)[i];
      sum[v] += evaluate(u, c, ref[i][0], ref[i][1]).value;
      count[v] += 1.0;
    }
  }
  for (std::size_t v = 0; v < sum.size(); ++v) sum[v] /= count[v];
  add_point_data(std::move(name), std::move(sum));
}

void VtkWriter::write(const std::string& path, const std::string& title) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os.precision(12);
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh_.num_vertices() << " double\n";
  for (const auto& p : mesh_.vertices()) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << mesh_.num_cells() << ' ' << 4 * mesh_.num_cells() << '\n';
  for (const auto& c : mesh_.cells()) os << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  os << "CELL_TYPES " << mesh_.num_cells() << '\n';
  for (std::size_t c = 0; c < mesh_.num_cells(); ++c) os << "5\n";
  if (!cell_data_.empty()) {
    os << "CELL_DATA " << mesh_.num_cells() << '\n';
    for (const auto& [name, values] : cell_data_) {
      os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) os << v << '\n';
    }
  }
  if (!point_data_.empty()) {
    os << "POINT_DATA " << mesh_.num_vertices() << '\n';
    for (const auto& [name, values] : point_data_) {
      os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) os << v << '\n';
    }
  }
}

void write_mesh_vtk(const Mesh& mesh, const std::string& path) {
  VtkWriter w(mesh);
  std::vector<double> gen(mesh.num_cells());
  for (std::size_t c = 0; c < gen.size(); ++c) gen[c] = mesh.generation(static_cast<int>(c));
  w.add_cell_data("generation", std::move(gen));
  w.write(path);
}

void save_mesh_text(const Mesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_mesh_text(mesh, os);
}

Mesh load_mesh_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_mesh_text(is);
}

}  // namespace gbhe
