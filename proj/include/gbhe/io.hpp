#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gbhe/dgspace.hpp"
#include "gbhe/mesh.hpp"

namespace gbhe {

/// Legacy ASCII VTK writer (UNSTRUCTURED_GRID, triangles as cell type 5).
class VtkWriter {
 public:
  explicit VtkWriter(const Mesh& mesh) : mesh_(mesh) {}

  void add_cell_data(std::string name, std::vector<double> values);
  void add_point_data(std::string name, std::vector<double> values);
  /// Discontinuous field sampled at mesh vertices, averaged over the
  /// incident cells.
  void add_field(std::string name, const DgField& u);

  void write(const std::string& path, const std::string& title = "gbhe") const;

 private:
  const Mesh& mesh_;
  std::vector<std::pair<std::string, std::vector<double>>> cell_data_;
  std::vector<std::pair<std::string, std::vector<double>>> point_data_;
};

void write_mesh_vtk(const Mesh& mesh, const std::string& path);
void save_mesh_text(const Mesh& mesh, const std::string& path);
Mesh load_mesh_text(const std::string& path);

}  // namespace gbhe
