#pragma once

#include "gbhe/dgspace.hpp"

namespace gbhe {

/// L2 projection between two meshes refined from the same initial mesh.
/// Target cells inside a source cell receive the source polynomial exactly
/// (injection); target cells covering several source cells receive the
/// local L2 projection of the pieces. Meshes of different families are
/// rejected.
DgField transfer(const DgField& u, const DofMap& target);

/// True when every cell of `fine` lies inside a cell of `coarse`.
bool is_nested_refinement(const Mesh& coarse, const Mesh& fine);

/// Point evaluation of a field on another mesh of the same family, seen from
/// a cell of that mesh: the trace from inside the cell is returned for points
/// on its boundary.
class FieldLocator {
 public:
  FieldLocator(DgField u, const Mesh& target);
  PointValue eval(int target_cell, Point p) const;

 private:
  DgField u_;
  std::vector<int> ancestor_;             // source cell containing the target cell, or -1
  std::vector<std::vector<int>> pieces_;  // source cells inside the target cell
};

}  // namespace gbhe
