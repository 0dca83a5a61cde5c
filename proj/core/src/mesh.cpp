#include "oseen_ale/mesh.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "oseen_ale/errors.hpp"

namespace oseen_ale {

ReferenceMesh::ReferenceMesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> cells,
                             std::vector<std::uint8_t> boundary_markers)
    : nodes_(std::move(nodes)),
      cells_(std::move(cells)),
      boundary_markers_(std::move(boundary_markers)) {
  if (boundary_markers_.size() != nodes_.size()) {
    throw InvalidArgument("boundary marker count does not match node count");
  }
  for (const auto& cell : cells_) {
    for (int v : cell) {
      if (v < 0 || v >= num_nodes()) {
        throw IndexOutOfRange("cell references node " + std::to_string(v));
      }
    }
  }
  build_edges();
  validate();
}

double ReferenceMesh::signed_area(int cell) const {
  const auto& c = cells_[cell];
  const Vec2 e1 = nodes_[c[1]] - nodes_[c[0]];
  const Vec2 e2 = nodes_[c[2]] - nodes_[c[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

void ReferenceMesh::build_edges() {
  std::map<std::pair<int, int>, int> lookup;
  cell_edges_.resize(cells_.size());
  for (int k = 0; k < num_cells(); ++k) {
    const auto& c = cells_[k];
    for (int e = 0; e < 3; ++e) {
      const int a = std::min(c[e], c[(e + 1) % 3]);
      const int b = std::max(c[e], c[(e + 1) % 3]);
      auto [it, inserted] = lookup.try_emplace({a, b}, num_edges());
      if (inserted) {
        edges_.push_back({a, b, 0});
      }
      edges_[it->second].num_cells += 1;
      cell_edges_[k][e] = it->second;
    }
  }
}

void ReferenceMesh::validate() const {
  for (int k = 0; k < num_cells(); ++k) {
    if (signed_area(k) <= 0.0) {
      throw InvertedCell(k, 0.0, 2.0 * signed_area(k));
    }
  }
  for (const auto& e : edges_) {
    if (e.num_cells > 2) {
      throw InvalidArgument("edge shared by more than two cells");
    }
    if (e.num_cells == 1 && (!is_boundary_node(e.a) || !is_boundary_node(e.b))) {
      throw InvalidArgument("boundary edge with an unmarked endpoint");
    }
  }
}

ReferenceMesh make_unit_square(int nx, int ny) {
  if (nx < 1 || ny < 1) {
    throw InvalidArgument("unit square needs nx, ny >= 1");
  }
  std::vector<Vec2> nodes;
  std::vector<std::uint8_t> markers;
  nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      nodes.emplace_back(static_cast<double>(i) / nx, static_cast<double>(j) / ny);
      std::uint8_t tag = kInterior;
      if (j == 0) tag |= kBottom;
      if (i == nx) tag |= kRight;
      if (j == ny) tag |= kTop;
      if (i == 0) tag |= kLeft;
      markers.push_back(tag);
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> cells;
  cells.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return ReferenceMesh(std::move(nodes), std::move(cells), std::move(markers));
}

}  // namespace oseen_ale
