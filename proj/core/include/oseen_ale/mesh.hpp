#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace oseen_ale {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Boundary tags of the structured unit-square triangulator (bit flags).
enum BoundaryTag : std::uint8_t {
  kInterior = 0,
  kBottom = 1,
  kRight = 2,
  kTop = 4,
  kLeft = 8,
};

/// An undirected mesh edge with its endpoints stored in ascending order.
struct Edge {
  int a;
  int b;
  int num_cells;  // 1 on the boundary, 2 in the interior
};

/// Reference triangulation of the initial domain. All cells are counter-clockwise.
class ReferenceMesh {
 public:
  ReferenceMesh(std::vector<Vec2> nodes, std::vector<std::array<int, 3>> cells,
                std::vector<std::uint8_t> boundary_markers);

  [[nodiscard]] int num_nodes() const noexcept { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] int num_cells() const noexcept { return static_cast<int>(cells_.size()); }
  [[nodiscard]] int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

  [[nodiscard]] const std::vector<Vec2>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<std::array<int, 3>>& cells() const noexcept { return cells_; }
  [[nodiscard]] const std::vector<std::uint8_t>& boundary_markers() const noexcept {
    return boundary_markers_;
  }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Global edge indices of a cell, local edge k joins local vertices (k, k+1 mod 3).
  [[nodiscard]] const std::array<int, 3>& cell_edges(int cell) const { return cell_edges_[cell]; }

  [[nodiscard]] bool is_boundary_node(int node) const { return boundary_markers_[node] != 0; }

  /// Signed area of a cell in the reference configuration.
  [[nodiscard]] double signed_area(int cell) const;

 private:
  void build_edges();
  void validate() const;

  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::uint8_t> boundary_markers_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
};

/// Structured triangulation of [0,1]^2 with 2*nx*ny right triangles and
/// row-major node numbering (node (i,j) has index j*(nx+1)+i).
[[nodiscard]] ReferenceMesh make_unit_square(int nx, int ny);

}  // namespace oseen_ale
