#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace gasket {

/// Word over {1,2,3} naming the cell F_w1 o ... o F_wm (SG). The empty word is
/// the whole gasket.
class CellAddress {
public:
  CellAddress() = default;
  explicit CellAddress(std::vector<std::uint8_t> symbols);
  static CellAddress parse(const std::string& text);

  int level() const { return static_cast<int>(symbols_.size()); }
  const std::vector<std::uint8_t>& symbols() const { return symbols_; }
  CellAddress child(int symbol) const;
  CellAddress prefix(int length) const;
  bool is_prefix_of(const CellAddress& other) const;

  /// Index of this cell among all cells of its level in lexicographic order.
  std::size_t index() const;
  static CellAddress from_index(std::size_t index, int level);

  double measure() const;
  std::string str() const;

  auto operator<=>(const CellAddress&) const = default;

private:
  std::vector<std::uint8_t> symbols_;
};

/// Canonical vertex name: the lexicographically least (cell, corner) pair with
/// F_cell(q_corner) equal to the vertex.
struct VertexId {
  CellAddress cell;
  int corner = 1;

  int level() const { return cell.level(); }
  std::string str() const;
  auto operator<=>(const VertexId&) const = default;
};

/// Skew lattice coordinates at resolution 2^kLatticeBits: point = a*e1 + b*e2
/// with e1 = (1,0), e2 = (1/2, sqrt(3)/2), both scaled by 2^-kLatticeBits.
struct LatticePoint {
  std::int64_t a = 0;
  std::int64_t b = 0;
  auto operator<=>(const LatticePoint&) const = default;
};

inline constexpr int kLatticeBits = 40;
inline constexpr int kMaxTopologyLevel = 16;

struct Vertex {
  VertexId id;
  LatticePoint lattice;
  double x = 0.0;
  double y = 0.0;
  bool boundary = false;
};

/// Graph approximation Gamma_m: the vertex set V_m in canonical order, the
/// m-cells in lexicographic order and the corner incidence between them.
class GasketLevel {
public:
  explicit GasketLevel(int level);

  int level() const { return level_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return corners_.size(); }
  std::size_t num_interior() const { return interior_.size(); }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }

  /// Vertex indices of F_w(q_1), F_w(q_2), F_w(q_3) for cell index w.
  const std::array<std::size_t, 3>& cell_corners(std::size_t cell) const { return corners_[cell]; }

  /// Interior (non V_0) vertex indices, in canonical order.
  const std::vector<std::size_t>& interior() const { return interior_; }
  /// Position of vertex v among interior(), or -1 for boundary vertices.
  std::ptrdiff_t interior_index(std::size_t v) const { return interior_index_[v]; }

  /// Number of m-cells whose closure contains v (1 on V_0, 2 elsewhere).
  int cell_count(std::size_t v) const { return cell_count_[v]; }

  std::ptrdiff_t find(const LatticePoint& p) const;

private:
  int level_;
  std::vector<Vertex> vertices_;
  std::vector<std::array<std::size_t, 3>> corners_;
  std::vector<std::size_t> interior_;
  std::vector<std::ptrdiff_t> interior_index_;
  std::vector<int> cell_count_;
  std::vector<std::pair<LatticePoint, std::size_t>> sorted_points_;
};

/// Levels 0..max_level of the gasket, plus the maps between consecutive levels.
class Gasket {
public:
  explicit Gasket(int max_level);

  int max_level() const { return static_cast<int>(levels_.size()) - 1; }
  const GasketLevel& level(int m) const;

  /// Index in V_m of each vertex of V_{m-1}.
  const std::vector<std::size_t>& embedding(int m) const;
  /// Index in V_fine of each vertex of V_coarse (composition of embeddings).
  std::vector<std::size_t> embedding(int coarse, int fine) const;

private:
  std::vector<GasketLevel> levels_;
  std::vector<std::vector<std::size_t>> embeddings_;
};

std::vector<CellAddress> enumerate_cells(int m);
std::vector<VertexId> enumerate_vertices(int m);
LatticePoint lattice_point(const VertexId& v);
LatticePoint cell_origin(const CellAddress& cell);
bool cell_contains(const CellAddress& cell, const LatticePoint& p);

/// The N-cells whose closure contains v. Throws if N exceeds v's level.
std::vector<CellAddress> cell_of_vertex(const VertexId& v, int scale);

/// Discretisation of mu on V_m: each m-cell spreads 3^-m equally over its
/// three corners.
class QuadratureScheme {
public:
  explicit QuadratureScheme(const GasketLevel& level);

  int level() const { return level_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t v) const { return weights_[v]; }
  /// Common weight of every vertex in V_m \ V_0.
  double interior_weight() const;

  /// Integral of a function given by its values on V_m.
  double integrate(const std::vector<double>& values) const;
  /// Integral of a function that may take a different value in each cell at
  /// a shared vertex; value(cell, corner) is its limit from inside the cell.
  double integrate_cellwise(const std::function<double(std::size_t, int)>& value) const;

private:
  int level_;
  std::size_t num_cells_;
  std::vector<double> weights_;
};

QuadratureScheme quadrature(const GasketLevel& level);

}  // namespace gasket
