#include "gasket/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace gasket {

namespace {

// Skew offsets of q_1, q_2, q_3 in units of the cell side.
constexpr std::array<std::array<std::int64_t, 2>, 3> kCornerOffset{{{0, 0}, {1, 0}, {0, 1}}};

std::size_t pow3(int n) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

std::int64_t side_length(int level) { return std::int64_t{1} << (kLatticeBits - level); }

LatticePoint corner_point(const LatticePoint& origin, int level, int corner) {
  const std::int64_t s = side_length(level);
  return {origin.a + s * kCornerOffset[corner - 1][0], origin.b + s * kCornerOffset[corner - 1][1]};
}

void check_level(int m) {
  if (m < 0 || m > kMaxTopologyLevel)
    throw std::invalid_argument("level must lie in [0, " + std::to_string(kMaxTopologyLevel) + "]");
}

}  // namespace

CellAddress::CellAddress(std::vector<std::uint8_t> symbols) : symbols_(std::move(symbols)) {
  for (auto s : symbols_)
    if (s < 1 || s > 3) throw std::invalid_argument("cell symbols must be 1, 2 or 3");
}

CellAddress CellAddress::parse(const std::string& text) {
  std::vector<std::uint8_t> symbols;
  for (char c : text) {
    if (c < '1' || c > '3') throw std::invalid_argument("bad cell address '" + text + "'");
    symbols.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return CellAddress(std::move(symbols));
}

CellAddress CellAddress::child(int symbol) const {
  auto s = symbols_;
  s.push_back(static_cast<std::uint8_t>(symbol));
  return CellAddress(std::move(s));
}

CellAddress CellAddress::prefix(int length) const {
  if (length < 0 || length > level()) throw std::out_of_range("prefix length");
  return CellAddress(std::vector<std::uint8_t>(symbols_.begin(), symbols_.begin() + length));
}

bool CellAddress::is_prefix_of(const CellAddress& other) const {
  return level() <= other.level() && std::equal(symbols_.begin(), symbols_.end(), other.symbols_.begin());
}

std::size_t CellAddress::index() const {
  std::size_t r = 0;
  for (auto s : symbols_) r = 3 * r + (s - 1);
  return r;
}

CellAddress CellAddress::from_index(std::size_t index, int level) {
  std::vector<std::uint8_t> s(level);
  for (int i = level - 1; i >= 0; --i) {
    s[i] = static_cast<std::uint8_t>(index % 3 + 1);
    index /= 3;
  }
  return CellAddress(std::move(s));
}

double CellAddress::measure() const { return std::pow(3.0, -level()); }

std::string CellAddress::str() const {
  std::string out;
  for (auto s : symbols_) out.push_back(static_cast<char>('0' + s));
  return out;
}

std::string VertexId::str() const { return (cell.level() ? cell.str() : std::string("e")) + ":" + std::to_string(corner); }

LatticePoint cell_origin(const CellAddress& cell) {
  LatticePoint o;
  int depth = 0;
  for (auto s : cell.symbols()) {
    ++depth;
    const std::int64_t half = side_length(depth);
    o.a += half * kCornerOffset[s - 1][0];
    o.b += half * kCornerOffset[s - 1][1];
  }
  return o;
}

LatticePoint lattice_point(const VertexId& v) { return corner_point(cell_origin(v.cell), v.level(), v.corner); }

bool cell_contains(const CellAddress& cell, const LatticePoint& p) {
  const LatticePoint o = cell_origin(cell);
  const std::int64_t s = side_length(cell.level());
  const std::int64_t da = p.a - o.a;
  const std::int64_t db = p.b - o.b;
  return da >= 0 && db >= 0 && da + db <= s;
}

GasketLevel::GasketLevel(int level) : level_(level) {
  check_level(level);
  const std::size_t ncells = pow3(level);
  corners_.resize(ncells);
  std::map<LatticePoint, std::size_t> seen;
  // Cells in lexicographic order, corners 1..3 within a cell: the first
  // occurrence of a point is its canonical representative.
  for (std::size_t c = 0; c < ncells; ++c) {
    const CellAddress addr = CellAddress::from_index(c, level);
    const LatticePoint o = cell_origin(addr);
    for (int k = 1; k <= 3; ++k) {
      const LatticePoint p = corner_point(o, level, k);
      auto [it, inserted] = seen.emplace(p, vertices_.size());
      if (inserted) {
        Vertex v;
        v.id = VertexId{addr, k};
        v.lattice = p;
        const double scale = std::ldexp(1.0, -kLatticeBits);
        v.x = (static_cast<double>(p.a) + 0.5 * static_cast<double>(p.b)) * scale;
        v.y = static_cast<double>(p.b) * (std::sqrt(3.0) / 2.0) * scale;
        vertices_.push_back(std::move(v));
      }
      corners_[c][k - 1] = it->second;
    }
  }
  for (int k = 1; k <= 3; ++k) {
    const LatticePoint q = corner_point(LatticePoint{}, 0, k);
    vertices_[seen.at(q)].boundary = true;
  }
  interior_index_.assign(vertices_.size(), -1);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (!vertices_[v].boundary) {
      interior_index_[v] = static_cast<std::ptrdiff_t>(interior_.size());
      interior_.push_back(v);
    }
  }
  cell_count_.assign(vertices_.size(), 0);
  for (const auto& c : corners_)
    for (auto v : c) ++cell_count_[v];
  sorted_points_.assign(seen.begin(), seen.end());
}

std::ptrdiff_t GasketLevel::find(const LatticePoint& p) const {
  auto it = std::lower_bound(sorted_points_.begin(), sorted_points_.end(), p,
                             [](const auto& e, const LatticePoint& q) { return e.first < q; });
  if (it == sorted_points_.end() || it->first != p) return -1;
  return static_cast<std::ptrdiff_t>(it->second);
}

Gasket::Gasket(int max_level) {
  check_level(max_level);
  levels_.reserve(max_level + 1);
  for (int m = 0; m <= max_level; ++m) levels_.emplace_back(m);
  embeddings_.resize(max_level + 1);
  for (int m = 1; m <= max_level; ++m) {
    const auto& coarse = levels_[m - 1];
    const auto& fine = levels_[m];
    auto& map = embeddings_[m];
    map.resize(coarse.num_vertices());
    // Corner a of coarse cell i is corner a of its child i.a.
    for (std::size_t c = 0; c < coarse.num_cells(); ++c)
      for (int a = 0; a < 3; ++a) map[coarse.cell_corners(c)[a]] = fine.cell_corners(3 * c + a)[a];
  }
}

const GasketLevel& Gasket::level(int m) const {
  if (m < 0 || m > max_level()) throw std::out_of_range("gasket level " + std::to_string(m) + " not built");
  return levels_[m];
}

const std::vector<std::size_t>& Gasket::embedding(int m) const {
  if (m < 1 || m > max_level()) throw std::out_of_range("embedding level");
  return embeddings_[m];
}

std::vector<std::size_t> Gasket::embedding(int coarse, int fine) const {
  if (coarse > fine) throw std::invalid_argument("embedding: coarse level above fine level");
  std::vector<std::size_t> map(level(coarse).num_vertices());
  for (std::size_t v = 0; v < map.size(); ++v) map[v] = v;
  for (int m = coarse + 1; m <= fine; ++m) {
    const auto& step = embedding(m);
    for (auto& v : map) v = step[v];
  }
  return map;
}

std::vector<CellAddress> enumerate_cells(int m) {
  check_level(m);
  const std::size_t n = pow3(m);
  std::vector<CellAddress> cells;
  cells.reserve(n);
  for (std::size_t i = 0; i < n; ++i) cells.push_back(CellAddress::from_index(i, m));
  return cells;
}

std::vector<VertexId> enumerate_vertices(int m) {
  const GasketLevel level(m);
  std::vector<VertexId> ids;
  ids.reserve(level.num_vertices());
  for (const auto& v : level.vertices()) ids.push_back(v.id);
  return ids;
}

std::vector<CellAddress> cell_of_vertex(const VertexId& v, int scale) {
  if (scale < 0) throw std::invalid_argument("scale must be nonnegative");
  if (scale > v.level()) throw std::invalid_argument("scale exceeds the vertex level");
  const LatticePoint p = lattice_point(v);
  std::vector<CellAddress> frontier{CellAddress{}};
  for (int depth = 0; depth < scale; ++depth) {
    std::vector<CellAddress> next;
    for (const auto& c : frontier)
      for (int s = 1; s <= 3; ++s) {
        CellAddress child = c.child(s);
        if (cell_contains(child, p)) next.push_back(std::move(child));
      }
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

QuadratureScheme::QuadratureScheme(const GasketLevel& level)
    : level_(level.level()), num_cells_(level.num_cells()), weights_(level.num_vertices()) {
  const double cell_share = std::pow(3.0, -level_) / 3.0;
  for (std::size_t v = 0; v < weights_.size(); ++v) weights_[v] = level.cell_count(v) * cell_share;
}

double QuadratureScheme::interior_weight() const { return 2.0 * std::pow(3.0, -(level_ + 1)); }

double QuadratureScheme::integrate(const std::vector<double>& values) const {
  if (values.size() != weights_.size()) throw std::invalid_argument("quadrature: size mismatch");
  double sum = 0.0;
  for (std::size_t v = 0; v < values.size(); ++v) sum += weights_[v] * values[v];
  return sum;
}

double QuadratureScheme::integrate_cellwise(const std::function<double(std::size_t, int)>& value) const {
  double sum = 0.0;
  for (std::size_t c = 0; c < num_cells_; ++c) sum += (value(c, 1) + value(c, 2) + value(c, 3)) / 3.0;
  return sum * std::pow(3.0, -level_);
}

QuadratureScheme quadrature(const GasketLevel& level) { return QuadratureScheme(level); }

}  // namespace gasket
