#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cosafe/scene.hpp"
#include "cosafe/trace.hpp"
#include "cosafe/world.hpp"

namespace cosafe {

/// Workspace description the decomposition is built from: bounds,
/// propositional regions and the fixed-body footprints.
struct Workspace {
  Rect bounds;
  std::vector<Rect> regions;  // indexed by proposition id, [0] unused
  std::vector<Rect> fixed;

  static Workspace from_scene(const Scene& scene) {
    Workspace w;
    w.bounds = scene.knowledge.bounds;
    w.regions = scene.regions;
    for (const auto& b : scene.knowledge.bodies)
      if (b.kind == BodyKind::Fixed) w.fixed.push_back(b.rect);
    return w;
  }
};

struct Cell {
  Rect rect;
  int label = 0;  // proposition id
  int ix = 0, iy = 0;
};

/// Region-conforming rectangular grid over the accessible workspace.
/// Grid lines include every region and fixed-obstacle edge, so each cell is
/// wholly inside or outside any region/footprint. Cells inside fixed
/// footprints are discarded.
class Decomposition {
 public:
  Decomposition(std::vector<double> xs, std::vector<double> ys, std::vector<Cell> cells,
                std::vector<int> grid_to_cell, Rect bounds)
      : xs_(std::move(xs)),
        ys_(std::move(ys)),
        cells_(std::move(cells)),
        grid_to_cell_(std::move(grid_to_cell)),
        bounds_(bounds) {
    adjacency_.resize(cells_.size());
    for (size_t c = 0; c < cells_.size(); ++c) {
      const Cell& cell = cells_[c];
      auto link = [&](int ix, int iy) {
        const int other = cell_at(ix, iy);
        if (other >= 0) adjacency_[c].push_back(other);
      };
      link(cell.ix - 1, cell.iy);
      link(cell.ix + 1, cell.iy);
      link(cell.ix, cell.iy - 1);
      link(cell.ix, cell.iy + 1);
    }
  }

  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<int>& neighbors(int cell) const {
    return adjacency_[static_cast<size_t>(cell)];
  }
  const Rect& bounds() const { return bounds_; }

  int label(int cell) const { return cells_[static_cast<size_t>(cell)].label; }
  Vec2 center(int cell) const { return cells_[static_cast<size_t>(cell)].rect.center; }

  /// Cell containing a point; boundary points resolve to the +x/+y side.
  /// Returns -1 for points outside the accessible workspace.
  int locate_cell(const Vec2& p) const {
    if (p.x < xs_.front() || p.x > xs_.back() || p.y < ys_.front() || p.y > ys_.back())
      return -1;
    const int ix = interval_index(xs_, p.x);
    const int iy = interval_index(ys_, p.y);
    return cell_at(ix, iy);
  }

  struct Located {
    int cell;
    int label;
  };

  Located locate(const Vec2& p) const {
    const int c = locate_cell(p);
    if (c < 0) throw std::out_of_range("position not in the accessible workspace");
    return {c, label(c)};
  }

  double total_area() const {
    double a = 0.0;
    for (const auto& c : cells_) a += c.rect.area();
    return a;
  }

 private:
  int cell_at(int ix, int iy) const {
    const int nx = static_cast<int>(xs_.size()) - 1;
    const int ny = static_cast<int>(ys_.size()) - 1;
    if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return -1;
    return grid_to_cell_[static_cast<size_t>(iy) * static_cast<size_t>(nx) +
                         static_cast<size_t>(ix)];
  }

  // Index i with cuts[i] <= v < cuts[i+1]; v on a cut goes to the +side.
  static int interval_index(const std::vector<double>& cuts, double v) {
    auto it = std::upper_bound(cuts.begin(), cuts.end(), v);
    int i = static_cast<int>(it - cuts.begin()) - 1;
    if (i >= static_cast<int>(cuts.size()) - 1) i = static_cast<int>(cuts.size()) - 2;
    return i;
  }

  std::vector<double> xs_, ys_;  // sorted cut coordinates
  std::vector<Cell> cells_;
  std::vector<int> grid_to_cell_;  // -1 where discarded
  std::vector<std::vector<int>> adjacency_;
  Rect bounds_;
};

namespace detail {

inline void add_cuts(std::vector<double>& cuts, const Rect& r, double lo, double hi, bool x_axis) {
  const double a = x_axis ? r.min_x() : r.min_y();
  const double b = x_axis ? r.max_x() : r.max_y();
  if (a > lo && a < hi) cuts.push_back(a);
  if (b > lo && b < hi) cuts.push_back(b);
}

inline void dedupe_cuts(std::vector<double>& cuts) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             cuts.end());
}

}  // namespace detail

/// Decompose the fixed-obstacle-free workspace into labeled cells.
inline Decomposition decompose(const Workspace& w, double resolution) {
  if (w.bounds.half.x <= 0 || w.bounds.half.y <= 0)
    throw std::invalid_argument("degenerate workspace");
  if (resolution <= 0) throw std::invalid_argument("resolution must be positive");
  for (size_t i = 1; i < w.regions.size(); ++i)
    for (size_t j = i + 1; j < w.regions.size(); ++j)
      if (overlap_area(w.regions[i], w.regions[j]) > kOverlapAreaTolerance)
        throw std::invalid_argument("overlapping propositional regions");

  std::vector<double> xs{w.bounds.min_x(), w.bounds.max_x()};
  std::vector<double> ys{w.bounds.min_y(), w.bounds.max_y()};
  for (size_t i = 1; i < w.regions.size(); ++i) {
    detail::add_cuts(xs, w.regions[i], w.bounds.min_x(), w.bounds.max_x(), true);
    detail::add_cuts(ys, w.regions[i], w.bounds.min_y(), w.bounds.max_y(), false);
  }
  for (const auto& f : w.fixed) {
    detail::add_cuts(xs, f, w.bounds.min_x(), w.bounds.max_x(), true);
    detail::add_cuts(ys, f, w.bounds.min_y(), w.bounds.max_y(), false);
  }
  // Uniform cuts at the requested resolution.
  for (double x = w.bounds.min_x() + resolution; x < w.bounds.max_x() - 1e-12; x += resolution)
    xs.push_back(x);
  for (double y = w.bounds.min_y() + resolution; y < w.bounds.max_y() - 1e-12; y += resolution)
    ys.push_back(y);
  detail::dedupe_cuts(xs);
  detail::dedupe_cuts(ys);

  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;
  std::vector<Cell> cells;
  std::vector<int> grid_to_cell(static_cast<size_t>(nx) * static_cast<size_t>(ny), -1);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      Rect r = Rect::from_min_max({xs[static_cast<size_t>(ix)], ys[static_cast<size_t>(iy)]},
                                  {xs[static_cast<size_t>(ix) + 1], ys[static_cast<size_t>(iy) + 1]});
      const Vec2 c = r.center;
      bool in_fixed = false;
      for (const auto& f : w.fixed)
        if (f.contains(c)) {
          in_fixed = true;
          break;
        }
      if (in_fixed) continue;
      Cell cell;
      cell.rect = r;
      cell.ix = ix;
      cell.iy = iy;
      cell.label = 0;
      for (size_t p = 1; p < w.regions.size(); ++p)
        if (w.regions[p].contains(c)) {
          cell.label = static_cast<int>(p);
          break;
        }
      grid_to_cell[static_cast<size_t>(iy) * static_cast<size_t>(nx) + static_cast<size_t>(ix)] =
          static_cast<int>(cells.size());
      cells.push_back(cell);
    }
  }
  return Decomposition(std::move(xs), std::move(ys), std::move(cells), std::move(grid_to_cell),
                       w.bounds);
}

inline double default_resolution(const Rect& bounds) {
  return std::min(bounds.half.x, bounds.half.y) * 2.0 / 20.0;
}

/// Map a sequence of robot positions through locate and collapse duplicates.
inline DiscreteTrace extract_trace(const Decomposition& d, const std::vector<Vec2>& path) {
  DiscreteTrace t;
  for (const auto& p : path) t.push(d.locate(p).label);
  return t;
}

}  // namespace cosafe
