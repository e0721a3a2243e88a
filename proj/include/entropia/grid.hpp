#pragma once

#include "entropia/space.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace entropia {

/// Dyadic lattice of step 2^-g on the fundamental domain.
///
/// Periodic axes carry 2^g nodes k 2^-g (k < 2^g), interval axes 2^g + 1 nodes.
/// Linear indices are row-major with coordinate 0 most significant, so index
/// order is lexicographic order on grid coordinates.
class Grid {
 public:
  Grid(StateSpace space, unsigned g);

  const StateSpace& space() const { return space_; }
  unsigned g() const { return g_; }
  double step() const { return step_; }
  std::size_t dim() const { return space_.dim(); }
  std::int64_t axis_count(std::size_t axis) const { return counts_[axis]; }
  std::int64_t size() const { return size_; }
  /// Covering radius (sqrt(m)/2) 2^-g.
  double covering_radius() const;

  Point point(std::int64_t index) const;
  void point(std::int64_t index, std::span<double> out) const;
  /// Index of the node nearest to p.
  std::int64_t nearest(std::span<const double> p) const;
  /// Index of the node at integer coordinates (periodic axes wrap, interval
  /// axes return -1 when out of range).
  std::int64_t index_of(std::span<const std::int64_t> coords) const;
  void coords_of(std::int64_t index, std::span<std::int64_t> out) const;
  /// Nodes whose integer offset from node `centre` is at most ceil(radius/step)
  /// on every axis (each node once), sorted. Not filtered by distance.
  std::vector<std::int64_t> window(std::int64_t centre, double radius) const;

 private:
  StateSpace space_;
  unsigned g_;
  double step_;
  std::vector<std::int64_t> counts_;
  std::int64_t size_;
};

/// A subset of grid nodes kept in lexicographic order with O(1) membership.
class Region {
 public:
  /// The whole grid.
  explicit Region(const Grid& grid);
  /// Arbitrary node indices (sorted and deduplicated).
  Region(const Grid& grid, std::vector<std::int64_t> indices);

  const Grid& grid() const { return *grid_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::int64_t index(std::size_t pos) const { return indices_[pos]; }
  const std::vector<std::int64_t>& indices() const { return indices_; }
  /// Position of a grid index inside the region, or -1.
  std::int64_t position(std::int64_t grid_index) const;
  bool is_full() const { return full_; }

 private:
  const Grid* grid_;
  std::vector<std::int64_t> indices_;
  std::vector<std::int32_t> lookup_;
  bool full_ = false;
};

}  // namespace entropia
