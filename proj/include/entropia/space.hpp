#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace entropia {

/// A state is a flat coordinate vector in the fundamental domain of its space.
using Point = std::vector<double>;

enum class CoordKind {
  periodic,  // [0,1) with wraparound
  interval,  // [0,1]
};

/// Flat model space: a product of circles and unit intervals.
///
/// torus(m) and cube(m) are the two homogeneous cases. Mixed products only
/// arise as the carrier of a suspension (vertical coordinate first).
class StateSpace {
 public:
  static StateSpace torus(std::size_t m);
  static StateSpace cube(std::size_t m);
  static StateSpace product(CoordKind first, const StateSpace& rest);

  std::size_t dim() const { return coords_.size(); }
  CoordKind coord(std::size_t i) const { return coords_[i]; }
  bool is_torus() const;
  bool is_cube() const;
  std::string label() const;

  /// Per-coordinate distance: wrapped for periodic, absolute for interval.
  double coord_distance(std::size_t i, double a, double b) const;
  /// Euclidean combination of the per-coordinate distances.
  double distance(std::span<const double> a, std::span<const double> b) const;
  /// Wraps periodic coordinates into [0,1) and clamps interval coordinates.
  void normalize(std::span<double> p) const;
  /// Signed displacement b - a, periodic coordinates lifted into [-1/2, 1/2).
  void displacement(std::span<const double> a, std::span<const double> b,
                    std::span<double> out) const;

  bool operator==(const StateSpace&) const = default;

 private:
  explicit StateSpace(std::vector<CoordKind> coords) : coords_(std::move(coords)) {}
  std::vector<CoordKind> coords_;
};

double wrap_unit(double x);

}  // namespace entropia
