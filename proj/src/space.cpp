#include "entropia/space.hpp"

#include "entropia/error.hpp"

#include <algorithm>
#include <cmath>

namespace entropia {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::numeric_escape: return "numeric escape";
    case ErrorKind::no_jet: return "no jet available";
    case ErrorKind::no_complex_extension: return "no complex extension";
    case ErrorKind::parameter_out_of_range: return "parameter out of range";
    case ErrorKind::resolution_insufficient: return "resolution insufficient";
    case ErrorKind::budget_exceeded: return "budget exceeded";
    case ErrorKind::scale_too_small: return "scale too small for the log-log term";
    case ErrorKind::below_threshold: return "n below threshold";
    case ErrorKind::precondition: return "precondition violated";
    case ErrorKind::config: return "config error";
  }
  return "error";
}

double wrap_unit(double x) {
  double r = x - std::floor(x);
  // floor can round x - floor(x) up to exactly 1 for tiny negative x
  return r >= 1.0 ? 0.0 : r;
}

StateSpace StateSpace::torus(std::size_t m) {
  if (m == 0) throw Error(ErrorKind::parameter_out_of_range, "dimension must be positive");
  return StateSpace(std::vector<CoordKind>(m, CoordKind::periodic));
}

StateSpace StateSpace::cube(std::size_t m) {
  if (m == 0) throw Error(ErrorKind::parameter_out_of_range, "dimension must be positive");
  return StateSpace(std::vector<CoordKind>(m, CoordKind::interval));
}

StateSpace StateSpace::product(CoordKind first, const StateSpace& rest) {
  std::vector<CoordKind> coords{first};
  coords.insert(coords.end(), rest.coords_.begin(), rest.coords_.end());
  return StateSpace(std::move(coords));
}

bool StateSpace::is_torus() const {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](CoordKind k) { return k == CoordKind::periodic; });
}

bool StateSpace::is_cube() const {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](CoordKind k) { return k == CoordKind::interval; });
}

std::string StateSpace::label() const {
  if (is_torus()) return "torus(" + std::to_string(dim()) + ")";
  if (is_cube()) return "cube(" + std::to_string(dim()) + ")";
  std::string s;
  for (auto k : coords_) s += k == CoordKind::periodic ? 'T' : 'I';
  return "product(" + s + ")";
}

double StateSpace::coord_distance(std::size_t i, double a, double b) const {
  double d = std::abs(a - b);
  if (coords_[i] == CoordKind::periodic) {
    if (d >= 1.0) d = std::fmod(d, 1.0);
    d = std::min(d, 1.0 - d);
  }
  return d;
}

double StateSpace::distance(std::span<const double> a, std::span<const double> b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    double d = coord_distance(i, a[i], b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

void StateSpace::normalize(std::span<double> p) const {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == CoordKind::periodic)
      p[i] = wrap_unit(p[i]);
    else
      p[i] = std::clamp(p[i], 0.0, 1.0);
  }
}

void StateSpace::displacement(std::span<const double> a, std::span<const double> b,
                              std::span<double> out) const {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    double d = b[i] - a[i];
    if (coords_[i] == CoordKind::periodic) d -= std::floor(d + 0.5);
    out[i] = d;
  }
}

}  // namespace entropia
