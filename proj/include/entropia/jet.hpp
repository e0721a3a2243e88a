#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace entropia {

/// Truncated univariate Taylor series c[0] + c[1] t + ... + c[kMaxOrder] t^kMaxOrder.
///
/// Pushing x + t v through a map with Jet arithmetic gives the directional
/// derivatives d^k f(x)[v,...,v] = k! c[k]. Coefficients beyond `order` are
/// kept at zero.
struct Jet {
  static constexpr std::size_t kMaxOrder = 8;
  std::array<double, kMaxOrder + 1> c{};
  std::size_t order = kMaxOrder;

  Jet() = default;
  Jet(double value, std::size_t ord) : order(ord) { c[0] = value; }
  static Jet variable(double value, double slope, std::size_t ord) {
    Jet j(value, ord);
    if (ord >= 1) j.c[1] = slope;
    return j;
  }

  double value() const { return c[0]; }
  /// k-th derivative along the seed direction.
  double derivative(std::size_t k) const;
};

inline Jet operator+(Jet a, const Jet& b) {
  for (std::size_t k = 0; k <= a.order; ++k) a.c[k] += b.c[k];
  return a;
}
inline Jet operator-(Jet a, const Jet& b) {
  for (std::size_t k = 0; k <= a.order; ++k) a.c[k] -= b.c[k];
  return a;
}
inline Jet operator-(Jet a) {
  for (std::size_t k = 0; k <= a.order; ++k) a.c[k] = -a.c[k];
  return a;
}
inline Jet operator+(Jet a, double s) {
  a.c[0] += s;
  return a;
}
inline Jet operator+(double s, Jet a) { return a + s; }
inline Jet operator-(Jet a, double s) {
  a.c[0] -= s;
  return a;
}
inline Jet operator-(double s, const Jet& a) { return -a + s; }
inline Jet operator*(Jet a, double s) {
  for (std::size_t k = 0; k <= a.order; ++k) a.c[k] *= s;
  return a;
}
inline Jet operator*(double s, Jet a) { return a * s; }

Jet operator*(const Jet& a, const Jet& b);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
/// Subtracts floor of the constant term; derivatives are unchanged.
Jet wrap_unit(Jet u);

}  // namespace entropia
