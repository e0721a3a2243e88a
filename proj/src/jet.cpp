#include "entropia/jet.hpp"

#include "entropia/space.hpp"

namespace entropia {

double Jet::derivative(std::size_t k) const {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f * c[k];
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r(0.0, std::min(a.order, b.order));
  for (std::size_t k = 0; k <= r.order; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
    r.c[k] = s;
  }
  return r;
}

namespace {

// Joint recurrence for s = sin(u), co = cos(u):
//   k s_k = sum_{j=1..k} j u_j co_{k-j},  k co_k = -sum_{j=1..k} j u_j s_{k-j}
void sincos(const Jet& u, Jet& s, Jet& co) {
  s = Jet(std::sin(u.c[0]), u.order);
  co = Jet(std::cos(u.c[0]), u.order);
  for (std::size_t k = 1; k <= u.order; ++k) {
    double as = 0.0, ac = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      as += static_cast<double>(j) * u.c[j] * co.c[k - j];
      ac += static_cast<double>(j) * u.c[j] * s.c[k - j];
    }
    s.c[k] = as / static_cast<double>(k);
    co.c[k] = -ac / static_cast<double>(k);
  }
}

}  // namespace

Jet sin(const Jet& u) {
  Jet s, co;
  sincos(u, s, co);
  return s;
}

Jet cos(const Jet& u) {
  Jet s, co;
  sincos(u, s, co);
  return co;
}

Jet wrap_unit(Jet u) {
  u.c[0] = entropia::wrap_unit(u.c[0]);
  return u;
}

}  // namespace entropia
