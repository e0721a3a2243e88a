#include "entropia/system.hpp"

#include "entropia/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace entropia {

Point AnalyticSystem::eval(const Point& x) const {
  Point y = x;
  step(y);
  return y;
}

double AnalyticSystem::distance(std::span<const double> a, std::span<const double> b) const {
  if (metric) return (*metric)(a, b);
  return space.distance(a, b);
}

void validate_parameters(const AnalyticSystem& sys) {
  if (!(sys.L0 > 1.0))
    throw Error(ErrorKind::parameter_out_of_range, sys.name + ": L0 must exceed 1");
  if (!(sys.rho > 0.0 && sys.rho < 1.0))
    throw Error(ErrorKind::parameter_out_of_range, sys.name + ": rho must lie in (0,1)");
  if (!(sys.M0 > 0.0))
    throw Error(ErrorKind::parameter_out_of_range, sys.name + ": M0 must be positive");
  if (sys.exact_entropy && !(*sys.exact_entropy >= 0.0))
    throw Error(ErrorKind::parameter_out_of_range, sys.name + ": entropy must be >= 0");
  if (!sys.step) throw Error(ErrorKind::precondition, sys.name + ": missing step map");
}

namespace {

void check_finite(const Point& p, std::size_t step_index) {
  for (double v : p)
    if (!std::isfinite(v))
      throw Error(ErrorKind::numeric_escape,
                  "non-finite coordinate at step " + std::to_string(step_index));
}

}  // namespace

std::vector<Point> iterate_orbit(const AnalyticSystem& sys, const Point& x, std::size_t n) {
  if (x.size() != sys.dim())
    throw Error(ErrorKind::precondition, "point dimension does not match the space");
  std::vector<Point> orbit;
  orbit.reserve(n + 1);
  Point p = x;
  check_finite(p, 0);
  sys.space.normalize(p);
  orbit.push_back(p);
  for (std::size_t i = 1; i <= n; ++i) {
    sys.step(p);
    check_finite(p, i);
    orbit.push_back(p);
  }
  return orbit;
}

double bowen_distance(const AnalyticSystem& sys, const Point& x, const Point& y, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::precondition, "bowen distance needs n >= 1");
  auto ox = iterate_orbit(sys, x, n - 1);
  auto oy = iterate_orbit(sys, y, n - 1);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, sys.distance(ox[i], oy[i]));
  return d;
}

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

std::vector<double> halton(std::uint64_t i, std::size_t dim) {
  static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (dim > std::size(primes)) throw Error(ErrorKind::precondition, "halton dimension too large");
  std::vector<double> h(dim);
  for (std::size_t d = 0; d < dim; ++d) h[d] = radical_inverse(i, primes[d]);
  return h;
}

namespace {

std::vector<Jet> propagate(const AnalyticSystem& sys, const Point& x, std::span<const double> dir,
                           std::size_t n, std::size_t order) {
  std::vector<Jet> state(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) state[j] = Jet::variable(x[j], dir[j], order);
  for (std::size_t i = 0; i < n; ++i) (*sys.jet_step)(state);
  return state;
}

// Largest eigenvalue of the symmetric positive semidefinite matrix JtJ.
double spectral_norm(const std::vector<std::vector<double>>& cols) {
  std::size_t m = cols.size();
  std::vector<double> g(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      double s = 0.0;
      for (std::size_t r = 0; r < cols[a].size(); ++r) s += cols[a][r] * cols[b][r];
      g[a * m + b] = s;
    }
  if (m == 1) return std::sqrt(g[0]);
  if (m == 2) {
    double tr = g[0] + g[3], det = g[0] * g[3] - g[1] * g[2];
    double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return std::sqrt(std::max(0.0, tr / 2.0 + disc));
  }
  std::vector<double> v(m), w(m);
  for (std::size_t a = 0; a < m; ++a) v[a] = 1.0 + 0.1 * static_cast<double>(a);
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    for (std::size_t a = 0; a < m; ++a) {
      w[a] = 0.0;
      for (std::size_t b = 0; b < m; ++b) w[a] += g[a * m + b] * v[b];
    }
    double nrm = 0.0;
    for (double c : w) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    for (std::size_t a = 0; a < m; ++a) v[a] = w[a] / nrm;
    lambda = nrm;
  }
  return std::sqrt(lambda);
}

std::vector<std::vector<double>> probe_directions(std::size_t m) {
  std::vector<std::vector<double>> dirs;
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<double> e(m, 0.0);
    e[a] = 1.0;
    dirs.push_back(e);
  }
  if (m == 1) return dirs;
  constexpr std::size_t kDirections = 64;
  for (std::uint64_t i = 1; dirs.size() < m + kDirections; ++i) {
    std::vector<double> v(m);
    if (m == 2) {
      double th = 2.0 * std::numbers::pi * radical_inverse(i, 2);
      v = {std::cos(th), std::sin(th)};
    } else {
      // Box-Muller on Halton coordinates, then normalise
      auto h = halton(i, 2 * m);
      double nrm = 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        double u1 = std::max(h[2 * a], 1e-12);
        v[a] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * h[2 * a + 1]);
        nrm += v[a] * v[a];
      }
      nrm = std::sqrt(nrm);
      if (nrm == 0.0) continue;
      for (double& c : v) c /= nrm;
    }
    dirs.push_back(v);
  }
  return dirs;
}

}  // namespace

std::vector<double> jet_norms(const AnalyticSystem& sys, const Point& x, std::size_t n,
                              std::size_t kmax) {
  if (!sys.jet_step) throw Error(ErrorKind::no_jet, sys.name);
  if (kmax == 0 || kmax > Jet::kMaxOrder)
    throw Error(ErrorKind::precondition, "kmax must lie in [1, 8]");
  const std::size_t m = sys.dim();
  std::vector<double> norms(kmax, 0.0);
  std::vector<std::vector<double>> jac(m);
  auto dirs = probe_directions(m);
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    auto out = propagate(sys, x, dirs[d], n, kmax);
    if (d < m) {
      jac[d].resize(m);
      for (std::size_t r = 0; r < m; ++r) jac[d][r] = out[r].c[1];
    }
    for (std::size_t k = 2; k <= kmax; ++k) {
      double s = 0.0;
      for (const auto& j : out) s += j.derivative(k) * j.derivative(k);
      norms[k - 1] = std::max(norms[k - 1], std::sqrt(s));
    }
  }
  norms[0] = spectral_norm(jac);
  for (double v : norms)
    if (!std::isfinite(v)) throw Error(ErrorKind::numeric_escape, "jet overflow");
  return norms;
}

double polydisc_sup(const AnalyticSystem& sys, const Point& center, double radius,
                    std::size_t samples) {
  if (!sys.complex_eval) throw Error(ErrorKind::no_complex_extension, sys.name);
  if (radius > sys.rho * (1.0 + 1e-12))
    throw Error(ErrorKind::precondition, "polydisc radius exceeds the analytic radius");
  const std::size_t m = sys.dim();
  double best = 0.0;
  ComplexPoint z(m);
  for (std::size_t i = 0; i < samples; ++i) {
    auto h = halton(i, m);
    for (std::size_t a = 0; a < m; ++a)
      z[a] = center[a] + std::polar(radius, 2.0 * std::numbers::pi * h[a]);
    for (const Complex& w : (*sys.complex_eval)(z)) best = std::max(best, std::abs(w));
  }
  return best;
}

RescaledMap::RescaledMap(const AnalyticSystem& base, const Point& x, std::size_t n,
                         std::size_t max_index)
    : base_(base), n_(n) {
  if (n == 0) throw Error(ErrorKind::precondition, "rescaled map needs n >= 1");
  long double s1 = std::pow(static_cast<long double>(base.L0), static_cast<long double>(n)) *
                   static_cast<long double>(n) * static_cast<long double>(n);
  s1_ = static_cast<double>(s1);
  log_s1_ = static_cast<double>(n) * std::log(base.L0) + 2.0 * std::log(static_cast<double>(n));
  if (!std::isfinite(s1_)) throw Error(ErrorKind::numeric_escape, "s1 overflow");
  auto orbit = iterate_orbit(base, x, n * max_index);
  for (std::size_t i = 0; i <= max_index; ++i) anchors_.push_back(orbit[i * n]);
}

std::vector<double> RescaledMap::eval(std::size_t i, std::span<const double> t) const {
  if (i == 0 || i > max_index()) throw Error(ErrorKind::precondition, "rescaled index out of range");
  const Point& y = anchor(i);
  const Point& target = anchor(i + 1);
  Point p(y.size());
  for (std::size_t a = 0; a < y.size(); ++a) p[a] = y[a] + t[a] / s1_;
  for (std::size_t a = 0; a < p.size(); ++a)
    if (base_.space.coord(a) == CoordKind::periodic) p[a] = wrap_unit(p[a]);
  for (std::size_t k = 0; k < n_; ++k) base_.step(p);
  std::vector<double> out(p.size());
  base_.space.displacement(target, p, out);
  for (double& v : out) v *= s1_;
  return out;
}

std::vector<double> RescaledMap::derivative_norms(std::size_t i, std::span<const double> t,
                                                  std::size_t kmax) const {
  const Point& y = anchor(i);
  Point p(y.size());
  for (std::size_t a = 0; a < y.size(); ++a) p[a] = y[a] + t[a] / s1_;
  auto norms = jet_norms(base_, p, n_, kmax);
  for (std::size_t k = 1; k <= kmax; ++k)
    norms[k - 1] *= std::exp((1.0 - static_cast<double>(k)) * log_s1_);
  return norms;
}

AnalyticSystem power_map(const AnalyticSystem& sys, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::precondition, "power needs n >= 1");
  AnalyticSystem p = sys;
  p.name = sys.name + "^" + std::to_string(n);
  StepFn inner = sys.step;
  p.step = [inner, n](std::span<double> x) {
    for (std::size_t k = 0; k < n; ++k) inner(x);
  };
  if (sys.jet_step) {
    JetFn jinner = *sys.jet_step;
    p.jet_step = JetFn([jinner, n](std::span<Jet> u) {
      for (std::size_t k = 0; k < n; ++k) jinner(u);
    });
  }
  p.complex_eval.reset();
  p.inverse.reset();
  p.L0 = std::pow(sys.L0, static_cast<double>(n));
  if (sys.exact_entropy) p.exact_entropy = *sys.exact_entropy * static_cast<double>(n);
  return p;
}

Point random_point(const StateSpace& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point p(space.dim());
  for (double& c : p) c = u(rng);
  return p;
}

double sampled_lipschitz_ratio(const AnalyticSystem& sys, std::size_t samples,
                               std::uint64_t seed, double h) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Point x = random_point(sys.space, rng);
    Point y = x;
    for (std::size_t a = 0; a < y.size(); ++a) {
      y[a] += h * gauss(rng);
      if (sys.space.coord(a) == CoordKind::interval) y[a] = std::clamp(y[a], 0.0, 1.0);
    }
    sys.space.normalize(y);
    double d0 = sys.distance(x, y);
    if (d0 <= 0.0) continue;
    worst = std::max(worst, sys.distance(sys.eval(x), sys.eval(y)) / d0);
  }
  return worst;
}

bool sampled_domain_check(const AnalyticSystem& sys, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    Point y = sys.eval(random_point(sys.space, rng));
    for (std::size_t a = 0; a < y.size(); ++a) {
      bool ok = sys.space.coord(a) == CoordKind::periodic ? (y[a] >= 0.0 && y[a] < 1.0)
                                                           : (y[a] >= 0.0 && y[a] <= 1.0);
      if (!ok) return false;
    }
  }
  return true;
}

double sampled_complex_disagreement(const AnalyticSystem& sys, std::size_t samples,
                                    std::uint64_t seed) {
  if (!sys.complex_eval) return 0.0;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Point x = random_point(sys.space, rng);
    Point y = sys.eval(x);
    ComplexPoint z(x.begin(), x.end());
    ComplexPoint w = (*sys.complex_eval)(z);
    for (std::size_t a = 0; a < y.size(); ++a) {
      double re = w[a].real();
      double d = sys.space.coord(a) == CoordKind::periodic
                     ? sys.space.coord_distance(a, wrap_unit(re), y[a])
                     : std::abs(re - y[a]);
      worst = std::max({worst, d, std::abs(w[a].imag())});
    }
  }
  return worst;
}

}  // namespace entropia
