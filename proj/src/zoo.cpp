#include "entropia/zoo.hpp"

#include "entropia/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace entropia {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

AnalyticSystem make_identity(std::size_t m) {
  AnalyticSystem s;
  s.name = "identity";
  s.space = StateSpace::torus(m);
  s.step = [](std::span<double>) {};
  s.inverse = StepFn([](std::span<double>) {});
  s.complex_eval = ComplexFn([](std::span<const Complex> z) { return ComplexPoint(z.begin(), z.end()); });
  s.jet_step = JetFn([](std::span<Jet>) {});
  s.L0 = kIsometryL0;
  s.rho = 0.9;
  s.M0 = 1.0 + s.rho;
  s.exact_entropy = 0.0;
  return s;
}

AnalyticSystem make_circle_map(CircleMapKind kind) {
  AnalyticSystem s;
  s.space = StateSpace::torus(1);
  switch (kind.kind) {
    case CircleMapKind::Kind::doubling:
      s.name = "doubling";
      s.step = [](std::span<double> x) { x[0] = wrap_unit(2.0 * x[0]); };
      s.complex_eval = ComplexFn([](std::span<const Complex> z) { return ComplexPoint{2.0 * z[0]}; });
      s.jet_step = JetFn([](std::span<Jet> u) { u[0] = wrap_unit(2.0 * u[0]); });
      s.L0 = 2.0;
      s.rho = 0.5;
      s.M0 = 2.0 * (1.0 + s.rho);
      s.exact_entropy = std::numbers::ln2;
      break;
    case CircleMapKind::Kind::rotation: {
      double alpha = kind.param;
      if (!std::isfinite(alpha))
        throw Error(ErrorKind::parameter_out_of_range, "rotation angle must be finite");
      alpha = wrap_unit(alpha);
      std::ostringstream os;
      os << "rotation:" << kind.param;
      s.name = os.str();
      s.step = [alpha](std::span<double> x) { x[0] = wrap_unit(x[0] + alpha); };
      s.inverse = StepFn([alpha](std::span<double> x) { x[0] = wrap_unit(x[0] - alpha); });
      s.complex_eval = ComplexFn([alpha](std::span<const Complex> z) { return ComplexPoint{z[0] + alpha}; });
      s.jet_step = JetFn([alpha](std::span<Jet> u) { u[0] = wrap_unit(u[0] + alpha); });
      s.L0 = kIsometryL0;
      s.rho = 0.9;
      s.M0 = 1.0 + s.rho + alpha;
      s.exact_entropy = 0.0;
      break;
    }
    case CircleMapKind::Kind::trig: {
      double c = kind.param;
      if (!(std::abs(c) < 1.0 / kTwoPi))
        throw Error(ErrorKind::parameter_out_of_range, "trig amplitude must satisfy |c| < 1/(2 pi)");
      std::ostringstream os;
      os << "trig:" << c;
      s.name = os.str();
      s.step = [c](std::span<double> x) { x[0] = wrap_unit(2.0 * x[0] + c * std::sin(kTwoPi * x[0])); };
      s.complex_eval = ComplexFn([c](std::span<const Complex> z) {
        return ComplexPoint{2.0 * z[0] + c * std::sin(kTwoPi * z[0])};
      });
      s.jet_step = JetFn([c](std::span<Jet> u) { u[0] = wrap_unit(2.0 * u[0] + c * sin(kTwoPi * u[0])); });
      // |f'| = |2 + 2 pi c cos(2 pi x)| peaks at 2 + 2 pi |c|
      s.L0 = 2.0 + kTwoPi * std::abs(c);
      s.rho = 0.25;
      // |sin(2 pi z)| <= cosh(2 pi Im z)
      s.M0 = 2.0 * (1.0 + s.rho) + std::abs(c) * std::cosh(kTwoPi * s.rho);
      s.exact_entropy = std::numbers::ln2;
      break;
    }
  }
  return s;
}

AnalyticSystem make_toral_automorphism(const IntMatrix2& a) {
  const long det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (det != 1 && det != -1)
    throw Error(ErrorKind::parameter_out_of_range, "toral automorphism needs det = +-1");
  AnalyticSystem s;
  std::ostringstream os;
  os << "toral:" << a[0][0] << ',' << a[0][1] << ',' << a[1][0] << ',' << a[1][1];
  s.name = a == IntMatrix2{{{2, 1}, {1, 1}}} ? "cat" : os.str();
  s.space = StateSpace::torus(2);
  const double a00 = static_cast<double>(a[0][0]), a01 = static_cast<double>(a[0][1]);
  const double a10 = static_cast<double>(a[1][0]), a11 = static_cast<double>(a[1][1]);
  s.step = [=](std::span<double> x) {
    double u = a00 * x[0] + a01 * x[1], v = a10 * x[0] + a11 * x[1];
    x[0] = wrap_unit(u);
    x[1] = wrap_unit(v);
  };
  const double d = static_cast<double>(det);
  const double i00 = a11 / d, i01 = -a01 / d, i10 = -a10 / d, i11 = a00 / d;
  s.inverse = StepFn([=](std::span<double> x) {
    double u = i00 * x[0] + i01 * x[1], v = i10 * x[0] + i11 * x[1];
    x[0] = wrap_unit(u);
    x[1] = wrap_unit(v);
  });
  s.complex_eval = ComplexFn([=](std::span<const Complex> z) {
    return ComplexPoint{a00 * z[0] + a01 * z[1], a10 * z[0] + a11 * z[1]};
  });
  s.jet_step = JetFn([=](std::span<Jet> u) {
    Jet p = a00 * u[0] + a01 * u[1];
    Jet q = a10 * u[0] + a11 * u[1];
    u[0] = wrap_unit(p);
    u[1] = wrap_unit(q);
  });
  // spectral norm from the eigenvalues of A^T A
  double g00 = a00 * a00 + a10 * a10, g11 = a01 * a01 + a11 * a11, g01 = a00 * a01 + a10 * a11;
  double tr = g00 + g11, dt = g00 * g11 - g01 * g01;
  double norm = std::sqrt(tr / 2.0 + std::sqrt(std::max(0.0, tr * tr / 4.0 - dt)));
  s.L0 = std::max(norm, kIsometryL0);
  s.rho = 0.5;
  double row = std::max(std::abs(a00) + std::abs(a01), std::abs(a10) + std::abs(a11));
  s.M0 = row * (1.0 + s.rho);
  double atr = a00 + a11;
  double disc = atr * atr - 4.0 * d;
  double h = 0.0;
  if (disc >= 0.0) {
    double r = std::sqrt(disc);
    for (double lam : {(atr + r) / 2.0, (atr - r) / 2.0})
      if (std::abs(lam) > 1.0) h += std::log(std::abs(lam));
  }
  s.exact_entropy = h;
  return s;
}

AnalyticSystem make_logistic() {
  AnalyticSystem s;
  s.name = "logistic";
  s.space = StateSpace::cube(1);
  s.step = [](std::span<double> x) { x[0] = std::clamp(4.0 * x[0] * (1.0 - x[0]), 0.0, 1.0); };
  s.complex_eval = ComplexFn([](std::span<const Complex> z) { return ComplexPoint{4.0 * z[0] * (1.0 - z[0])}; });
  s.jet_step = JetFn([](std::span<Jet> u) { u[0] = 4.0 * u[0] * (1.0 - u[0]); });
  s.L0 = 4.0;
  s.rho = 0.5;
  // |z||1-z| <= (x + rho)(1 - x + rho) <= (1/2 + rho)^2 for |z - x| < rho, x in [0,1]
  s.M0 = 4.0 * (0.5 + s.rho) * (0.5 + s.rho);
  s.exact_entropy = std::numbers::ln2;
  return s;
}

// ---------------------------------------------------------------------------
// Suspension

namespace {

constexpr double kSeamTol = 1e-12;

double warped(double dt, double height, double fibre, double L) {
  double w = std::pow(L, height) * fibre;
  return std::sqrt(dt * dt + w * w);
}

MetricFn suspension_metric(const AnalyticSystem& base) {
  return [base](std::span<const double> p, std::span<const double> q) {
    const double L = base.L0;
    const std::size_t m = base.dim();
    std::span<const double> xp = p.subspan(1, m), xq = q.subspan(1, m);
    double a = p[0], b = q[0];
    double best = warped(a - b, std::min(a, b), base.space.distance(xp, xq), L);
    // glued route: the higher point is re-expressed one unit lower with f applied
    auto forward = [&](double hi, std::span<const double> xhi, double lo,
                       std::span<const double> xlo) {
      Point fx(xhi.begin(), xhi.end());
      base.step(fx);
      return warped(hi - 1.0 - lo, std::min(hi - 1.0, lo), base.space.distance(fx, xlo), L);
    };
    // inverse route: the lower point is re-expressed one unit higher with f^{-1} applied
    auto backward = [&](double hi, std::span<const double> xhi, double lo,
                        std::span<const double> xlo) {
      Point gx(xlo.begin(), xlo.end());
      (*base.inverse)(gx);
      return warped(lo + 1.0 - hi, std::min(lo + 1.0, hi), base.space.distance(gx, xhi), L);
    };
    if (a >= b) {
      best = std::min(best, forward(a, xp, b, xq));
      if (base.inverse) best = std::min(best, backward(a, xp, b, xq));
    } else {
      best = std::min(best, forward(b, xq, a, xp));
      if (base.inverse) best = std::min(best, backward(b, xq, a, xp));
    }
    return best;
  };
}

StepFn suspension_step(const AnalyticSystem& base, std::size_t i) {
  const double dt = 1.0 / static_cast<double>(i);
  const std::size_t m = base.dim();
  return [base, dt, m](std::span<double> p) {
    double t = p[0] + dt;
    if (t >= 1.0 - kSeamTol) {
      t -= 1.0;
      if (t < kSeamTol) t = 0.0;
      base.step(p.subspan(1, m));
    }
    p[0] = t;
  };
}

}  // namespace

SuspensionSystem make_suspension(const AnalyticSystem& base, std::size_t i) {
  if (i == 0) throw Error(ErrorKind::parameter_out_of_range, "suspension needs i >= 1");
  SuspensionSystem s;
  s.base = base;
  s.i = i;
  AnalyticSystem& sm = s.step_map;
  sm.name = "suspend:" + base.name + ":i=" + std::to_string(i);
  sm.space = StateSpace::product(CoordKind::periodic, base.space);
  sm.step = suspension_step(base, i);
  sm.metric = suspension_metric(base);
  sm.L0 = std::max(std::pow(base.L0, 1.0 / static_cast<double>(i)) * (1.0 + 1e-9), kIsometryL0);
  sm.rho = base.rho;
  sm.M0 = base.M0 + 1.0 + base.rho;
  if (base.exact_entropy) sm.exact_entropy = *base.exact_entropy / static_cast<double>(i);
  return s;
}

AnalyticSystem SuspensionSystem::time_one() const {
  AnalyticSystem t = step_map;
  t.name = "suspend:" + base.name + ":time-one";
  StepFn inner = step_map.step;
  const std::size_t count = i;
  t.step = [inner, count](std::span<double> p) {
    for (std::size_t k = 0; k < count; ++k) inner(p);
  };
  t.L0 = std::max(base.L0 * (1.0 + 1e-9), kIsometryL0);
  t.exact_entropy = base.exact_entropy;
  return t;
}

double suspension_step_norm(const AnalyticSystem& base, std::size_t i, std::size_t samples,
                            std::uint64_t seed) {
  SuspensionSystem s = make_suspension(base, i);
  const AnalyticSystem& sys = s.step_map;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr double h = 1e-7;
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    Point x = random_point(sys.space, rng);
    Point y = x;
    for (double& c : y) c += h * gauss(rng);
    if (y[0] < 0.0) y[0] = -y[0];  // stay on the fundamental domain side of the seam
    if (y[0] >= 1.0) y[0] = 2.0 - y[0] - 2e-12;
    for (std::size_t a = 1; a < y.size(); ++a)
      if (sys.space.coord(a) == CoordKind::interval) y[a] = std::clamp(y[a], 0.0, 1.0);
      else y[a] = wrap_unit(y[a]);
    double d0 = sys.distance(x, y);
    if (d0 <= 0.0) continue;
    worst = std::max(worst, sys.distance(sys.eval(x), sys.eval(y)) / d0);
  }
  return worst;
}

SuspensionSystem suspend(const AnalyticSystem& base, double L0_target, std::size_t samples,
                         std::uint64_t seed) {
  if (!(L0_target > 1.0)) throw Error(ErrorKind::parameter_out_of_range, "L0_target must exceed 1");
  constexpr std::size_t kMaxI = 1000000;
  auto ok = [&](std::size_t i) { return suspension_step_norm(base, i, samples, seed) < L0_target; };
  std::size_t found = 0;
  for (std::size_t i = 1; i <= 64; ++i)
    if (ok(i)) {
      found = i;
      break;
    }
  if (found == 0) {
    // the measured norm decreases with i; bracket then bisect
    std::size_t lo = 64, hi = 128;
    while (hi <= kMaxI && !ok(hi)) {
      lo = hi;
      hi *= 2;
    }
    if (hi > kMaxI) {
      if (!ok(kMaxI))
        throw Error(ErrorKind::parameter_out_of_range,
                    "no i <= 10^6 brings the suspension step below the target");
      hi = kMaxI;
    }
    while (hi - lo > 1) {
      std::size_t mid = lo + (hi - lo) / 2;
      (ok(mid) ? hi : lo) = mid;
    }
    found = hi;
  }
  SuspensionSystem s = make_suspension(base, found);
  s.measured_sup = suspension_step_norm(base, found, samples, seed);
  return s;
}

// ---------------------------------------------------------------------------
// Name and config resolution

namespace {

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::config, "cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
  return v;
}

IntMatrix2 parse_matrix(std::string_view s) {
  IntMatrix2 a{};
  std::size_t k = 0;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(',', start);
    if (end == std::string_view::npos) end = s.size();
    if (k >= 4) throw Error(ErrorKind::config, "matrix needs exactly 4 entries");
    std::string_view tok = s.substr(start, end - start);
    long v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      throw Error(ErrorKind::config, "bad matrix entry '" + std::string(tok) + "'");
    a[k / 2][k % 2] = v;
    ++k;
    start = end + 1;
  }
  if (k != 4) throw Error(ErrorKind::config, "matrix needs exactly 4 entries");
  return a;
}

}  // namespace

SuspensionSystem suspension_by_name(std::string_view name) {
  constexpr std::string_view prefix = "suspend:";
  if (name.substr(0, prefix.size()) != prefix)
    throw Error(ErrorKind::config, "not a suspension name: " + std::string(name));
  std::string_view rest = name.substr(prefix.size());
  std::size_t colon = rest.rfind(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorKind::config, "suspension name needs suspend:<base>:<L0_target>");
  AnalyticSystem base = system_by_name(rest.substr(0, colon));
  return suspend(base, parse_double(rest.substr(colon + 1), "L0_target"));
}

AnalyticSystem system_by_name(std::string_view name) {
  if (name.substr(0, 8) == "suspend:") return suspension_by_name(name).step_map;
  std::size_t colon = name.find(':');
  std::string_view head = name.substr(0, colon);
  std::string_view arg = colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1);
  auto need_arg = [&](std::string_view what) {
    if (arg.empty()) throw Error(ErrorKind::config, std::string(head) + " needs " + std::string(what));
  };
  if (head == "doubling") return make_circle_map(CircleMapKind::doubling());
  if (head == "rotation") {
    double alpha = arg.empty() ? kGoldenAngle : parse_double(arg, "angle");
    return make_circle_map(CircleMapKind::rotation(alpha));
  }
  if (head == "trig") {
    need_arg("an amplitude");
    return make_circle_map(CircleMapKind::trig(parse_double(arg, "amplitude")));
  }
  if (head == "cat") return make_cat_map();
  if (head == "logistic") return make_logistic();
  if (head == "identity") return make_identity(arg.empty() ? 1 : static_cast<std::size_t>(parse_double(arg, "dimension")));
  if (head == "toral") {
    need_arg("a matrix a,b,c,d");
    return make_toral_automorphism(parse_matrix(arg));
  }
  throw Error(ErrorKind::config, "unknown system '" + std::string(name) + "'");
}

AnalyticSystem system_from_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::config, "line " + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto kind = get("kind");
  if (!kind) throw Error(ErrorKind::config, "missing key 'kind'");
  AnalyticSystem sys;
  if (*kind == "rotation") {
    auto alpha = get("alpha");
    if (!alpha) throw Error(ErrorKind::config, "rotation needs 'alpha'");
    sys = make_circle_map(CircleMapKind::rotation(parse_double(*alpha, "alpha")));
  } else if (*kind == "trig") {
    auto c = get("c");
    if (!c) throw Error(ErrorKind::config, "trig needs 'c'");
    sys = make_circle_map(CircleMapKind::trig(parse_double(*c, "c")));
  } else if (*kind == "toral") {
    auto mat = get("matrix");
    if (!mat) throw Error(ErrorKind::config, "toral needs 'matrix'");
    sys = make_toral_automorphism(parse_matrix(*mat));
  } else {
    sys = system_by_name(*kind);
  }
  if (auto v = get("L0")) sys.L0 = parse_double(*v, "L0");
  if (auto v = get("rho")) sys.rho = parse_double(*v, "rho");
  if (auto v = get("M0")) sys.M0 = parse_double(*v, "M0");
  if (auto v = get("name")) sys.name = *v;
  validate_parameters(sys);
  return sys;
}

}  // namespace entropia
