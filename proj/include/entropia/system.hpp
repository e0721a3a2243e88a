#pragma once

#include "entropia/jet.hpp"
#include "entropia/space.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace entropia {

using Complex = std::complex<double>;
using ComplexPoint = std::vector<Complex>;

/// In-place map on a coordinate vector; output is normalized to the fundamental domain.
using StepFn = std::function<void(std::span<double>)>;
/// Lift of the map to complex coordinates (no wraparound).
using ComplexFn = std::function<ComplexPoint(std::span<const Complex>)>;
/// In-place map on Taylor jets; periodic coordinates wrap their constant term only.
using JetFn = std::function<void(std::span<Jet>)>;
using MetricFn = std::function<double(std::span<const double>, std::span<const double>)>;

/// A self-describing map on a flat model space.
///
/// L0 is a certified bound on sup |Df| (strictly above 1), rho the analytic
/// radius and M0 the sup of the complex extension on rho-polydiscs around real
/// points. Instances are immutable once built by the zoo and safe to share.
struct AnalyticSystem {
  std::string name;
  StateSpace space = StateSpace::torus(1);
  StepFn step;
  std::optional<StepFn> inverse;
  std::optional<ComplexFn> complex_eval;
  std::optional<JetFn> jet_step;
  /// Replaces the space metric when set (suspension carriers).
  std::optional<MetricFn> metric;
  double L0 = 2.0;
  double rho = 0.5;
  double M0 = 1.0;
  std::optional<double> exact_entropy;

  std::size_t dim() const { return space.dim(); }
  Point eval(const Point& x) const;
  double distance(std::span<const double> a, std::span<const double> b) const;
  bool uses_space_metric() const { return !metric.has_value(); }
};

/// Checks the scalar fields (L0 > 1, rho in (0,1), M0 > 0, entropy >= 0).
void validate_parameters(const AnalyticSystem& sys);

/// Orbit segment x, f(x), ..., f^n(x). Throws numeric_escape naming the step.
std::vector<Point> iterate_orbit(const AnalyticSystem& sys, const Point& x, std::size_t n);

/// max_{0<=i<n} d(f^i x, f^i y).
double bowen_distance(const AnalyticSystem& sys, const Point& x, const Point& y, std::size_t n);

/// Operator-norm estimates of d^k f^n(x), k = 1..kmax.
///
/// k = 1 is the exact spectral norm of the Jacobian. Higher orders maximise
/// |d^k f^n(x)[v,...,v]| over the coordinate axes plus a fixed quasi-random
/// set of 64 unit directions, so they are lower estimates of the true norm.
std::vector<double> jet_norms(const AnalyticSystem& sys, const Point& x, std::size_t n,
                              std::size_t kmax);

/// Max modulus (largest component) of the complex extension over `samples`
/// Halton points of the distinguished boundary of the polydisc. Nested in
/// `samples`, hence nondecreasing.
double polydisc_sup(const AnalyticSystem& sys, const Point& center, double radius,
                    std::size_t samples);

/// i-th element of the radical-inverse sequence in the given prime base.
double radical_inverse(std::uint64_t i, unsigned base);
/// Halton point of dimension `dim` with index i (bases 2, 3, 5, ...).
std::vector<double> halton(std::uint64_t i, std::size_t dim);

/// The rescaled step maps g_i(t) = s1 (g(t/s1 + g^{i-1} x) - g^i x), g = f^n,
/// s1 = L0^n n^2, defined on the ball B(0, 2).
class RescaledMap {
 public:
  RescaledMap(const AnalyticSystem& base, const Point& x, std::size_t n, std::size_t max_index);

  const AnalyticSystem& base() const { return base_; }
  std::size_t n() const { return n_; }
  double s1() const { return s1_; }
  double log_s1() const { return log_s1_; }
  /// Anchor g^{i-1}(x) = f^{n(i-1)}(x), for 1 <= i <= max_index + 1.
  const Point& anchor(std::size_t i) const { return anchors_.at(i - 1); }
  std::size_t max_index() const { return anchors_.size() - 1; }

  std::vector<double> eval(std::size_t i, std::span<const double> t) const;
  /// Jet-based estimates of ||d^k g_i(t)||, k = 1..kmax: s1^{1-k} ||d^k f^n(y + t/s1)||.
  std::vector<double> derivative_norms(std::size_t i, std::span<const double> t,
                                       std::size_t kmax) const;

 private:
  AnalyticSystem base_;
  std::size_t n_;
  double s1_;
  double log_s1_;
  std::vector<Point> anchors_;
};

/// The n-th iterate f^n as a system (L0^n, same rho/M0 bookkeeping, entropy n h).
AnalyticSystem power_map(const AnalyticSystem& sys, std::size_t n);

// Sampled certification of the AnalyticSystem invariants.

/// Largest d(f x, f y)/d(x, y) over random pairs at separation ~h.
double sampled_lipschitz_ratio(const AnalyticSystem& sys, std::size_t samples, std::uint64_t seed,
                               double h = 1e-6);
/// True when every sampled image lies in the fundamental domain.
bool sampled_domain_check(const AnalyticSystem& sys, std::size_t samples, std::uint64_t seed);
/// Largest |complex_eval(x) - eval(x)| over real samples (0 without an extension).
double sampled_complex_disagreement(const AnalyticSystem& sys, std::size_t samples,
                                    std::uint64_t seed);
/// Uniform random point of the fundamental domain.
Point random_point(const StateSpace& space, std::mt19937_64& rng);

}  // namespace entropia
