#pragma once

#include "entropia/grid.hpp"
#include "entropia/system.hpp"

#include <chrono>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace entropia {

/// Wall-clock allowance shared by a pipeline; checked inside long loops.
class Budget {
 public:
  static Budget unlimited() { return Budget(); }
  static Budget seconds(double s);

  bool expired() const;
  /// Throws budget_exceeded once the deadline has passed.
  void check() const;

 private:
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

/// Cardinalities from one covering computation at (n, eps).
///
/// s_lower is a maximal (n, eps)-separated set (pairwise d_n > eps). It is
/// also (n, eps)-spanning, so r_upper is the smaller of that set and the
/// greedy cover (d_n <= eps); greedy_count keeps the raw cover size.
struct SpanningResult {
  std::size_t n = 0;
  double eps = 0.0;
  std::size_t r_upper = 0;
  std::size_t s_lower = 0;
  std::size_t greedy_count = 0;
  unsigned grid_g = 0;
  std::string method;
};

/// Orbit table of a region plus d_n queries and the two greedy passes.
class CoverEngine {
 public:
  /// Precomputes f^0..f^{n_max-1} of every region node (data-parallel).
  CoverEngine(const AnalyticSystem& sys, const Region& region, std::size_t n_max,
              const Budget& budget = Budget::unlimited());

  const Region& region() const { return region_; }
  std::size_t n_max() const { return n_max_; }

  /// d_n between region positions p and q.
  double dn(std::size_t p, std::size_t q, std::size_t n) const;
  /// d_n if it is at most eps, +inf otherwise (early exit).
  double dn_capped(std::size_t p, std::size_t q, std::size_t n, double eps) const;

  /// Positions q (including p) with d(p, q) <= radius, in increasing order of
  /// grid index when the system uses the space metric.
  std::vector<std::size_t> neighbours(std::size_t p, double radius) const;

  /// Lexicographic scan: take every position not within eps (in d_n) of an
  /// earlier pick. Pairwise separation > eps, and maximal.
  std::vector<std::size_t> separated_set(std::size_t n, double eps) const;

  /// Seeds are the uncovered positions in lexicographic order; each seed gets
  /// the centre farthest from it (d_n <= eps, not before the seed, ties to the
  /// lowest index), and the centre's closed d_n-ball is marked covered.
  std::vector<std::size_t> greedy_cover(std::size_t n, double eps) const;

  /// Gonzalez farthest-point ordering: start at position 0, repeatedly add the
  /// position farthest in d_n from the chosen centres (ties to the lowest
  /// index) until every position is within eps. The centres are pairwise more
  /// than eps apart. Returns nullopt once centres * region size exceeds max_work.
  std::optional<std::vector<std::size_t>> farthest_point_cover(std::size_t n, double eps,
                                                               double max_work) const;

  /// Exhaustive check that every region node is within eps of a centre.
  bool covers(const std::vector<std::size_t>& centres, std::size_t n, double eps) const;

 private:
  /// Lattice offsets within `radius` (slightly generous), m entries each.
  struct Stencil {
    std::vector<std::int64_t> offsets;
  };
  Stencil stencil(double radius) const;
  /// Calls f(q) for every region position q at a stencil offset from p.
  template <class F>
  void for_each_candidate(std::size_t p, const Stencil& st, F&& f) const;
  /// Calls f(q) for every position that can be within `radius` of p.
  template <class F>
  void for_each_near(std::size_t p, double radius, const Stencil* st, F&& f) const;

  const double* orbit(std::size_t p, std::size_t i) const {
    return &table_[(p * n_max_ + i) * dim_];
  }
  double base_distance(const double* a, const double* b) const;

  const AnalyticSystem* sys_;
  Region region_;
  std::size_t n_max_;
  std::size_t dim_;
  std::vector<double> table_;
  const Budget* budget_;
};

/// Throws resolution_insufficient when the grid step exceeds eps/4.
void require_resolution(const Grid& grid, double eps);

SpanningResult max_separated(const AnalyticSystem& sys, const Region& region, std::size_t n,
                             double eps, const Budget& budget = Budget::unlimited());
SpanningResult greedy_spanning(const AnalyticSystem& sys, const Region& region, std::size_t n,
                               double eps, const Budget& budget = Budget::unlimited());

struct RateOptions {
  /// A count above |region| / cells_per_ball means the d_n-balls hold too few
  /// grid nodes for the count to track r_n; larger n are not fitted.
  double cells_per_ball = 16.0;
  /// In dimension >= 2 the cover comes from farthest_point_cover with this
  /// work limit, falling back to the seed sweep beyond it. Zero keeps one
  /// method across every n of a fit, which the slope needs.
  double fps_work = 0.0;
  Budget budget = Budget::unlimited();
};

/// Rate estimate: least-squares slope of ln r_upper(n) against n.
struct EntropyEstimate {
  double value = 0.0;
  std::size_t n_min = 0;
  std::size_t n_max = 0;  // top of the fitted window
  double residual = 0.0;
  double half_width = 0.0;
  /// Companion slope of ln s_lower(n).
  double separated_value = 0.0;
  std::vector<SpanningResult> counts;
  bool partial = false;     // budget ran out
  bool saturated = false;   // fewer than two resolved points; padded past the cap
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS
  double half_width = 0.0;  // 95% Student-t half-width of the slope
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Counts r_upper(n) for n in [n_min, n_max], stopping at saturation, and fits
/// the slope. Across the computed n, r_upper is replaced by its running minimum
/// from above (an (n+1)-spanning set is n-spanning) and s_lower by its running
/// maximum from below.
EntropyEstimate entropy_scale_rate(const AnalyticSystem& sys, const Region& region, double eps,
                                   std::size_t n_min, std::size_t n_max,
                                   const RateOptions& options = {});

struct LimitFit {
  std::vector<std::pair<double, EntropyEstimate>> ladder;
  /// Values nondecreasing as eps decreases, up to the summed half-widths.
  bool monotone = true;
  double value() const { return ladder.empty() ? 0.0 : ladder.back().second.value; }
};

/// entropy_scale_rate along a strictly decreasing eps ladder.
LimitFit entropy_limit_fit(const AnalyticSystem& sys, const Region& region,
                           const std::vector<double>& eps_ladder, std::size_t n_min,
                           std::size_t n_max, const RateOptions& options = {});

/// CSV header and rows: system, n, eps, grid_g, s_lower, r_upper, slope, residual.
std::string spanning_csv_header();
std::string spanning_csv_rows(const std::string& system, const EntropyEstimate& est);

}  // namespace entropia
