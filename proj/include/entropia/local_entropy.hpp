#pragma once

#include "entropia/covering.hpp"
#include "entropia/grid.hpp"
#include "entropia/system.hpp"

#include <string>
#include <vector>

namespace entropia {

/// Grid over-approximation of the open dynamical ball B_n(f, x, eps).
struct BowenBallApprox {
  Point center;
  std::size_t n = 0;
  double eps = 0.0;
  unsigned grid_g = 0;
  /// Grid node indices (cells) whose centre satisfies the ball condition,
  /// plus the cell containing `center`. Sorted.
  std::vector<std::int64_t> cells;
  /// Cells of B_{n-1}; equal to `cells` when the ball has stabilised.
  std::size_t previous_count = 0;
  bool stabilized = false;
  /// Cell diameter times L0^{n-1}.
  double overapprox_error = 0.0;
};

/// Cells y with d(f^i y, f^i x) < eps for 0 <= i < n. Needs 2^-g <= eps/8.
BowenBallApprox bowen_ball_boxes(const AnalyticSystem& sys, const Point& x, std::size_t n,
                                 double eps, unsigned grid_g);

/// bowen_ball_boxes at N_proxy with the stabilisation flag
/// boxes(N_proxy) == boxes(N_proxy - 1).
BowenBallApprox infinite_ball_approx(const AnalyticSystem& sys, const Point& x, double eps,
                                     std::size_t N_proxy, unsigned grid_g);

struct LocalEntropyOptions {
  std::size_t N_proxy = 20;
  unsigned grid_g = 12;
  std::size_t n_min = 1;
  std::size_t n_max = 5;
  RateOptions rate;
};

/// Entropy of f on the B_infinity proxy around x: the largest rate over the
/// inner scales eps/4, eps/8, eps/16.
EntropyEstimate local_entropy_at(const AnalyticSystem& sys, const Point& x, double eps,
                                 const LocalEntropyOptions& options = {});

struct SamplingPlan {
  /// Coarse lattice with this many nodes per axis.
  std::size_t coarse_per_axis = 4;
  /// Halton centres appended after the lattice.
  std::size_t quasi_random = 256;
  /// Halton start index; the plan is a pure function of the seed.
  std::uint64_t seed = 1;
};

std::vector<Point> sampling_centers(const StateSpace& space, const SamplingPlan& plan);

struct CenterEntropy {
  Point center;
  EntropyEstimate estimate;
  std::size_t ball_cells = 0;
  bool stabilized = false;
};

struct LocalEntropyEstimate {
  double eps = 0.0;
  double value = 0.0;
  Point argmax_center;
  std::size_t N_proxy = 0;
  std::vector<CenterEntropy> per_center;
  /// Largest half-width among the centres.
  double half_width = 0.0;
};

/// Max of local_entropy_at over the sampling plan (centres run in parallel).
LocalEntropyEstimate local_entropy_sup(const AnalyticSystem& sys, double eps,
                                       const SamplingPlan& plan,
                                       const LocalEntropyOptions& options = {});

/// CSV: system, eps, center, N_proxy, stabilized, ball_cells, rate, residual.
std::string local_entropy_csv_header();
std::string local_entropy_csv_rows(const std::string& system, const LocalEntropyEstimate& est);

}  // namespace entropia
