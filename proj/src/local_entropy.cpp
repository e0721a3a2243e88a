#include "entropia/local_entropy.hpp"

#include "entropia/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>

namespace entropia {

namespace {

struct BallScan {
  std::vector<std::int64_t> nodes;
  std::vector<std::size_t> exit;  // first i with d >= eps, or n
  std::int64_t center_node = 0;
};

BallScan scan_ball(const AnalyticSystem& sys, const Grid& grid, const Point& x, std::size_t n,
                   double eps) {
  if (n == 0) throw Error(ErrorKind::precondition, "ball needs n >= 1");
  if (x.size() != sys.dim()) throw Error(ErrorKind::precondition, "centre dimension mismatch");
  if (grid.step() > eps / 8.0)
    throw Error(ErrorKind::resolution_insufficient,
                "grid step 2^-" + std::to_string(grid.g()) + " exceeds eps/8");
  auto xo = iterate_orbit(sys, x, n - 1);
  BallScan scan;
  scan.center_node = grid.nearest(xo[0]);
  if (sys.uses_space_metric()) {
    scan.nodes = grid.window(scan.center_node, eps + grid.step());
  } else {
    scan.nodes.resize(static_cast<std::size_t>(grid.size()));
    for (std::int64_t i = 0; i < grid.size(); ++i) scan.nodes[static_cast<std::size_t>(i)] = i;
  }
  scan.exit.assign(scan.nodes.size(), 0);
  const std::size_t count = scan.nodes.size();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < count; ++k) {
    Point y = grid.point(scan.nodes[k]);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (i > 0) sys.step(y);
      if (!(sys.distance(y, xo[i]) < eps)) break;
    }
    scan.exit[k] = i;
  }
  return scan;
}

}  // namespace

BowenBallApprox bowen_ball_boxes(const AnalyticSystem& sys, const Point& x, std::size_t n,
                                 double eps, unsigned grid_g) {
  Grid grid(sys.space, grid_g);
  BallScan scan = scan_ball(sys, grid, x, n, eps);
  BowenBallApprox ball;
  ball.center = x;
  sys.space.normalize(ball.center);
  ball.n = n;
  ball.eps = eps;
  ball.grid_g = grid_g;
  std::size_t previous = 0;
  bool center_seen = false, center_prev = false;
  for (std::size_t k = 0; k < scan.nodes.size(); ++k) {
    if (scan.exit[k] >= n) ball.cells.push_back(scan.nodes[k]);
    if (scan.exit[k] >= n - 1) ++previous;
    if (scan.nodes[k] == scan.center_node) {
      center_seen = scan.exit[k] >= n;
      center_prev = scan.exit[k] >= n - 1;
    }
  }
  if (!center_seen) {
    ball.cells.insert(std::lower_bound(ball.cells.begin(), ball.cells.end(), scan.center_node),
                      scan.center_node);
    if (!center_prev) ++previous;
  }
  // B_0 is the whole space
  ball.previous_count = n == 1 ? static_cast<std::size_t>(grid.size()) : previous;
  ball.stabilized = ball.previous_count == ball.cells.size();
  ball.overapprox_error = std::sqrt(static_cast<double>(sys.dim())) * grid.step() *
                          std::pow(sys.L0, static_cast<double>(n) - 1.0);
  return ball;
}

BowenBallApprox infinite_ball_approx(const AnalyticSystem& sys, const Point& x, double eps,
                                     std::size_t N_proxy, unsigned grid_g) {
  if (N_proxy == 0) throw Error(ErrorKind::precondition, "N_proxy must be >= 1");
  return bowen_ball_boxes(sys, x, N_proxy, eps, grid_g);
}

EntropyEstimate local_entropy_at(const AnalyticSystem& sys, const Point& x, double eps,
                                 const LocalEntropyOptions& options) {
  BowenBallApprox ball = infinite_ball_approx(sys, x, eps, options.N_proxy, options.grid_g);
  Grid grid(sys.space, options.grid_g);
  Region region(grid, ball.cells);
  std::optional<EntropyEstimate> best;
  for (double divisor : {4.0, 8.0, 16.0}) {
    EntropyEstimate e =
        entropy_scale_rate(sys, region, eps / divisor, options.n_min, options.n_max, options.rate);
    if (!best || e.value > best->value) best = std::move(e);
  }
  return *best;
}

std::vector<Point> sampling_centers(const StateSpace& space, const SamplingPlan& plan) {
  std::vector<Point> centers;
  const std::size_t m = space.dim();
  if (plan.coarse_per_axis > 0) {
    std::vector<std::size_t> cur(m, 0);
    while (true) {
      Point p(m);
      for (std::size_t a = 0; a < m; ++a)
        p[a] = (static_cast<double>(cur[a]) + 0.5) / static_cast<double>(plan.coarse_per_axis);
      centers.push_back(p);
      std::size_t a = m;
      bool done = true;
      while (a-- > 0) {
        if (++cur[a] < plan.coarse_per_axis) {
          done = false;
          break;
        }
        cur[a] = 0;
      }
      if (done) break;
    }
  }
  for (std::size_t i = 0; i < plan.quasi_random; ++i) centers.push_back(halton(plan.seed + i, m));
  return centers;
}

LocalEntropyEstimate local_entropy_sup(const AnalyticSystem& sys, double eps,
                                       const SamplingPlan& plan,
                                       const LocalEntropyOptions& options) {
  auto centers = sampling_centers(sys.space, plan);
  if (centers.empty()) throw Error(ErrorKind::precondition, "empty sampling plan");
  LocalEntropyEstimate out;
  out.eps = eps;
  out.N_proxy = options.N_proxy;
  out.per_center.resize(centers.size());
  std::vector<std::string> errors(centers.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t k = 0; k < centers.size(); ++k) {
    try {
      BowenBallApprox ball = infinite_ball_approx(sys, centers[k], eps, options.N_proxy, options.grid_g);
      CenterEntropy& ce = out.per_center[k];
      ce.center = centers[k];
      ce.ball_cells = ball.cells.size();
      ce.stabilized = ball.stabilized;
      ce.estimate = local_entropy_at(sys, centers[k], eps, options);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < centers.size(); ++k)
    if (!errors[k].empty()) throw Error(ErrorKind::precondition, "centre " + std::to_string(k) + ": " + errors[k]);
  std::size_t arg = 0;
  for (std::size_t k = 0; k < out.per_center.size(); ++k) {
    if (out.per_center[k].estimate.value > out.per_center[arg].estimate.value) arg = k;
    out.half_width = std::max(out.half_width, out.per_center[k].estimate.half_width);
  }
  out.value = std::max(0.0, out.per_center[arg].estimate.value);
  out.argmax_center = out.per_center[arg].center;
  return out;
}

std::string local_entropy_csv_header() {
  return "system,eps,center,N_proxy,stabilized,ball_cells,rate,residual\n";
}

std::string local_entropy_csv_rows(const std::string& system, const LocalEntropyEstimate& est) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& c : est.per_center) {
    os << system << ',' << est.eps << ',';
    for (std::size_t a = 0; a < c.center.size(); ++a) os << (a ? ";" : "") << c.center[a];
    os << ',' << est.N_proxy << ',' << (c.stabilized ? 1 : 0) << ',' << c.ball_cells << ','
       << c.estimate.value << ',' << c.estimate.residual << '\n';
  }
  return os.str();
}

}  // namespace entropia
