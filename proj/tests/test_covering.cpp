#include <doctest.h>

#include "entropia/covering.hpp"
#include "entropia/error.hpp"
#include "entropia/zoo.hpp"

#include <cmath>
#include <set>

using namespace entropia;

namespace {

// Brute-force d_n between two grid nodes.
double brute_dn(const AnalyticSystem& sys, const Grid& grid, std::int64_t a, std::int64_t b,
                std::size_t n) {
  return bowen_distance(sys, grid.point(a), grid.point(b), n);
}

}  // namespace

TEST_CASE("grid shape") {
  Grid circle(StateSpace::torus(1), 10);
  CHECK(circle.size() == 1024);
  CHECK(circle.step() == 1.0 / 1024);
  Grid square(StateSpace::torus(2), 5);
  CHECK(square.size() == 32 * 32);
  Grid cube(StateSpace::cube(2), 3);
  CHECK(cube.size() == 9 * 9);
  CHECK(cube.covering_radius() == doctest::Approx(std::sqrt(2.0) / 2 / 8));
}

TEST_CASE("every point is near a grid node") {
  for (auto space : {StateSpace::torus(2), StateSpace::cube(2)}) {
    Grid grid(space, 6);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 500; ++k) {
      Point x = random_point(space, rng);
      Point y = grid.point(grid.nearest(x));
      CHECK(space.distance(x, y) <= grid.covering_radius() + 1e-15);
    }
  }
}

TEST_CASE("grid indices are lexicographic") {
  Grid grid(StateSpace::torus(2), 3);
  std::int64_t c[2];
  grid.coords_of(11, c);
  CHECK(c[0] == 1);
  CHECK(c[1] == 3);
  CHECK(grid.index_of(c) == 11);
  std::int64_t wrapped[2] = {-1, 9};
  CHECK(grid.index_of(wrapped) == 7 * 8 + 1);
  Grid cube(StateSpace::cube(1), 3);
  std::int64_t out[1] = {9};
  CHECK(cube.index_of(out) == -1);
}

TEST_CASE("window matches a brute-force scan") {
  Grid grid(StateSpace::torus(2), 5);
  const double r = 3.0 / 32;
  auto w = grid.window(grid.nearest(Point{0.0, 0.5}), r);
  std::set<std::int64_t> got(w.begin(), w.end());
  CHECK(got.size() == w.size());
  Point c{0.0, 0.5};
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    Point p = grid.point(i);
    bool near = std::abs(grid.space().coord_distance(0, p[0], c[0])) <= r + 1e-12 &&
                std::abs(grid.space().coord_distance(1, p[1], c[1])) <= r + 1e-12;
    CHECK(near == (got.count(i) == 1));
  }
}

TEST_CASE("region positions") {
  Grid grid(StateSpace::torus(1), 4);
  Region r(grid, {9, 3, 3, 12});
  CHECK(r.size() == 3);
  CHECK(r.index(0) == 3);
  CHECK(r.position(12) == 2);
  CHECK(r.position(4) == -1);
  CHECK(Region(grid).is_full());
}

TEST_CASE("identity circle packing and covering") {
  auto id = make_identity(1);
  Grid grid(id.space, 10);
  Region region(grid);
  // strict separation > 1/8 needs gaps of 129 nodes out of 1024: floor(1024/129) = 7
  for (std::size_t n : {1u, 3u}) {
    CHECK(max_separated(id, region, n, 0.125).s_lower == 7);
    CHECK(greedy_spanning(id, region, n, 0.125).r_upper == 4);
  }
  auto rot = make_circle_map(CircleMapKind::rotation(0.3));
  CHECK(max_separated(rot, region, 5, 0.125).s_lower == 7);
}

TEST_CASE("doubling counts at n = 3") {
  auto d = make_circle_map(CircleMapKind::doubling());
  Grid grid(d.space, 12);
  Region region(grid);
  auto sep = max_separated(d, region, 3, 0.125);
  auto span = greedy_spanning(d, region, 3, 0.125);
  CHECK(sep.s_lower >= 28);
  CHECK(sep.s_lower <= 32);
  CHECK(span.r_upper >= 15);
  CHECK(span.r_upper <= 17);
}

TEST_CASE("separated sets are separated and maximal (brute force)") {
  auto d = make_circle_map(CircleMapKind::doubling());
  Grid grid(d.space, 8);
  Region region(grid);
  CoverEngine engine(d, region, 4);
  const double eps = 0.1;
  auto picks = engine.separated_set(4, eps);
  for (std::size_t a = 0; a < picks.size(); ++a)
    for (std::size_t b = a + 1; b < picks.size(); ++b)
      CHECK(brute_dn(d, grid, picks[a], picks[b], 4) > eps);
  for (std::int64_t q = 0; q < grid.size(); ++q) {
    double best = 1e9;
    for (auto p : picks) best = std::min(best, brute_dn(d, grid, p, q, 4));
    CHECK(best <= eps);
  }
}

TEST_CASE("greedy covers span the grid (brute force)") {
  auto cat = make_cat_map();
  Grid grid(cat.space, 5);
  Region region(grid);
  CoverEngine engine(cat, region, 3);
  auto centres = engine.greedy_cover(3, 0.2);
  CHECK(engine.covers(centres, 3, 0.2));
  for (std::int64_t q = 0; q < grid.size(); ++q) {
    double best = 1e9;
    for (auto c : centres) best = std::min(best, brute_dn(cat, grid, static_cast<std::int64_t>(c), q, 3));
    CHECK(best <= 0.2);
  }
}

TEST_CASE("neighbours agree with a brute-force scan") {
  auto cat = make_cat_map();
  Grid grid(cat.space, 5);
  Region region(grid);
  CoverEngine engine(cat, region, 1);
  for (std::size_t p : {0u, 37u, 1023u}) {
    auto got = engine.neighbours(p, 0.15);
    std::vector<std::size_t> want;
    for (std::size_t q = 0; q < region.size(); ++q)
      if (cat.distance(grid.point(static_cast<std::int64_t>(p)), grid.point(static_cast<std::int64_t>(q))) <= 0.15)
        want.push_back(q);
    CHECK(got == want);
  }
}

TEST_CASE("cat map static covering number") {
  auto cat = make_cat_map();
  Grid grid(cat.space, 8);
  Region region(grid);
  auto r = greedy_spanning(cat, region, 1, 0.25);
  CHECK(r.r_upper >= 4);
  CHECK(r.r_upper <= 9);
}

TEST_CASE("sandwich, monotonicity and refinement across the zoo") {
  struct Case {
    AnalyticSystem sys;
    unsigned g;
    double eps;
  };
  std::vector<Case> cases{{make_circle_map(CircleMapKind::doubling()), 10, 1.0 / 16},
                          {make_circle_map(CircleMapKind::rotation(0.3)), 10, 1.0 / 16},
                          {make_circle_map(CircleMapKind::trig(0.05)), 10, 1.0 / 16},
                          {make_logistic(), 10, 1.0 / 16},
                          {make_identity(1), 10, 1.0 / 16},
                          {make_cat_map(), 6, 1.0 / 4}};
  for (auto& c : cases) {
    CAPTURE(c.sys.name);
    Grid grid(c.sys.space, c.g);
    Region region(grid);
    std::size_t prev = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
      auto tight = greedy_spanning(c.sys, region, n, c.eps);
      auto sep = max_separated(c.sys, region, n, c.eps);
      auto wide = max_separated(c.sys, region, n, 2 * c.eps);
      CHECK(wide.s_lower <= tight.r_upper);
      CHECK(tight.r_upper <= sep.s_lower);
      CHECK(std::min(tight.r_upper, sep.s_lower) >= prev / 2);
      prev = std::min(tight.r_upper, sep.s_lower);
    }
    Grid fine(c.sys.space, c.g + 1);
    Region fine_region(fine);
    double coarse_r = greedy_spanning(c.sys, region, 3, c.eps).r_upper;
    double fine_r = greedy_spanning(c.sys, fine_region, 3, c.eps).r_upper;
    double bound = std::pow(3.0, static_cast<double>(c.sys.dim()));
    CHECK(fine_r <= bound * coarse_r);
    CHECK(coarse_r <= bound * fine_r);
  }
}

TEST_CASE("resolution guard") {
  auto d = make_circle_map(CircleMapKind::doubling());
  Grid grid(d.space, 4);
  Region region(grid);
  try {
    max_separated(d, region, 2, 1.0 / 32);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::resolution_insufficient);
  }
}

TEST_CASE("line fit") {
  std::vector<double> x{1, 2, 3, 4, 5}, y{2.1, 3.9, 6.2, 7.8, 10.1};
  auto f = fit_line(x, y);
  // closed-form least squares oracle
  double mx = 3, my = 0, sxy = 0, sxx = 0;
  for (double v : y) my += v / 5;
  for (int i = 0; i < 5; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  double slope = sxy / sxx, icpt = my - slope * mx, sse = 0;
  for (int i = 0; i < 5; ++i) sse += std::pow(y[i] - icpt - slope * x[i], 2);
  const double t975_3 = 3.182446305284263;
  CHECK(f.slope == doctest::Approx(slope));
  CHECK(f.intercept == doctest::Approx(icpt));
  CHECK(f.residual == doctest::Approx(std::sqrt(sse / 5)));
  CHECK(f.half_width == doctest::Approx(t975_3 * std::sqrt(sse / 3 / sxx)));
  std::vector<double> line{1, 3, 5};
  std::vector<double> xs{0, 1, 2};
  auto exact = fit_line(xs, line);
  CHECK(exact.slope == doctest::Approx(2.0));
  CHECK(exact.residual == doctest::Approx(0.0));
}

TEST_CASE("scale rates of isometries vanish") {
  for (auto sys : {make_identity(1), make_circle_map(CircleMapKind::rotation(kGoldenAngle))}) {
    Grid grid(sys.space, 14);
    Region region(grid);
    auto est = entropy_scale_rate(sys, region, 1.0 / 64, 4, 12);
    CHECK(est.value == 0.0);
    CHECK(est.counts.front().r_upper == est.counts.back().r_upper);
  }
}

TEST_CASE("doubling scale rate") {
  auto d = make_circle_map(CircleMapKind::doubling());
  Grid grid(d.space, 14);
  Region region(grid);
  auto est = entropy_scale_rate(d, region, 1.0 / 64, 4, 12);
  CHECK(est.value >= 0.62);
  CHECK(est.value <= 0.76);
  CHECK(est.counts.size() >= 2);
  CHECK(est.half_width >= 0.0);
  for (std::size_t j = 1; j < est.counts.size(); ++j)
    CHECK(est.counts[j].r_upper >= est.counts[j - 1].r_upper);
  CHECK(spanning_csv_rows("doubling", est).find("doubling,4,") == 0);
  CHECK(spanning_csv_header() == "system,n,eps,grid_g,s_lower,r_upper,slope,residual\n");
}

TEST_CASE("limit fit validates its ladder") {
  auto d = make_circle_map(CircleMapKind::doubling());
  Grid grid(d.space, 10);
  Region region(grid);
  CHECK_THROWS_AS(entropy_limit_fit(d, region, {1.0 / 16, 1.0 / 8}, 1, 5), Error);
  auto fit = entropy_limit_fit(d, region, {1.0 / 8, 1.0 / 16}, 1, 5);
  CHECK(fit.ladder.size() == 2);
}

TEST_CASE("an exhausted budget flags a partial estimate") {
  auto d = make_circle_map(CircleMapKind::doubling());
  Grid grid(d.space, 12);
  Region region(grid);
  RateOptions opts;
  opts.budget = Budget::seconds(0.0);
  auto est = entropy_scale_rate(d, region, 1.0 / 16, 1, 6, opts);
  CHECK(est.partial);
}
