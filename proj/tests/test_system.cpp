#include <doctest.h>

#include "entropia/error.hpp"
#include "entropia/system.hpp"
#include "entropia/zoo.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace entropia;

TEST_CASE("doubling orbit") {
  auto sys = make_circle_map(CircleMapKind::doubling());
  auto orbit = iterate_orbit(sys, {0.1}, 4);
  REQUIRE(orbit.size() == 5);
  const double expect[] = {0.1, 0.2, 0.4, 0.8, 0.6};
  for (int i = 0; i < 5; ++i) CHECK(orbit[i][0] == doctest::Approx(expect[i]));
}

TEST_CASE("orbit escape names the step") {
  AnalyticSystem sys = make_identity(1);
  sys.step = [](std::span<double> x) { x[0] = x[0] > 0.3 ? NAN : x[0] * 2.0; };
  try {
    iterate_orbit(sys, {0.1}, 5);
    FAIL("expected an escape");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::numeric_escape);
    CHECK(std::string(e.what()).find("step 3") != std::string::npos);
  }
}

TEST_CASE("bowen distance is the max along the orbit") {
  auto sys = make_circle_map(CircleMapKind::doubling());
  // separation 0.01 doubles each step: 0.01, 0.02, 0.04
  CHECK(bowen_distance(sys, {0.1}, {0.11}, 3) == doctest::Approx(0.04));
  CHECK(bowen_distance(sys, {0.1}, {0.11}, 1) == doctest::Approx(0.01));
  auto rot = make_circle_map(CircleMapKind::rotation(0.3));
  CHECK(bowen_distance(rot, {0.1}, {0.15}, 10) == doctest::Approx(0.05));
}

TEST_CASE("jet norms of affine and linear maps") {
  auto d = make_circle_map(CircleMapKind::doubling());
  auto norms = jet_norms(d, {0.3}, 4, 3);
  CHECK(norms[0] == doctest::Approx(16.0));
  CHECK(norms[1] == doctest::Approx(0.0));
  CHECK(norms[2] == doctest::Approx(0.0));

  auto cat = make_cat_map();
  const double golden_sq = (3.0 + std::sqrt(5.0)) / 2.0;
  auto cn = jet_norms(cat, {0.2, 0.7}, 1, 2);
  CHECK(cn[0] == doctest::Approx(golden_sq));
  CHECK(cn[1] == doctest::Approx(0.0).epsilon(1e-9));
  auto cn3 = jet_norms(cat, {0.2, 0.7}, 3, 1);
  CHECK(cn3[0] == doctest::Approx(std::pow(golden_sq, 3)));
}

TEST_CASE("jet norms of the logistic map") {
  auto lg = make_logistic();
  auto norms = jet_norms(lg, {0.2}, 1, 3);
  CHECK(norms[0] == doctest::Approx(std::abs(4.0 - 8.0 * 0.2)));
  CHECK(norms[1] == doctest::Approx(8.0));
  CHECK(norms[2] == doctest::Approx(0.0));
  // (f o f)'(x) = f'(f(x)) f'(x)
  const double fx = 4 * 0.2 * 0.8;
  auto two = jet_norms(lg, {0.2}, 2, 1);
  CHECK(two[0] == doctest::Approx(std::abs((4 - 8 * fx) * (4 - 8 * 0.2))));
}

TEST_CASE("jet norms agree with finite differences for the trig map") {
  auto tr = make_circle_map(CircleMapKind::trig(0.05));
  const double c = 0.05, x0 = 0.31;
  auto f = [&](double x) { return 2 * x + c * std::sin(2 * std::numbers::pi * x); };
  auto df = [&](double x) { return 2 + 2 * std::numbers::pi * c * std::cos(2 * std::numbers::pi * x); };
  auto norms = jet_norms(tr, {x0}, 2, 1);
  CHECK(norms[0] == doctest::Approx(std::abs(df(f(x0)) * df(x0))).epsilon(1e-10));
}

TEST_CASE("polydisc sup of the logistic map") {
  auto lg = make_logistic();
  // oracle: dense scan of |4 w (1 - w)| on the circle |w - 0.5| = 0.2
  double oracle = 0.0;
  for (int k = 0; k < 20000; ++k) {
    std::complex<double> w = 0.5 + 0.2 * std::polar(1.0, 2 * std::numbers::pi * k / 20000.0);
    oracle = std::max(oracle, std::abs(4.0 * w * (1.0 - w)));
  }
  CHECK(oracle == doctest::Approx(1.16).epsilon(1e-6));
  double est = polydisc_sup(lg, {0.5}, 0.2, 4096);
  CHECK(est <= oracle + 1e-12);
  CHECK(est == doctest::Approx(oracle).epsilon(1e-3));
  CHECK(polydisc_sup(lg, {0.5}, 0.2, 64) <= est);
}

TEST_CASE("polydisc sup of the doubling map grows with the radius") {
  auto d = make_circle_map(CircleMapKind::doubling());
  double r1 = polydisc_sup(d, {0.25}, 0.1, 256);
  double r2 = polydisc_sup(d, {0.25}, 0.4, 256);
  CHECK(r1 < r2);
  CHECK(r2 <= d.M0);
}

TEST_CASE("radical inverse and halton") {
  CHECK(radical_inverse(1, 2) == 0.5);
  CHECK(radical_inverse(2, 2) == 0.25);
  CHECK(radical_inverse(3, 2) == 0.75);
  CHECK(radical_inverse(1, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(radical_inverse(5, 3) == doctest::Approx(2.0 / 3.0 + 1.0 / 9.0));
  auto h = halton(3, 2);
  CHECK(h[0] == 0.75);
  CHECK(h[1] == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("rescaled doubling maps are linear") {
  auto d = make_circle_map(CircleMapKind::doubling());
  RescaledMap rm(d, {0.123}, 3, 4);
  CHECK(rm.s1() == doctest::Approx(8.0 * 9.0));
  for (std::size_t i = 1; i <= 4; ++i) {
    for (double t : {-1.5, 0.0, 0.7, 1.9}) {
      double v[] = {t};
      CHECK(rm.eval(i, v)[0] == doctest::Approx(8.0 * t).epsilon(1e-9));
    }
  }
  double t[] = {0.3};
  auto dn = rm.derivative_norms(2, t, 2);
  CHECK(dn[0] == doctest::Approx(8.0));
  CHECK(dn[1] == doctest::Approx(0.0));
}

TEST_CASE("rescaled anchors follow the n-step orbit") {
  auto lg = make_logistic();
  RescaledMap rm(lg, {0.3}, 2, 3);
  auto orbit = iterate_orbit(lg, {0.3}, 6);
  CHECK(rm.anchor(1)[0] == doctest::Approx(orbit[0][0]));
  CHECK(rm.anchor(2)[0] == doctest::Approx(orbit[2][0]));
  CHECK(rm.anchor(3)[0] == doctest::Approx(orbit[4][0]));
  double zero[] = {0.0};
  CHECK(rm.eval(1, zero)[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("power map") {
  auto d = make_circle_map(CircleMapKind::doubling());
  auto p = power_map(d, 3);
  CHECK(p.L0 == doctest::Approx(8.0));
  CHECK(*p.exact_entropy == doctest::Approx(3 * std::log(2.0)));
  CHECK(p.eval({0.1})[0] == doctest::Approx(0.8));
}

TEST_CASE("sampled certificates") {
  auto d = make_circle_map(CircleMapKind::doubling());
  double lip = sampled_lipschitz_ratio(d, 500, 3);
  CHECK(lip == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(lip <= d.L0 + 1e-6);
  CHECK(sampled_domain_check(d, 500, 3));
  CHECK(sampled_complex_disagreement(make_logistic(), 500, 3) < 1e-12);
}

TEST_CASE("parameter validation") {
  auto d = make_circle_map(CircleMapKind::doubling());
  CHECK_NOTHROW(validate_parameters(d));
  d.rho = 1.5;
  CHECK_THROWS_AS(validate_parameters(d), Error);
  d.rho = 0.5;
  d.L0 = 1.0;
  CHECK_THROWS_AS(validate_parameters(d), Error);
}
