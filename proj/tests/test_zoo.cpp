#include <doctest.h>

#include "entropia/error.hpp"
#include "entropia/zoo.hpp"

#include <cmath>
#include <numbers>

using namespace entropia;

namespace {

std::vector<AnalyticSystem> zoo() {
  return {make_identity(1),
          make_circle_map(CircleMapKind::doubling()),
          make_circle_map(CircleMapKind::rotation(0.3)),
          make_circle_map(CircleMapKind::trig(0.05)),
          make_cat_map(),
          make_logistic()};
}

}  // namespace

TEST_CASE("zoo maps follow their formulas") {
  const double x = 0.37;
  CHECK(make_circle_map(CircleMapKind::doubling()).eval({x})[0] == doctest::Approx(0.74));
  CHECK(make_circle_map(CircleMapKind::rotation(0.7)).eval({x})[0] == doctest::Approx(0.07));
  CHECK(make_circle_map(CircleMapKind::trig(0.05)).eval({x})[0] ==
        doctest::Approx(std::fmod(2 * x + 0.05 * std::sin(2 * std::numbers::pi * x), 1.0)));
  CHECK(make_logistic().eval({x})[0] == doctest::Approx(4 * x * (1 - x)));
  auto c = make_cat_map().eval({0.3, 0.45});
  CHECK(c[0] == doctest::Approx(std::fmod(0.6 + 0.45, 1.0)));
  CHECK(c[1] == doctest::Approx(0.75));
  CHECK(make_identity(3).eval({0.1, 0.2, 0.3}) == Point{0.1, 0.2, 0.3});
}

TEST_CASE("certified constants dominate sampled ones") {
  for (const auto& sys : zoo()) {
    CAPTURE(sys.name);
    CHECK_NOTHROW(validate_parameters(sys));
    CHECK(sampled_lipschitz_ratio(sys, 400, 11) <= sys.L0 * (1 + 1e-6));
    CHECK(sampled_domain_check(sys, 400, 11));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
      Point x = random_point(sys.space, rng);
      CHECK(polydisc_sup(sys, x, sys.rho, 256) <= sys.M0);
    }
  }
}

TEST_CASE("exact entropies") {
  CHECK(*make_circle_map(CircleMapKind::doubling()).exact_entropy == doctest::Approx(std::log(2.0)));
  CHECK(*make_circle_map(CircleMapKind::rotation(0.3)).exact_entropy == 0.0);
  CHECK(*make_cat_map().exact_entropy == doctest::Approx(std::log((3 + std::sqrt(5.0)) / 2)));
  CHECK(*make_logistic().exact_entropy == doctest::Approx(std::log(2.0)));
  CHECK(*make_identity(2).exact_entropy == 0.0);
  auto t = make_toral_automorphism({{{1, 1}, {0, 1}}});
  CHECK(*t.exact_entropy == doctest::Approx(0.0));
}

TEST_CASE("parameter checks") {
  CHECK_THROWS_AS(make_circle_map(CircleMapKind::trig(0.2)), Error);
  CHECK_THROWS_AS(make_toral_automorphism({{{2, 0}, {0, 1}}}), Error);
}

TEST_CASE("toral inverse undoes the map") {
  auto cat = make_cat_map();
  REQUIRE(cat.inverse);
  Point p{0.123, 0.789};
  Point q = cat.eval(p);
  (*cat.inverse)(q);
  CHECK(q[0] == doctest::Approx(p[0]));
  CHECK(q[1] == doctest::Approx(p[1]));
}

TEST_CASE("systems by name") {
  CHECK(system_by_name("doubling").name == "doubling");
  CHECK(system_by_name("cat").dim() == 2);
  CHECK(system_by_name("rotation").eval({0.0})[0] == doctest::Approx(kGoldenAngle));
  CHECK(system_by_name("rotation:0.25").eval({0.0})[0] == doctest::Approx(0.25));
  CHECK(system_by_name("identity:3").dim() == 3);
  CHECK(system_by_name("toral:2,1,1,1").eval({0.3, 0.45})[1] == doctest::Approx(0.75));
  CHECK(system_by_name("trig:0.05").L0 == doctest::Approx(2 + 2 * std::numbers::pi * 0.05));
  try {
    system_by_name("tent");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
}

TEST_CASE("systems from config text") {
  auto sys = system_from_config("# a cat\n[system]\nkind = toral\nmatrix = 2,1,1,1\nrho=0.4\n");
  CHECK(sys.dim() == 2);
  CHECK(sys.rho == doctest::Approx(0.4));
  auto rot = system_from_config("kind=rotation\nalpha=0.1\nname=slow");
  CHECK(rot.name == "slow");
  try {
    system_from_config("kind=rotation\nalpha\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(system_from_config("alpha=0.1"), Error);
}

TEST_CASE("suspension time-one map reproduces the base on the section") {
  auto base = make_circle_map(CircleMapKind::doubling());
  for (std::size_t i : {1u, 3u, 4u, 7u}) {
    auto s = make_suspension(base, i);
    auto one = s.time_one();
    for (double x : {0.1, 0.37, 0.8}) {
      Point p{0.0, x};
      one.step(p);
      double t = p[0] > 0.5 ? p[0] - 1.0 : p[0];
      CHECK(std::abs(t) <= 1e-12);
      CHECK(std::abs(p[1] - base.eval({x})[0]) <= 1e-12);
    }
  }
}

TEST_CASE("suspension metric") {
  auto s = make_suspension(make_circle_map(CircleMapKind::doubling()), 4);
  const auto& d = s.step_map;
  Point a{0.2, 0.3}, b{0.25, 0.31};
  CHECK(d.distance(a, b) == doctest::Approx(d.distance(b, a)));
  CHECK(d.distance(a, a) == 0.0);
  // across the seam (0.99, x) is glued close to (0.0, 2x)
  Point top{0.999, 0.2}, bottom{0.0, 0.4};
  CHECK(d.distance(top, bottom) < 0.01);
}

TEST_CASE("suspend finds a small-Lipschitz flow step") {
  auto s = suspend(make_circle_map(CircleMapKind::doubling()), 1.25);
  CHECK(s.i >= 1);
  CHECK(s.i <= 64);
  CHECK(s.measured_sup < 1.25);
  CHECK(s.step_map.L0 < 2.0);
  CHECK(suspension_step_norm(s.base, s.i, 2000, 3) < 1.25);
  if (s.i > 1) CHECK(suspension_step_norm(s.base, s.i - 1, 2000, 7) >= 1.25);
  auto byname = suspension_by_name("suspend:doubling:1.25");
  CHECK(byname.i == s.i);
}
