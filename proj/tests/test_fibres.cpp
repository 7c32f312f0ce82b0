#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "lojax/fibres.hpp"
#include "lojax/parse.hpp"

using namespace lojax;

namespace {

PolyMap map1(const std::string& expr) { return PolyMap({parse_poly(expr, {"z"})}); }

PolyMap map2(const std::string& e1, const std::string& e2) {
  return PolyMap({parse_poly(e1, {"x", "y"}), parse_poly(e2, {"x", "y"})});
}

}  // namespace

TEST_CASE("newton_refine on closed forms") {
  FibreConfig cfg;
  SECTION("linear, one variable") {
    auto z = newton_refine(map1("2*z"), {Cplx(1, 0)}, {Cplx(0.4, 0)}, cfg);
    REQUIRE(z.has_value());
    REQUIRE(std::abs((*z)[0] - Cplx(0.5, 0)) < 1e-12);
  }
  SECTION("linear, two variables") {
    auto z = newton_refine(map2("2*x", "2*y"), {Cplx(1, 0), Cplx(0, 0)},
                           {Cplx(0.6, 0), Cplx(0.1, 0)}, cfg);
    REQUIRE(z.has_value());
    REQUIRE(std::abs((*z)[0] - Cplx(0.5, 0)) < 1e-12);
    REQUIRE(std::abs((*z)[1]) < 1e-12);
  }
  SECTION("quadratic converges to the nearby root") {
    auto z = newton_refine(map1("3*z^2"), {Cplx(3, 0)}, {Cplx(-1.2, 0.1)}, cfg);
    REQUIRE(z.has_value());
    REQUIRE(std::abs((*z)[0] - Cplx(-1, 0)) < 1e-10);
  }
  SECTION("singular Jacobian fails cleanly") {
    auto z = newton_refine(map1("z^2"), {Cplx(-1, 0)}, {Cplx(0, 0)}, cfg);
    REQUIRE_FALSE(z.has_value());
  }
}

TEST_CASE("solve_fibre closed forms") {
  FibreConfig cfg;
  SECTION("gradient of z^3") {
    double s = 3.0 * 0.01 * 0.01;
    Fibre fib = solve_fibre(map1("3*z^2"), {Cplx(s, 0)}, 2, cfg);
    REQUIRE(fib.complete);
    REQUIRE(fib.points.size() == 2);
    REQUIRE(std::abs(fib.points[0][0] - Cplx(-0.01, 0)) < 1e-10);
    REQUIRE(std::abs(fib.points[1][0] - Cplx(0.01, 0)) < 1e-10);
  }
  SECTION("gradient of x^3+y^3 over a generic target") {
    double a = 0.04, b = 0.05;
    Fibre fib = solve_fibre(map2("3*x^2", "3*y^2"), {Cplx(3 * a * a, 0), Cplx(3 * b * b, 0)}, 4,
                            cfg);
    REQUIRE(fib.complete);
    REQUIRE(fib.points.size() == 4);
    for (const auto& z : fib.points) {
      REQUIRE(std::abs(std::abs(z[0]) - a) < 1e-9);
      REQUIRE(std::abs(std::abs(z[1]) - b) < 1e-9);
    }
  }
  SECTION("target on the critical locus collapses sheets") {
    double b = 0.05;
    Fibre fib = solve_fibre(map2("3*x^2", "3*y^2"), {Cplx(0, 0), Cplx(3 * b * b, 0)}, 4, cfg);
    REQUIRE_FALSE(fib.complete);
    REQUIRE(fib.points.size() < 4);
  }
}

TEST_CASE("residual invariant") {
  FibreConfig cfg;
  Fibre fib = solve_fibre(map2("3*x^2", "3*y^2"), {Cplx(0.004, 0.001), Cplx(0.007, 0)}, 4, cfg);
  REQUIRE(fib.max_residual <= cfg.newton_tol);
}

TEST_CASE("track_ray closed forms") {
  FibreConfig cfg;
  std::vector<double> radii = {1e-1, 5e-2, 2.5e-2, 1.25e-2};
  SECTION("two sheets of 3z^2") {
    auto fibres = track_ray(map1("3*z^2"), {Cplx(1, 0)}, radii, 2, cfg);
    REQUIRE(fibres.size() == radii.size());
    for (std::size_t k = 0; k < radii.size(); ++k) {
      REQUIRE(fibres[k].complete);
      double expect = std::sqrt(radii[k] / 3.0);
      for (const auto& z : fibres[k].points)
        REQUIRE(std::abs(std::abs(z[0]) - expect) < 1e-10);
    }
  }
  SECTION("single sheet of a linear map") {
    auto fibres = track_ray(map2("2*x", "2*y"), {Cplx(0.6, 0.2), Cplx(0.4, -0.6)}, radii, 1, cfg);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      REQUIRE(fibres[k].complete);
      REQUIRE(fibres[k].points.size() == 1);
      REQUIRE(std::abs(fibres[k].points[0][0] - radii[k] * Cplx(0.3, 0.1)) < 1e-10);
    }
  }
  SECTION("perturbed node gradient: one sheet near the origin, all complete") {
    PolyMap g = map2("3*x^2 + y", "3*y^2 + x");
    Rng rng(5);
    ComplexPoint dir = rng.sphere_direction(2);
    std::vector<double> radii8 = {1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3, 3.125e-3, 1.5625e-3,
                                  7.8125e-4};
    auto fibres = track_ray(g, dir, radii8, 1, cfg);
    for (const auto& fib : fibres) {
      REQUIRE(fib.complete);
      REQUIRE(fib.points.size() == 1);
    }
  }
}

TEST_CASE("determinism: identical seed and config give identical fibres") {
  FibreConfig cfg;
  cfg.seed = 987654321;
  auto run = [&] {
    return solve_fibre(map2("3*x^2 + y", "3*y^2 + x"), {Cplx(0.013, 0.002), Cplx(-0.008, 0.004)},
                       1, cfg, 42);
  };
  Fibre a = run();
  Fibre b = run();
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i)
    for (std::size_t c = 0; c < a.points[i].size(); ++c) {
      // bit-for-bit equality
      REQUIRE(std::memcmp(&a.points[i][c], &b.points[i][c], sizeof(Cplx)) == 0);
    }
  REQUIRE(a.max_residual == b.max_residual);
}

TEST_CASE("config validation") {
  FibreConfig bad;
  bad.dedupe_radius = 1e-14;  // below the newton tolerance
  REQUIRE_THROWS_AS(solve_fibre(map1("2*z"), {Cplx(1, 0)}, 1, bad), Error);
  FibreConfig neg;
  neg.rho = -1.0;
  REQUIRE_THROWS_AS(solve_fibre(map1("2*z"), {Cplx(1, 0)}, 1, neg), Error);
}
