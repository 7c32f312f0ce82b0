#include <catch2/catch_amalgamated.hpp>

#include "gen.hpp"
#include "lojax/fibres.hpp"
#include "lojax/milnor.hpp"
#include "lojax/parse.hpp"

using namespace lojax;

TEST_CASE("milnor number on the one-variable ladder") {
  for (int d = 2; d <= 6; ++d) {
    Germ f(parse_poly("z^" + std::to_string(d), {"z"}));
    REQUIRE(milnor_number(f) == d - 1);
  }
}

TEST_CASE("milnor number of x^a + y^b") {
  for (int a = 2; a <= 4; ++a)
    for (int b = 2; b <= 4; ++b) {
      Germ f(parse_poly("x^" + std::to_string(a) + " + y^" + std::to_string(b), {"x", "y"}));
      REQUIRE(milnor_number(f) == (a - 1) * (b - 1));
    }
}

TEST_CASE("perturbed node: local count ignores distant critical points") {
  Germ f(parse_poly("x^3 + y^3 + x*y", {"x", "y"}));
  REQUIRE(milnor_number(f) == 1);
}

TEST_CASE("isolation predicate") {
  REQUIRE_FALSE(is_isolated_singularity(Germ(parse_poly("x^2*y", {"x", "y"}))));
  REQUIRE(is_isolated_singularity(Germ(parse_poly("x^2+y^3", {"x", "y"}))));
  REQUIRE_FALSE(is_isolated_singularity(Germ(parse_poly("(x + y)^2", {"x", "y"}))));
  REQUIRE_THROWS_AS(milnor_number(Germ(parse_poly("x^2*y", {"x", "y"}))), NotIsolatedError);
}

TEST_CASE("germs must vanish at the origin") {
  REQUIRE_THROWS_AS(Germ(parse_poly("1 + x", {"x"})), PreconditionError);
}

TEST_CASE("Brieskorn oracle on random exponent draws") {
  Rng rng(314);
  for (int rep = 0; rep < 10; ++rep) {
    std::size_t m = 1 + rng.next() % 3;
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < m; ++i) vars.push_back("z" + std::to_string(i + 1));
    long expect = 1;
    Polynomial f(vars);
    for (std::size_t i = 0; i < m; ++i) {
      int a = 2 + static_cast<int>(rng.next() % 4);  // 2..5
      expect *= a - 1;
      f += Polynomial::variable(vars, i, a);
    }
    REQUIRE(milnor_number(Germ(f)) == expect);
  }
}

TEST_CASE("mu is invariant under invertible linear changes of variables") {
  Rng rng(315);
  std::vector<std::string> xy = {"x", "y"};
  std::vector<Polynomial> corpus = {
      parse_poly("x^2 + y^3", xy),
      parse_poly("x^3 + y^3 + x*y", xy),
      parse_poly("x^3 + y^4", xy),
  };
  for (const auto& f : corpus) {
    long mu = milnor_number(Germ(f));
    for (int rep = 0; rep < 4; ++rep) {
      // Random small rational matrix, retried until invertible.
      Rational a, b, c, d;
      do {
        a = gen::small_rational(rng);
        b = gen::small_rational(rng);
        c = gen::small_rational(rng);
        d = gen::small_rational(rng);
      } while (a * d - b * c == 0);
      Polynomial nx = GaussianRational(a) * Polynomial::variable(xy, 0) +
                      GaussianRational(b) * Polynomial::variable(xy, 1);
      Polynomial ny = GaussianRational(c) * Polynomial::variable(xy, 0) +
                      GaussianRational(d) * Polynomial::variable(xy, 1);
      Polynomial fl = f.substitute(xy, {{"x", nx}, {"y", ny}});
      REQUIRE(milnor_number(Germ(fl)) == mu);
    }
  }
}

TEST_CASE("fibre cardinality agrees with mu for generic small targets") {
  Germ f(parse_poly("x^2 + y^3", {"x", "y"}));
  long mu = milnor_number(f);
  PolyMap g(gradient(f.poly()));
  FibreConfig cfg;
  int complete = 0;
  const int n = 50;
  for (int s = 0; s < n; ++s) {
    Rng rng(derive_seed(2718, 0, static_cast<std::uint64_t>(s)));
    ComplexPoint dir = rng.sphere_direction(2);
    ComplexPoint w(2);
    for (int i = 0; i < 2; ++i) w[i] = 0.03 * dir[i];
    Fibre fib = solve_fibre(g, w, mu, cfg, static_cast<std::uint64_t>(s));
    REQUIRE(fib.points.size() <= static_cast<std::size_t>(mu));
    if (fib.complete) ++complete;
  }
  REQUIRE(complete >= 48);  // >= 95% of 50
}
