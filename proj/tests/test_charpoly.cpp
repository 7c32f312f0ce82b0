#include <catch2/catch_amalgamated.hpp>

#include "gen.hpp"
#include "lojax/charpoly.hpp"
#include "lojax/parse.hpp"
#include "oracle_resultant.hpp"

using namespace lojax;

namespace {

Polynomial ladder_closed_form(int d) {
  // t^(d-1) - (w/d)^d
  std::vector<std::string> wt = {"w", "t"};
  Polynomial p = Polynomial::variable(wt, 1, d - 1);
  Polynomial wd = Polynomial::variable(wt, 0, d);
  Rational dd = 1;
  for (int k = 0; k < d; ++k) dd *= d;
  return p - GaussianRational(Rational(1) / dd) * wd;
}

}  // namespace

TEST_CASE("resultant oracle agrees with its own closed form") {
  for (int d = 2; d <= 6; ++d) {
    Polynomial f = parse_poly("z^" + std::to_string(d), {"z"});
    Polynomial g = gradient(f)[0];
    REQUIRE(oracle::charpoly_resultant(f, g) == ladder_closed_form(d));
  }
}

TEST_CASE("exact charpoly matches the independent resultant oracle") {
  for (int d = 2; d <= 6; ++d) {
    Germ f(parse_poly("z^" + std::to_string(d), {"z"}));
    CharPoly P = charpoly_exact(f);
    REQUIRE(P.mu == d - 1);
    REQUIRE(P.eliminant == oracle::charpoly_resultant(f.poly(), gradient(f.poly())[0]));
    REQUIRE(P.eliminant == ladder_closed_form(d));
  }
}

TEST_CASE("exact charpoly of x^2 + y^2") {
  Germ f(parse_poly("x^2+y^2", {"x", "y"}));
  CharPoly P = charpoly_exact(f);
  REQUIRE(P.mu == 1);
  REQUIRE(P.exact_coeffs[0] == parse_poly("-1/4*w1^2 - 1/4*w2^2", {"w1", "w2"}));
}

TEST_CASE("exact path refuses germs with distant critical points") {
  Germ f(parse_poly("x^3 + y^3 + x*y", {"x", "y"}));
  REQUIRE_THROWS_AS(charpoly_exact(f), GlobalLocalMismatchError);
}

TEST_CASE("every exact coefficient vanishes at the origin") {
  std::vector<std::string> exprs = {"z^4", "x^2+y^2", "x^2+y^3", "x^3+y^4"};
  for (const auto& e : exprs) {
    std::vector<std::string> vars = e.front() == 'z' ? std::vector<std::string>{"z"}
                                                     : std::vector<std::string>{"x", "y"};
    CharPoly P = charpoly_exact(Germ(parse_poly(e, vars)));
    REQUIRE(P.exact_coeffs.size() == static_cast<std::size_t>(P.mu));
    for (const auto& aj : P.exact_coeffs) REQUIRE(aj.constant_term().is_zero());
  }
}

TEST_CASE("numeric charpoly samples match closed forms") {
  FibreConfig cfg;
  SECTION("a_2 of z^3 along the real ray is -s^3/27") {
    Germ f(parse_poly("z^3", {"z"}));
    std::vector<ComplexPoint> rays = {{Cplx(1, 0)}};
    std::vector<double> radii = {1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3};
    CharPoly P = charpoly_numeric(f, gradient(f.poly()), 2, rays, radii, cfg);
    const auto& ray = P.rays[0];
    for (std::size_t k = 0; k < radii.size(); ++k) {
      REQUIRE(ray.usable[k]);
      double s = radii[k];
      REQUIRE(std::abs(ray.coeff_values[k][1] - Cplx(-s * s * s / 27.0, 0)) <
              1e-10 * s * s * s);
      REQUIRE(std::abs(ray.coeff_values[k][0]) < 1e-13);  // a_1 == 0
    }
  }
  SECTION("a_1 of x^2+y^2 is sampled exactly (single-point fibres)") {
    Germ f(parse_poly("x^2+y^2", {"x", "y"}));
    CharPoly P = charpoly_numeric(f, gradient(f.poly()), 1, cfg);
    CharPoly Pe = charpoly_exact(f);
    for (const auto& ray : P.rays)
      for (std::size_t k = 0; k < ray.radii.size(); ++k) {
        REQUIRE(ray.usable[k]);
        ComplexPoint w(2);
        for (int c = 0; c < 2; ++c) w[c] = ray.radii[k] * ray.direction[c];
        Cplx expect = Pe.exact_coeffs[0].evaluate(w);
        REQUIRE(std::abs(ray.coeff_values[k][0] - expect) <= 1e-10 * (1.0 + std::abs(expect)));
      }
  }
}

TEST_CASE("numeric coefficients agree with exact evaluation at the largest radius") {
  FibreConfig cfg;
  for (const auto& expr : {std::string("x^2+y^3"), std::string("x^3+y^3")}) {
    Germ f(parse_poly(expr, {"x", "y"}));
    long mu = local_multiplicity(gradient(f.poly())).value();
    CharPoly Pn = charpoly_numeric(f, gradient(f.poly()), mu, cfg);
    CharPoly Pe = charpoly_exact(f);
    for (const auto& ray : Pn.rays) {
      if (!ray.usable[0]) continue;
      ComplexPoint w(2);
      for (int c = 0; c < 2; ++c) w[c] = ray.radii[0] * ray.direction[c];
      for (long j = 1; j <= mu; ++j) {
        Cplx expect = Pe.exact_coeffs[static_cast<std::size_t>(j - 1)].evaluate(w);
        Cplx got = ray.coeff_values[0][static_cast<std::size_t>(j - 1)];
        REQUIRE(std::abs(got - expect) <= 1e-8 * (1.0 + std::abs(expect)));
      }
    }
  }
}

TEST_CASE("coefficient orders") {
  SECTION("exact orders") {
    CharPoly P2 = charpoly_exact(Germ(parse_poly("z^2", {"z"})));
    auto est = ord_of_coefficient(P2, 1);
    REQUIRE(est.value == 2);
    REQUIRE(est.method == OrderEstimate::Method::exact);
  }
  SECTION("identically zero coefficient is INFINITE (exact and fitted)") {
    CharPoly P3 = charpoly_exact(Germ(parse_poly("z^3", {"z"})));
    REQUIRE(ord_of_coefficient(P3, 1).infinite());
    FibreConfig cfg;
    Germ f(parse_poly("z^3", {"z"}));
    CharPoly Pn = charpoly_numeric(f, gradient(f.poly()), 2, cfg);
    REQUIRE(ord_of_coefficient(Pn, 1).infinite());
    auto a2 = ord_of_coefficient(Pn, 2);
    REQUIRE(a2.value == 3);
    REQUIRE(a2.stable);
    REQUIRE(std::abs(a2.slope - 3.0) < 0.1);
  }
  SECTION("fitted equals exact on a mixed-order germ") {
    FibreConfig cfg;
    Germ f(parse_poly("x^2+y^3", {"x", "y"}));
    CharPoly Pe = charpoly_exact(f);
    CharPoly Pn = charpoly_numeric(f, gradient(f.poly()), 2, cfg);
    for (int j = 1; j <= 2; ++j) {
      auto exact = ord_of_coefficient(Pe, j);
      auto fitted = ord_of_coefficient(Pn, j);
      REQUIRE(exact.infinite() == fitted.infinite());
      if (!exact.infinite()) REQUIRE(*exact.value == *fitted.value);
    }
  }
}

TEST_CASE("annihilation identity") {
  SECTION("exact: P(grad f, f) expands to the zero polynomial") {
    for (const auto& expr : {std::string("z^2"), std::string("z^3")}) {
      CharPoly P = charpoly_exact(Germ(parse_poly(expr, {"z"})));
      AnnihilationReport rep = verify_annihilation(P);
      REQUIRE(rep.exact_path);
      REQUIRE(rep.identity_zero);
    }
  }
  SECTION("numeric: residuals below tolerance at random polydisc points") {
    Rng rng(77);
    std::vector<std::string> xy = {"x", "y"};
    // A random cubic germ with isolated singularity.
    Polynomial f = parse_poly("x^2 + x*y + y^3", xy);
    Germ germ(f);
    long mu = milnor_number(germ);
    FibreConfig cfg;
    CharPoly P = charpoly_numeric(germ, gradient(f), mu, cfg);
    // Stay well inside the halved polydisc that excludes the germ's second
    // critical point, so every sample's own sheet remains in the fibre.
    std::vector<ComplexPoint> samples;
    for (int s = 0; s < 100; ++s) samples.push_back(rng.polydisc(2, 0.1));
    AnnihilationReport rep = verify_annihilation(P, samples, cfg);
    REQUIRE(rep.samples_used >= 90);
    REQUIRE(rep.ok);
  }
}

TEST_CASE("initial form of every exact corpus charpoly is t^mu") {
  std::vector<std::pair<std::string, std::vector<std::string>>> corpus = {
      {"z^4", {"z"}}, {"x^2+y^2", {"x", "y"}}, {"x^2+y^3", {"x", "y"}}, {"x^4+y^3", {"x", "y"}}};
  for (const auto& [expr, vars] : corpus) {
    CharPoly P = charpoly_exact(Germ(parse_poly(expr, vars)));
    Polynomial in_p = P.eliminant.initial_form();
    Monomial tmu(P.eliminant.nvars());
    tmu[P.eliminant.nvars() - 1] = static_cast<int>(P.mu);
    REQUIRE(in_p.term_count() == 1);
    REQUIRE(in_p.coefficient(tmu) == GaussianRational(1));
  }
}

TEST_CASE("too few usable radii raises") {
  Germ f(parse_poly("z^2", {"z"}));
  FibreConfig cfg;
  RayConfig rc;
  rc.radii_count = 2;  // below the fit minimum
  REQUIRE_THROWS_AS(charpoly_numeric(f, gradient(f.poly()), 1, cfg, rc), TooFewSamplesError);
}
