#include <catch2/catch_amalgamated.hpp>

#include "lojax/family.hpp"
#include "lojax/parse.hpp"

using namespace lojax;

namespace {

Unfolding morse() { return Unfolding(parse_poly("x^2 + y^2 + t*x*y", {"x", "y", "t"}), 2, 1); }
Unfolding hesse() { return Unfolding(parse_poly("x^3 + y^3 + t*x*y", {"x", "y", "t"}), 2, 1); }

std::vector<GridPoint> hesse_grid() {
  return {{GaussianRational(0)},
          {GaussianRational(Rational(1, 8))},
          {GaussianRational(Rational(1, 4))}};
}

}  // namespace

TEST_CASE("unfolding invariants") {
  REQUIRE_THROWS_AS(Unfolding(parse_poly("x + t", {"x", "t"}), 1, 1), PreconditionError);
  Unfolding u = morse();
  REQUIRE(u.mu0() == 1);
  REQUIRE(u.x_vars() == std::vector<std::string>{"x", "y"});
  REQUIRE(u.t_vars() == std::vector<std::string>{"t"});
}

TEST_CASE("build_G") {
  Unfolding u = morse();
  PolyMap G = build_G(u);
  REQUIRE(G.components().size() == 3);
  REQUIRE(G.components()[0] == parse_poly("2*x + t*y", {"x", "y", "t"}));
  REQUIRE(G.components()[1] == parse_poly("2*y + t*x", {"x", "y", "t"}));
  REQUIRE(G.components()[2] == parse_poly("t", {"x", "y", "t"}));

  // k = 0 degenerates to the gradient itself.
  Unfolding u0(parse_poly("z^3", {"z"}), 1, 0);
  REQUIRE(build_G(u0).components()[0] == parse_poly("3*z^2", {"z"}));
}

TEST_CASE("mu_of_G equals mu0") {
  REQUIRE(mu_of_G(morse()) == 1);
  REQUIRE(mu_of_G(hesse()) == 4);
  REQUIRE(mu_of_G(Unfolding(parse_poly("z^4", {"z", "t"}), 1, 1)) == 3);
}

TEST_CASE("default grid is deterministic and small") {
  auto g1 = default_grid(1);
  REQUIRE(g1.size() == 6);
  REQUIRE(g1[0][0] == GaussianRational(0));
  auto g2 = default_grid(2);
  REQUIRE(g2.size() == 25);
  REQUIRE(default_grid(2) == g2);
}

TEST_CASE("grid constancy verdicts") {
  SECTION("Morse family is constant on the default grid") {
    GridMuTable t = mu_constancy_grid(morse(), default_grid(1));
    REQUIRE(t.verdict == Constancy::CONSTANT_ON_GRID);
    for (const auto& mu : t.mu_t) REQUIRE(mu == 1);
  }
  SECTION("Hesse family drops from 4 to 1 off centre") {
    GridMuTable t = mu_constancy_grid(hesse(), hesse_grid());
    REQUIRE(t.verdict == Constancy::NON_CONSTANT);
    REQUIRE(t.mu_t[0] == 4);
    REQUIRE(t.mu_t[1] == 1);
    REQUIRE(t.mu_t[2] == 1);
  }
  SECTION("constant family") {
    GridMuTable t = mu_constancy_grid(Unfolding(parse_poly("x^3", {"x", "t"}), 1, 1),
                                      default_grid(1));
    REQUIRE(t.verdict == Constancy::CONSTANT_ON_GRID);
    for (const auto& mu : t.mu_t) REQUIRE(mu == 2);
  }
}

TEST_CASE("symbolic constancy certificates") {
  SECTION("Morse family is PROVED") {
    SymbolicConstancy s = mu_constancy_symbolic(morse());
    REQUIRE(s.verdict == SymbolicVerdict::PROVED);
    for (long n : s.witness_power) {
      REQUIRE(n >= 1);
      REQUIRE(n <= 2);
    }
  }
  SECTION("Hesse family is not PROVED") {
    SymbolicConstancy s = mu_constancy_symbolic(hesse());
    REQUIRE(s.verdict == SymbolicVerdict::UNDECIDED);
  }
  SECTION("t-independent family is PROVED") {
    SymbolicConstancy s =
        mu_constancy_symbolic(Unfolding(parse_poly("x^3", {"x", "t"}), 1, 1));
    REQUIRE(s.verdict == SymbolicVerdict::PROVED);
  }
  SECTION("x*t-type unfolding is REFUTED (gradient alive on {x=0})") {
    SymbolicConstancy s =
        mu_constancy_symbolic(Unfolding(parse_poly("x^2 + x*t", {"x", "t"}), 1, 1));
    REQUIRE(s.verdict == SymbolicVerdict::REFUTED);
  }
}

TEST_CASE("exact family charpoly of the Morse family") {
  Unfolding u = morse();
  FamilyCharPoly P = family_charpoly_exact(u, true);
  REQUIRE(P.mu == 1);
  REQUIRE(P.lead.constant_term() == GaussianRational(1));

  SECTION("a_1(0, t) vanishes identically") {
    std::map<std::string, GaussianRational> zero_w{{"w1", GaussianRational(0)},
                                                   {"w2", GaussianRational(0)}};
    REQUIRE(P.numerators[0].substitute(zero_w).is_zero());
  }

  SECTION("specialization equals the slice charpoly on the grid") {
    for (const auto& t0 : default_grid(1)) {
      Polynomial spec = specialize_family_charpoly(P, t0);
      CharPoly slice = charpoly_exact(u.slice(t0));
      // Rename the slice's t-variable to the family's s-variable and compare.
      std::map<std::string, Polynomial> rename;
      std::vector<std::string> target = spec.vars();
      rename.emplace(slice.t_var, Polynomial::variable(target, target.size() - 1));
      for (std::size_t i = 0; i < slice.w_vars.size(); ++i)
        rename.emplace(slice.w_vars[i], Polynomial::variable(target, i));
      REQUIRE(slice.eliminant.substitute(target, rename) == spec);
    }
  }

  SECTION("gate: refuses without established constancy") {
    REQUIRE_THROWS_AS(family_charpoly_exact(u, false), PreconditionError);
  }
}

TEST_CASE("numeric family charpoly agrees with the exact one") {
  Unfolding u = morse();
  FamilyCharPoly Pe = family_charpoly_exact(u, true);
  FibreConfig cfg;
  FamilyCharPoly Pn = family_charpoly_numeric(u, true, cfg);
  REQUIRE(Pn.sampled.has_value());
  const CharPoly& S = *Pn.sampled;
  int checked = 0;
  for (const auto& ray : S.rays) {
    if (!ray.usable[0]) continue;
    ComplexPoint wt(3);
    for (int c = 0; c < 3; ++c) wt[c] = ray.radii[0] * ray.direction[c];
    Cplx expect = Pe.coefficient_values(wt)[0];
    REQUIRE(std::abs(ray.coeff_values[0][0] - expect) <= 1e-8 * (1.0 + std::abs(expect)));
    ++checked;
  }
  REQUIRE(checked >= 3);
}

TEST_CASE("k = 0 family charpoly reduces to the germ charpoly") {
  Unfolding u(parse_poly("z^3", {"z"}), 1, 0);
  FamilyCharPoly P = family_charpoly_exact(u, true);
  REQUIRE(P.mu == 2);
  REQUIRE(P.lead == Polynomial::constant({"w"}, GaussianRational(1)));
  CharPoly germ_P = charpoly_exact(Germ(parse_poly("z^3", {"z"})));
  // Same coefficients: a_2 = -w^3/27.
  REQUIRE(P.numerators[1] == germ_P.exact_coeffs[1]);
}

TEST_CASE("hartogs bound") {
  FamilyCharPoly P = family_charpoly_exact(morse(), true);
  SECTION("the j+1 bound holds") {
    HartogsReport r = hartogs_bound_check(P);
    REQUIRE_FALSE(r.any_growth);
    REQUIRE(r.overall_sup[0] > 0.0);
  }
  SECTION("negative control: ||y||^(j+2) in the denominator diverges") {
    HartogsConfig cfg;
    cfg.exponent_offset = 2;
    HartogsReport r = hartogs_bound_check(P, cfg);
    REQUIRE(r.any_growth);
  }
  SECTION("k = 0 constant ratio: |a_2|/||w||^3 = 1/27 for z^3") {
    FamilyCharPoly P3 = family_charpoly_exact(Unfolding(parse_poly("z^3", {"z"}), 1, 0), true);
    HartogsConfig cfg;
    cfg.samples_per_shell = 50;
    HartogsReport r = hartogs_bound_check(P3, cfg);
    REQUIRE(r.overall_sup[1] == Catch::Approx(1.0 / 27.0).epsilon(1e-9));
    REQUIRE_FALSE(r.growth_flag[1]);
  }
}

TEST_CASE("uniform exponent across the Morse grid") {
  ShellConfig sc;
  sc.samples_per_shell = 250;
  UniformExponentReport r = uniform_exponent_verify(morse(), default_grid(1), true, sc);
  REQUIRE(r.theta_star == Rational(1, 2));
  REQUIRE(r.all_bounded);
  REQUIRE(r.joint.verdict == ShellVerdict::BOUNDED);
  REQUIRE(r.shared_constant > 0.0);
  REQUIRE(r.shared_constant < 1.0);  // closed form gives ~1/2 for small |t|
  REQUIRE(r.no_blowup_trend);
  REQUIRE(r.ok);
  REQUIRE_THROWS_AS(uniform_exponent_verify(morse(), default_grid(1), false, sc),
                    PreconditionError);
}

TEST_CASE("semicontinuity on the Hesse grid") {
  ShellConfig sc;
  sc.samples_per_shell = 200;
  SemicontinuityReport r = semicontinuity_check(hesse(), hesse_grid(), sc);
  REQUIRE(r.pass);
  REQUIRE(r.mu_t[0] == 4);
  REQUIRE(r.mu_t[1] == 1);
  REQUIRE(r.mu_t[2] == 1);
  for (bool le : r.le_mu0) REQUIRE(le);
  for (auto v : r.slice_verdicts) REQUIRE(v == ShellVerdict::BOUNDED);

  SECTION("constant family gives equality everywhere") {
    SemicontinuityReport c = semicontinuity_check(
        Unfolding(parse_poly("x^3", {"x", "t"}), 1, 1), default_grid(1), sc);
    REQUIRE(c.pass);
    for (const auto& mu : c.mu_t) REQUIRE(mu == c.mu0);
  }
  SECTION("Morse family: 1 <= 1") {
    SemicontinuityReport m = semicontinuity_check(morse(), default_grid(1), sc);
    REQUIRE(m.pass);
  }
}

TEST_CASE("Stoll sheet counts at Hesse grid points") {
  StollConfig cfg;
  cfg.rays = 20;
  for (const auto& t0 : {hesse_grid()[1], hesse_grid()[2]}) {
    StollReport r = stoll_sheet_check(hesse(), t0, cfg);
    REQUIRE(r.mu0 == 4);
    REQUIRE(r.mu_t == 1);
    REQUIRE(r.over_count == 0);
    REQUIRE(r.ok);
  }
}

TEST_CASE("analyze_family end to end") {
  FamilyConfig cfg;
  cfg.shells.samples_per_shell = 150;
  cfg.stoll.rays = 10;
  SECTION("Morse") {
    FamilyReport r = analyze_family(morse(), cfg);
    REQUIRE(r.mu0 == 1);
    REQUIRE(r.constancy_established);
    REQUIRE(r.symbolic.verdict == SymbolicVerdict::PROVED);
    REQUIRE(r.theta_star == Rational(1, 2));
    REQUIRE(r.charpoly.has_value());
    REQUIRE(r.charpoly->is_exact());
    REQUIRE(r.uniform.has_value());
    REQUIRE(r.uniform->ok);
    REQUIRE_FALSE(r.hard_failure);
  }
  SECTION("Hesse") {
    FamilyConfig hc = cfg;
    hc.grid = hesse_grid();
    FamilyReport r = analyze_family(hesse(), hc);
    REQUIRE(r.mu0 == 4);
    REQUIRE(r.mu_table.verdict == Constancy::NON_CONSTANT);
    REQUIRE_FALSE(r.constancy_established);
    REQUIRE(r.semicontinuity.has_value());
    REQUIRE(r.semicontinuity->pass);
    REQUIRE(r.stoll.size() == 2);
    for (const auto& s : r.stoll) REQUIRE(s.ok);
    REQUIRE_FALSE(r.hard_failure);
  }
}
