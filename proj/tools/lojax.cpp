// Command-line front end: ingest germ/family specs, run the analysis
// pipelines, and emit deterministic JSON reports plus CSV/SVG artifacts.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "lojax/lojax.hpp"

namespace fs = std::filesystem;
using namespace lojax;

namespace {

struct RunConfig {
  std::uint64_t seed = 0x4C4F4A4158ULL;
  int jobs = 1;
  std::string out_dir;
  int degree_cap = 30;

  double rho = 0.5;
  double newton_tol = 1e-12;
  double dedupe_radius = 1e-8;
  int multistarts = 200;

  int shells = 8;
  double shell_radius = 0.1;
  double shell_ratio = 0.5;
  int shell_samples = 500;

  int radii_count = 8;
  double radius_start = 0.1;
  double radius_ratio = 0.5;
  int random_rays = 3;

  std::string method = "auto";
  bool verify = false;
  bool plot = false;
  bool csv = false;

  BasisOptions basis() const { return BasisOptions{degree_cap}; }
  FibreConfig fibre() const {
    FibreConfig c;
    c.rho = rho;
    c.newton_tol = newton_tol;
    c.dedupe_radius = dedupe_radius;
    c.multistarts_per_sheet = multistarts;
    c.seed = seed;
    return c;
  }
  ShellConfig shell() const {
    ShellConfig c;
    c.shells = shells;
    c.radius_start = shell_radius;
    c.radius_ratio = shell_ratio;
    c.samples_per_shell = shell_samples;
    c.seed = seed;
    c.jobs = jobs;
    return c;
  }
  RayConfig rays() const {
    RayConfig c;
    c.random_rays = random_rays;
    c.radii_count = radii_count;
    c.radius_start = radius_start;
    c.radius_ratio = radius_ratio;
    return c;
  }
};

Json config_json(const RunConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["degree_cap"] = cfg.degree_cap;
  j["fibre"] = Json{{"rho", cfg.rho},
                    {"newton_tol", cfg.newton_tol},
                    {"dedupe_radius", cfg.dedupe_radius},
                    {"multistarts_per_sheet", cfg.multistarts}};
  j["shells"] = Json{{"count", cfg.shells},
                     {"radius_start", cfg.shell_radius},
                     {"radius_ratio", cfg.shell_ratio},
                     {"samples_per_shell", cfg.shell_samples}};
  j["rays"] = Json{{"random", cfg.random_rays},
                   {"radii_count", cfg.radii_count},
                   {"radius_start", cfg.radius_start},
                   {"radius_ratio", cfg.radius_ratio}};
  j["method"] = cfg.method;
  return j;
}

struct GermInput {
  Polynomial f;
  std::vector<std::string> vars;
  std::string expr;
};

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

GermInput load_germ(const std::string& file, const std::string& expr, const std::string& vars) {
  GermInput in;
  if (!expr.empty()) {
    in.vars = split_csv_list(vars);
    if (in.vars.empty()) throw Error("--expr requires --vars");
    in.expr = expr;
  } else if (!file.empty()) {
    Json j = read_json_file(file);
    if (!j.contains("f") || !j.contains("vars")) throw Error("germ file needs fields f, vars");
    in.expr = j["f"].get<std::string>();
    in.vars = j["vars"].get<std::vector<std::string>>();
  } else {
    throw Error("provide an input file or --expr/--vars");
  }
  in.f = parse_poly(in.expr, in.vars);
  return in;
}

GaussianRational parse_exact_complex(const Json& pair) {
  if (!pair.is_array() || pair.size() != 2)
    throw Error("grid entries must be [re, im] rational strings");
  return {parse_rational(pair[0].get<std::string>()), parse_rational(pair[1].get<std::string>())};
}

struct FamilyInput {
  Polynomial f;
  std::vector<std::string> x_vars, t_vars;
  std::string expr;
  std::optional<std::vector<GridPoint>> grid;
};

FamilyInput load_family(const std::string& file) {
  if (file.empty()) throw Error("family command requires an input file");
  Json j = read_json_file(file);
  for (const char* key : {"f", "x_vars", "t_vars"})
    if (!j.contains(key)) throw Error(std::string("family file needs field ") + key);
  FamilyInput in;
  in.expr = j["f"].get<std::string>();
  in.x_vars = j["x_vars"].get<std::vector<std::string>>();
  in.t_vars = j["t_vars"].get<std::vector<std::string>>();
  std::vector<std::string> all = in.x_vars;
  all.insert(all.end(), in.t_vars.begin(), in.t_vars.end());
  in.f = parse_poly(in.expr, all);
  if (j.contains("grid")) {
    std::vector<GridPoint> grid;
    for (const auto& entry : j["grid"]) {
      GridPoint p;
      if (entry.is_array() && !entry.empty() && entry[0].is_array()) {
        for (const auto& c : entry) p.push_back(parse_exact_complex(c));
      } else {
        p.push_back(parse_exact_complex(entry));
      }
      if (p.size() != in.t_vars.size())
        throw Error("grid point arity does not match t_vars");
      grid.push_back(std::move(p));
    }
    in.grid = std::move(grid);
  }
  return in;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

/// Prints the report to stdout and, with --out, into <dir>/report.json.
void emit_report(const Json& report, const RunConfig& cfg) {
  std::string text = json_to_string(report);
  std::cout << text;
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "report.json", text);
  }
}

Json report_skeleton(const char* command, const RunConfig& cfg) {
  Json j;
  j["tool"] = "lojax";
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config_json(cfg);
  j["warnings"] = Json::array();
  return j;
}

CharPoly build_charpoly(const Germ& germ, long mu, const RunConfig& cfg, Json& warnings) {
  if (cfg.method == "exact") return charpoly_exact(germ, cfg.basis());
  if (cfg.method == "numeric")
    return charpoly_numeric(germ, gradient(germ.poly()), mu, cfg.fibre(), cfg.rays());
  try {
    return charpoly_exact(germ, cfg.basis());
  } catch (const GlobalLocalMismatchError& e) {
    warnings.push_back(std::string("exact path refused, falling back to numeric: ") + e.what());
    return charpoly_numeric(germ, gradient(germ.poly()), mu, cfg.fibre(), cfg.rays());
  }
}

std::vector<std::pair<double, double>> plot_points(const Germ& germ, const RunConfig& cfg) {
  std::vector<std::pair<double, double>> pts;
  std::vector<Polynomial> grad = gradient(germ.poly());
  const std::size_t m = germ.poly().nvars();
  int per_shell = std::min(cfg.shell_samples, 120);
  double r = cfg.shell_radius;
  for (int shell = 0; shell < cfg.shells; ++shell, r *= cfg.shell_ratio) {
    for (int i = 0; i < per_shell; ++i) {
      Rng rng(derive_seed(cfg.seed, 0x5E11, static_cast<std::uint64_t>(i)));
      ComplexPoint dir = rng.sphere_direction(m);
      ComplexPoint z(m);
      for (std::size_t c = 0; c < m; ++c) z[c] = r * dir[c];
      double gn2 = 0.0;
      for (const auto& gi : grad) gn2 += std::norm(gi.evaluate(z));
      double fz = std::abs(germ.poly().evaluate(z));
      if (gn2 <= 0.0 || fz <= 0.0) continue;
      pts.emplace_back(0.5 * std::log(gn2), std::log(fz));
    }
  }
  return pts;
}

int run_milnor(const GermInput& in, const RunConfig& cfg) {
  Json report = report_skeleton("milnor", cfg);
  report["input"] = Json{{"f", in.expr}, {"vars", in.vars}};
  Germ germ(in.f);
  std::optional<long> mu = milnor_number_opt(germ, cfg.basis());
  Json res;
  res["isolated"] = mu.has_value();
  if (mu)
    res["mu"] = *mu;
  else
    res["mu"] = "INFINITE";
  report["results"] = std::move(res);
  emit_report(report, cfg);
  return mu ? 0 : 2;
}

int run_charpoly_cmd(const GermInput& in, const RunConfig& cfg) {
  Json report = report_skeleton("charpoly", cfg);
  report["input"] = Json{{"f", in.expr}, {"vars", in.vars}};
  Germ germ(in.f);
  long mu = milnor_number(germ, cfg.basis());
  CharPoly P = build_charpoly(germ, mu, cfg, report["warnings"]);
  Json res;
  res["mu"] = mu;
  res["charpoly"] = to_json(P);
  Json orders = Json::array();
  for (const auto& e : coefficient_orders(P)) orders.push_back(to_json(e));
  res["orders"] = std::move(orders);
  if (P.is_exact()) {
    AnnihilationReport ann = verify_annihilation(P);
    res["annihilation"] = Json{{"exact", true}, {"ok", ann.ok}};
  } else {
    std::vector<ComplexPoint> samples;
    for (int s = 0; s < 50; ++s) {
      Rng rng(derive_seed(cfg.seed, 0xA33, static_cast<std::uint64_t>(s)));
      samples.push_back(rng.polydisc(in.vars.size(), cfg.rho * 0.5));
    }
    AnnihilationReport ann = verify_annihilation(P, samples, cfg.fibre());
    res["annihilation"] = Json{{"exact", false},
                               {"max_residual", ann.max_residual},
                               {"tolerance", ann.tolerance},
                               {"samples_used", ann.samples_used},
                               {"samples_skipped", ann.samples_skipped},
                               {"ok", ann.ok}};
  }
  report["results"] = std::move(res);
  if (cfg.csv && !cfg.out_dir.empty() && !P.is_exact()) {
    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "coefficient_samples.csv", csv_coefficient_samples(P));
  }
  emit_report(report, cfg);
  return 0;
}

int run_exponent(const GermInput& in, const RunConfig& cfg, bool full_verify) {
  Json report = report_skeleton(full_verify ? "verify" : "exponent", cfg);
  report["input"] = Json{{"f", in.expr}, {"vars", in.vars}};
  Germ germ(in.f);
  long mu = milnor_number(germ, cfg.basis());
  CharPoly P = build_charpoly(germ, mu, cfg, report["warnings"]);
  ExponentCertificate cert = gradient_exponent(P);
  OrderBoundReport ob = check_order_bound(P);
  Json res;
  res["mu"] = mu;
  res["charpoly"] = to_json(P);
  res["certificate"] = to_json(cert);
  res["order_bound"] = Json{{"ok", ob.ok},
                            {"initial_form_checked", ob.initial_form_checked},
                            {"initial_form_is_t_mu", ob.initial_form_is_t_mu}};
  bool all_ok = ob.ok;
  if (full_verify || cfg.verify) {
    ShellReport sh = empirical_verify(germ, cert.theta, cfg.shell());
    res["shells"] = to_json(sh);
    all_ok = all_ok && sh.verdict != ShellVerdict::DIVERGENT;
    VietaReport vr = vieta_bound_check(P, 200, cfg.rho, cfg.seed, cfg.fibre());
    res["vieta"] = Json{{"max_ratio", vr.max_ratio},
                        {"samples_used", vr.samples_used},
                        {"samples_skipped", vr.samples_skipped},
                        {"ok", vr.ok}};
    all_ok = all_ok && vr.ok;
    if (full_verify) {
      AnnihilationReport ann;
      if (P.is_exact()) {
        ann = verify_annihilation(P);
      } else {
        std::vector<ComplexPoint> samples;
        for (int s = 0; s < 50; ++s) {
          Rng rng(derive_seed(cfg.seed, 0xA33, static_cast<std::uint64_t>(s)));
          samples.push_back(rng.polydisc(in.vars.size(), cfg.rho * 0.5));
        }
        ann = verify_annihilation(P, samples, cfg.fibre());
      }
      res["annihilation"] = Json{{"exact", P.is_exact()}, {"ok", ann.ok}};
      all_ok = all_ok && ann.ok;
    }
    if (!cfg.out_dir.empty()) {
      fs::create_directories(cfg.out_dir);
      write_file(fs::path(cfg.out_dir) / "shells.csv", csv_shells(sh));
    }
  }
  if (full_verify) res["all_checks_ok"] = all_ok;
  report["results"] = std::move(res);
  if (cfg.plot && !cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "plot.svg",
               svg_loglog_scatter(plot_points(germ, cfg), to_double(cert.theta),
                                  "gradient inequality: " + in.expr));
  }
  emit_report(report, cfg);
  return full_verify && !all_ok ? 2 : 0;
}

int run_family(const FamilyInput& in, const RunConfig& cfg) {
  Json report = report_skeleton("family", cfg);
  Json input;
  input["f"] = in.expr;
  input["x_vars"] = in.x_vars;
  input["t_vars"] = in.t_vars;
  report["input"] = std::move(input);
  Unfolding u(in.f, in.x_vars.size(), in.t_vars.size());
  FamilyConfig fc;
  fc.grid = in.grid;
  fc.basis = cfg.basis();
  fc.shells = cfg.shell();
  fc.fibre = cfg.fibre();
  fc.rays = cfg.rays();
  fc.hartogs.seed = cfg.seed;
  fc.stoll.fibre.seed = cfg.seed;
  FamilyReport fr = analyze_family(u, fc);

  Json res;
  res["mu0"] = fr.mu0;
  res["mu_G"] = fr.mu_G;
  res["theta_star"] = to_json(fr.theta_star);
  Json grid = Json::array();
  for (const auto& p : fr.mu_table.grid) grid.push_back(to_json(p));
  res["grid"] = std::move(grid);
  Json mus = Json::array();
  for (const auto& m : fr.mu_table.mu_t)
    mus.push_back(m ? Json(*m) : Json("NOT_ISOLATED"));
  res["mu_t"] = std::move(mus);
  res["constancy"] = to_string(fr.mu_table.verdict);
  res["symbolic"] = Json{{"verdict", to_string(fr.symbolic.verdict)},
                         {"witness_powers", fr.symbolic.witness_power},
                         {"power_cap", fr.symbolic.power_cap}};
  res["constancy_established"] = fr.constancy_established;
  if (fr.charpoly) {
    Json cp;
    cp["mu"] = fr.charpoly->mu;
    cp["method"] = fr.charpoly->is_exact() ? "exact" : "numeric";
    if (fr.charpoly->is_exact()) {
      cp["P"] = fr.charpoly->eliminant.str();
      cp["lead"] = fr.charpoly->lead.str();
      cp["vars"] = fr.charpoly->eliminant.vars();
    }
    if (!fr.charpoly_note.empty()) cp["note"] = fr.charpoly_note;
    res["family_charpoly"] = std::move(cp);
  }
  if (fr.hartogs) {
    Json h;
    h["radii"] = fr.hartogs->radii;
    h["overall_sup"] = fr.hartogs->overall_sup;
    h["growth_flags"] = fr.hartogs->growth_flag;
    h["any_growth"] = fr.hartogs->any_growth;
    res["hartogs"] = std::move(h);
  }
  if (fr.uniform) {
    Json u_;
    u_["theta_star"] = to_json(fr.uniform->theta_star);
    Json per_t = Json::array();
    for (std::size_t i = 0; i < fr.uniform->per_t.size(); ++i) {
      const ShellReport& sr = fr.uniform->per_t[i];
      per_t.push_back(Json{{"t", to_json(fr.uniform->grid[i])},
                           {"verdict", to_string(sr.verdict)},
                           {"constant", sr.constant}});
    }
    u_["per_t"] = std::move(per_t);
    u_["joint_verdict"] = to_string(fr.uniform->joint.verdict);
    u_["shared_constant"] = fr.uniform->shared_constant;
    u_["no_blowup_trend"] = fr.uniform->no_blowup_trend;
    u_["ok"] = fr.uniform->ok;
    res["uniform_exponent"] = std::move(u_);
  }
  if (fr.semicontinuity) {
    const auto& sc = *fr.semicontinuity;
    Json s;
    Json mu_t = Json::array();
    for (const auto& m : sc.mu_t) mu_t.push_back(m ? Json(*m) : Json("NOT_ISOLATED"));
    s["mu_t"] = std::move(mu_t);
    s["le_mu0"] = sc.le_mu0;
    Json verdicts = Json::array();
    for (auto v : sc.slice_verdicts) verdicts.push_back(to_string(v));
    s["slice_verdicts"] = std::move(verdicts);
    s["slice_constants"] = sc.slice_constants;
    s["pass"] = sc.pass;
    res["semicontinuity"] = std::move(s);
  } else if (!fr.semicontinuity_note.empty()) {
    res["semicontinuity"] = Json{{"note", fr.semicontinuity_note}};
  }
  if (!fr.stoll.empty()) {
    Json st = Json::array();
    for (const auto& s : fr.stoll)
      st.push_back(Json{{"t", to_json(s.t)},
                        {"mu_t", s.mu_t ? Json(*s.mu_t) : Json("NOT_ISOLATED")},
                        {"rays", s.rays},
                        {"passed", s.passed},
                        {"over_count", s.over_count},
                        {"ok", s.ok}});
    res["stoll"] = std::move(st);
  }
  res["hard_failure"] = fr.hard_failure;
  report["results"] = std::move(res);

  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    std::ostringstream mu_csv;
    mu_csv << "t,mu_t\n";
    for (std::size_t i = 0; i < fr.mu_table.grid.size(); ++i) {
      mu_csv << "\"";
      for (std::size_t l = 0; l < fr.mu_table.grid[i].size(); ++l) {
        if (l) mu_csv << ";";
        mu_csv << fr.mu_table.grid[i][l].str();
      }
      mu_csv << "\",";
      if (fr.mu_table.mu_t[i])
        mu_csv << *fr.mu_table.mu_t[i];
      else
        mu_csv << "NOT_ISOLATED";
      mu_csv << "\n";
    }
    write_file(fs::path(cfg.out_dir) / "mu_table.csv", mu_csv.str());
  }
  emit_report(report, cfg);
  return fr.hard_failure ? 2 : 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg, std::string& file, std::string& expr,
                std::string& vars, bool with_germ = true) {
  if (with_germ) {
    cmd->add_option("input", file, "germ JSON file {\"f\": expr, \"vars\": [..]}");
    cmd->add_option("-e,--expr", expr, "inline polynomial expression");
    cmd->add_option("-v,--vars", vars, "comma-separated variables for --expr");
  }
  cmd->add_option("--seed", cfg.seed, "RNG seed (LOJAX_SEED overrides)");
  cmd->add_option("--jobs", cfg.jobs, "worker threads for sampling")->check(CLI::PositiveNumber);
  cmd->add_option("--out", cfg.out_dir, "output directory for report/CSV/SVG files");
  cmd->add_option("--degree-cap", cfg.degree_cap, "basis computation degree cap");
  cmd->add_option("--rho", cfg.rho, "polydisc radius");
  cmd->add_option("--newton-tol", cfg.newton_tol, "Newton residual tolerance");
  cmd->add_option("--shell-samples", cfg.shell_samples, "sample points per shell");
  cmd->add_option("--shells", cfg.shells, "number of shells");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Milnor numbers, characteristic polynomials and gradient-inequality exponents "
               "for polynomial germs and unfoldings"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string file, expr, vars, family_file;

  CLI::App* milnor = app.add_subcommand("milnor", "Milnor number and isolatedness");
  add_common(milnor, cfg, file, expr, vars);

  CLI::App* charp = app.add_subcommand("charpoly", "characteristic polynomial of the gradient");
  add_common(charp, cfg, file, expr, vars);
  charp->add_option("--method", cfg.method, "exact | numeric | auto")
      ->check(CLI::IsMember({"exact", "numeric", "auto"}));
  charp->add_flag("--csv", cfg.csv, "write sampled coefficient tables (with --out)");

  CLI::App* expo = app.add_subcommand("exponent", "gradient-inequality exponent certificate");
  add_common(expo, cfg, file, expr, vars);
  expo->add_option("--method", cfg.method, "exact | numeric | auto")
      ->check(CLI::IsMember({"exact", "numeric", "auto"}));
  expo->add_flag("--verify", cfg.verify, "also run the empirical shell check");
  expo->add_flag("--plot", cfg.plot, "write a log-log SVG scatter (with --out)");

  CLI::App* fam = app.add_subcommand("family", "unfolding analysis (constancy, uniform exponent)");
  fam->add_option("input", family_file, "family JSON file")->required();
  {
    std::string dummy_e, dummy_v, dummy_f;
    add_common(fam, cfg, dummy_f, dummy_e, dummy_v, false);
  }

  CLI::App* verify = app.add_subcommand("verify", "full verification battery for a germ");
  add_common(verify, cfg, file, expr, vars);
  verify->add_option("--method", cfg.method, "exact | numeric | auto")
      ->check(CLI::IsMember({"exact", "numeric", "auto"}));
  verify->add_flag("--plot", cfg.plot, "write a log-log SVG scatter (with --out)");

  CLI11_PARSE(app, argc, argv);

  if (const char* env_seed = std::getenv("LOJAX_SEED")) {
    try {
      cfg.seed = std::stoull(env_seed);
    } catch (...) {
      std::cerr << "error: LOJAX_SEED must be an unsigned integer\n";
      return 1;
    }
  }

  try {
    if (app.got_subcommand(milnor)) return run_milnor(load_germ(file, expr, vars), cfg);
    if (app.got_subcommand(charp)) return run_charpoly_cmd(load_germ(file, expr, vars), cfg);
    if (app.got_subcommand(expo)) return run_exponent(load_germ(file, expr, vars), cfg, false);
    if (app.got_subcommand(verify)) {
      cfg.verify = true;
      return run_exponent(load_germ(file, expr, vars), cfg, true);
    }
    if (app.got_subcommand(fam)) {
      FamilyInput in;
      try {
        in = load_family(family_file);
        return run_family(in, cfg);
      } catch (const PreconditionError& e) {
        // Family-file invariants (f(0,t) = 0) are input contract violations.
        std::string msg = e.what();
        if (msg.find("f(0,t)") != std::string::npos) {
          std::cerr << "error: " << msg << "\n";
          return 1;
        }
        throw;
      }
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const GlobalLocalMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FitUnstableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TooFewSamplesError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
