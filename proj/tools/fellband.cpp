// fellband: experiment runner for twisted group convolution algebras.
//
// Subcommands: verify, growth, calculus, invert, spectrum, weights.
// Exit codes: 0 pass, 2 tolerance failure, 3 budget exceeded, 4 config error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <fellband/calculus.hpp>
#include <fellband/config.hpp>
#include <fellband/inversion.hpp>
#include <fellband/spectra.hpp>
#include <fellband/verify.hpp>

using namespace fellband;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 7;
  std::size_t budget_elems = CayleyBall::kDefaultBudget;
  std::string out_dir = ".";
  std::string emit = "json";
  std::string config_path;
};

Json load_config(const GlobalOpts& g) {
  if (g.config_path.empty()) return Json::object();
  std::ifstream in(g.config_path);
  if (!in) throw ConfigError("cannot open config file: " + g.config_path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return j;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << body;
  std::cout << "wrote " << path << "\n";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

TwistedSystem::Ptr build_system(const Json& cfg, const std::string& group_flag,
                                const std::string& twist_flag) {
  GroupModel g = !group_flag.empty() ? parse_group_shorthand(group_flag)
                 : cfg.contains("group") ? parse_group(cfg.at("group"))
                                         : GroupModel::zd(1);
  if (!twist_flag.empty()) return parse_twist_shorthand(twist_flag, std::move(g));
  return parse_twist(cfg.contains("twist") ? cfg.at("twist") : Json(), std::move(g));
}

CrossSection build_phi(const Json& cfg, const std::string& phi_flag,
                       TwistedSystem::Ptr sys) {
  if (!phi_flag.empty()) {
    if (std::filesystem::exists(phi_flag)) {
      std::ifstream in(phi_flag);
      Json j;
      in >> j;
      return parse_section(j, std::move(sys));
    }
    return named_section(phi_flag, std::move(sys));
  }
  if (cfg.contains("phi")) return parse_section(cfg.at("phi"), std::move(sys));
  return named_section("laplacian", std::move(sys));
}

Weight build_weight(const Json& cfg, const std::string& weight_flag,
                    const GroupModel& g, std::size_t budget) {
  auto ball = std::make_shared<CayleyBall>(g, g.standard_generators(), budget);
  if (!weight_flag.empty()) return parse_weight_shorthand(weight_flag, ball);
  return parse_weight(cfg.contains("weight") ? cfg.at("weight") : Json(), ball);
}

int cmd_verify(const GlobalOpts& g, const std::string& suite) {
  VerifyOptions opts;
  opts.seed = g.seed;
  opts.budget_elems = g.budget_elems;
  const auto reports = run_verify(suite, opts);
  bool all = true;
  for (const SuiteReport& s : reports)
    for (const CheckResult& c : s.checks) {
      std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << s.suite << "/" << c.name
                << "  worst=" << format_double(c.worst)
                << (c.witness.empty() ? "" : "  at " + c.witness) << "\n";
      all = all && c.pass;
    }
  write_file(g.out_dir, "verify_report.json", dump(verify_report_json(reports, opts)));
  return all ? 0 : 2;
}

int cmd_growth(const GlobalOpts& g, const Json& cfg, const std::string& group_flag,
               const std::string& twist_flag, const std::string& phi_flag,
               const std::string& weight_flag, double tmax) {
  auto sys = build_system(cfg, group_flag, twist_flag);
  const CrossSection phi = build_phi(cfg, phi_flag, sys);
  if (!is_selfadjoint(phi, 1e-10 * std::max(1.0, phi.norm_l1())))
    std::cerr << "warning: growth profile of a non-self-adjoint section\n";
  std::vector<double> grid;
  for (double t = tmax / 8.0; t <= tmax * (1 + 1e-12); t *= std::pow(2.0, 1.0 / 4.0))
    grid.push_back(t);

  const bool weighted = !weight_flag.empty() || cfg.contains("weight");
  std::optional<Weight> nu;
  if (weighted) nu = build_weight(cfg, weight_flag, sys->group(), g.budget_elems);
  const OperatorGrowthProfile plain = growth_profile_op(phi, grid);
  std::optional<OperatorGrowthProfile> wprof;
  if (nu) wprof = growth_profile_op(phi, grid, &*nu);

  std::string csv = "t,norm_l1,norm_l1nu,bound_t_pow\n";
  const OperatorGrowthProfile& ref = wprof ? *wprof : plain;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv += format_double(grid[i]) + "," + format_double(plain.norm[i]) + ",";
    csv += (wprof ? format_double(wprof->norm[i]) : std::string("")) + ",";
    csv += format_double(ref.c_hat * std::pow(grid[i], ref.theoretical_exponent)) + "\n";
  }
  write_file(g.out_dir, "growth.csv", csv);

  Json out{{"method", "scaling-squaring exponentials, point tol 1e-6 relative"},
           {"slope", format_double(plain.slope)},
           {"fit_residual", format_double(plain.residual)},
           {"c_hat", format_double(plain.c_hat)},
           {"theoretical_exponent", format_double(plain.theoretical_exponent)}};
  if (wprof) {
    out["weighted_slope"] = format_double(wprof->slope);
    out["weighted_exponent"] = format_double(wprof->theoretical_exponent);
  }
  std::cout << dump(out);
  write_file(g.out_dir, "growth.json", dump(out));

  const bool ok = plain.slope <= plain.theoretical_exponent + 0.25 &&
                  (!wprof || wprof->slope <= wprof->theoretical_exponent + 0.25);
  return ok ? 0 : 2;
}

int cmd_calculus(const GlobalOpts& g, const Json& cfg, const std::string& group_flag,
                 const std::string& twist_flag, const std::string& phi_flag,
                 const std::string& function_flag, double tol) {
  auto sys = build_system(cfg, group_flag, twist_flag);
  const CrossSection phi = build_phi(cfg, phi_flag, sys);

  // growth profile backing the tail model, emitted as plot-ready CSV
  if (!phi.empty()) {
    std::vector<double> grid;
    for (double t = 2.0; t <= 16.0 * (1 + 1e-12); t *= std::pow(2.0, 0.5))
      grid.push_back(t);
    const OperatorGrowthProfile prof = growth_profile_op(phi, grid, nullptr, 1e-4);
    std::string pcsv = "t,norm,bound\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      pcsv += format_double(grid[i]) + "," + format_double(prof.norm[i]) + "," +
              format_double(prof.c_hat * std::pow(grid[i], prof.slope)) + "\n";
    write_file(g.out_dir, "growth_profile.csv", pcsv);
  }

  // function spec: family:args, e.g. gaussian:0,1  raised_cosine:2.5,1.5
  const auto colon = function_flag.find(':');
  const std::string fam = function_flag.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::string rest = function_flag.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string tok =
          rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (!tok.empty()) args.push_back(std::stod(tok));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  auto arg = [&](std::size_t i, double dflt) { return i < args.size() ? args[i] : dflt; };
  FunctionSpec f = FunctionSpec::gaussian(0, 1);
  if (fam == "gaussian") {
    f = FunctionSpec::gaussian(arg(0, 0.0), arg(1, 1.0));
  } else if (fam == "raised_cosine") {
    f = FunctionSpec::raised_cosine(arg(0, 0.0), arg(1, 1.0));
  } else if (fam == "bump") {
    f = FunctionSpec::smooth_bump(arg(0, 0.0), arg(1, 1.0));
  } else {
    throw ConfigError("unknown function family: " + fam);
  }

  QuadratureSpec quad;
  quad.tol = tol;
  const CalcResult r = dixmier_baillet(f, phi, quad);

  Json out{{"function", f.describe()},
           {"scalar", Json::array({format_double(r.value.scalar.real()),
                                   format_double(r.value.scalar.imag())})},
           {"T", format_double(r.T)},
           {"dt", format_double(r.dt)},
           {"nodes", r.nodes},
           {"error", Json{{"quadrature", format_double(r.err.quadrature)},
                          {"tail", format_double(r.err.tail)},
                          {"series", format_double(r.err.series)},
                          {"total", format_double(r.err.total())}}},
           {"tolerance_met", r.tolerance_met}};
  std::cout << dump(out);
  write_file(g.out_dir, "calculus.json", dump(out));
  if (g.emit == "csv")
    write_file(g.out_dir, "calculus_section.csv", section_to_csv(r.value.part));
  else
    write_file(g.out_dir, "calculus_section.json", dump(section_to_json(r.value.part)));
  return r.tolerance_met ? 0 : 2;
}

int cmd_invert(const GlobalOpts& g, const Json& cfg, const std::string& group_flag,
               const std::string& twist_flag, const std::string& phi_flag,
               const std::string& weight_flag, double p, double tol) {
  auto sys = build_system(cfg, group_flag, twist_flag);
  const CrossSection phi = build_phi(cfg, phi_flag, sys);
  const Weight nu = build_weight(cfg, weight_flag.empty() ? "word" : weight_flag,
                                 sys->group(), g.budget_elems);
  const WeightConstants wc = weight_constants(nu, p, 10000);

  // C*-norm data from the best available oracle
  double cnorm = 0.0, cinv = 0.0;
  std::string oracle;
  const GroupModel& grp = sys->group();
  if (grp.is_finite()) {
    const SpectrumEstimate sp = finite_group_spectrum(phi, 8192);
    double hi = 0.0, lo = 1e300;
    for (Complex v : sp.values) {
      hi = std::max(hi, std::abs(v));
      lo = std::min(lo, std::abs(v));
    }
    cnorm = hi;
    cinv = lo > 0 ? 1.0 / lo : std::numeric_limits<double>::infinity();
    oracle = "finite-exact";
  } else if (grp.kind() == GroupModel::Kind::Zd && sys->trivial_twist() &&
             sys->fiber_dim() == 1) {
    const int gd = grp.coord_count() == 1 ? 4096 : grp.coord_count() == 2 ? 256 : 40;
    cnorm = zd_symbol_opnorm(phi, gd);
    const double lo = zd_symbol_min_abs(phi, gd);
    cinv = lo > 0 ? 1.0 / lo : std::numeric_limits<double>::infinity();
    oracle = "zd-symbol";
  } else if (grp.kind() == GroupModel::Kind::Zd && grp.coord_count() == 2 &&
             sys->fiber_dim() == 1) {
    cnorm = nc_torus_symbol_opnorm(phi, 128);
    double lo = 1e300;
    for (int i = 0; i < 128; ++i)
      for (int j = 0; j < 128; ++j) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
            nc_torus_symbol_matrix(phi, kTwoPi * i / 128, kTwoPi * j / 128));
        lo = std::min(lo, svd.singularValues()(svd.singularValues().size() - 1));
      }
    cinv = lo > 0 ? 1.0 / lo : std::numeric_limits<double>::infinity();
    oracle = "torus-symbol";
  } else {
    throw ConfigError("invert: no spectral oracle for this system");
  }

  NeumannOptions opts;
  opts.tol = tol;
  opts.support_budget = g.budget_elems;
  const InversionResult inv = invert_neumann(phi, cnorm, cinv, nu, opts);
  const double measured = norm_E(inv.inverse, nu);
  const NormControlBound bound = norm_control_bound(wc, norm_E(phi, nu), cnorm, cinv);

  Json out{{"oracle", oracle},
           {"cstar_norm", format_double(cnorm)},
           {"cstar_inverse_norm", format_double(cinv)},
           {"residual_weighted", format_double(inv.residual_weighted)},
           {"terms", inv.terms},
           {"measured_E_norm", format_double(measured)},
           {"bound_log", format_double(bound.log_value)},
           {"bound_tail_log", format_double(bound.tail_estimate)},
           {"bound_finite", bound.finite},
           {"log_ratio_measured_over_bound",
            format_double(std::log(measured) - bound.log_value)},
           {"constants", Json{{"p", wc.p},
                              {"B", format_double(wc.B)},
                              {"A", format_double(wc.A)},
                              {"C", format_double(wc.C)},
                              {"D", format_double(wc.D)},
                              {"theta", format_double(wc.theta)},
                              {"delta", format_double(wc.delta)}}}};
  std::cout << dump(out);
  write_file(g.out_dir, "invert.json", dump(out));
  if (g.emit == "csv")
    write_file(g.out_dir, "inverse_section.csv", section_to_csv(inv.inverse));
  else
    write_file(g.out_dir, "inverse_section.json", dump(section_to_json(inv.inverse)));
  const bool ok = inv.residual_weighted <= tol &&
                  std::log(measured) <= bound.log_value && bound.finite;
  return ok ? 0 : 2;
}

// Hofstadter-style band sweep: theta = p/q over all reduced fractions with
// q <= q_max, eigenvalues of the named section sampled on a coarse k-grid.
int cmd_spectrum_sweep(const GlobalOpts& g, const std::string& phi_flag, int q_max) {
  std::string csv = "theta_num,theta_den,value\n";
  for (std::int64_t q = 1; q <= q_max; ++q) {
    for (std::int64_t p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1 && !(p == 0 && q == 1)) continue;
      auto sys = TwistedSystem::nc_torus(GroupModel::zd(2), p, q);
      const CrossSection phi =
          named_section(phi_flag.empty() ? "harper" : phi_flag, sys);
      std::vector<double> values;
      const int grid = 24;
      for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
              nc_torus_symbol_matrix(phi, kTwoPi * i / grid, kTwoPi * j / grid),
              Eigen::EigenvaluesOnly);
          for (Eigen::Index t = 0; t < es.eigenvalues().size(); ++t)
            values.push_back(es.eigenvalues()(t));
        }
      std::sort(values.begin(), values.end());
      for (double v : values)
        csv += std::to_string(p) + "," + std::to_string(q) + "," + format_double(v) + "\n";
    }
  }
  write_file(g.out_dir, "spectrum_sweep.csv", csv);
  return 0;
}

int cmd_spectrum(const GlobalOpts& g, const Json& cfg, const std::string& group_flag,
                 const std::string& twist_flag, const std::string& phi_flag) {
  TwistedSystem::Ptr sys;
  if (!twist_flag.empty() && twist_flag.rfind("nc_torus", 0) == 0 && group_flag.empty()) {
    sys = parse_twist_shorthand(twist_flag, GroupModel::zd(2));
  } else {
    sys = build_system(cfg, group_flag, twist_flag);
  }
  const CrossSection phi = build_phi(cfg, phi_flag, sys);

  SpectrumEstimate sp;
  std::string oracle;
  if (sys->group().is_finite()) {
    sp = finite_group_spectrum(phi, 8192);
    oracle = "finite-exact";
  } else if (sys->trivial_twist() && sys->fiber_dim() == 1 &&
             sys->group().kind() == GroupModel::Kind::Zd) {
    sp = zd_symbol_spectrum(phi);
    oracle = "zd-symbol";
  } else if (sys->group().kind() == GroupModel::Kind::Zd &&
             sys->group().coord_count() == 2 && sys->fiber_dim() == 1) {
    sp = nc_torus_symbol_spectrum(phi);
    oracle = "torus-symbol";
  } else {
    // no closed-form oracle: self-adjoint sections get the compressed
    // operator's hull, a certified inner estimate widening with R
    CayleyBall ball(sys->group(), sys->group().standard_generators(), g.budget_elems);
    const int r = std::max(8, 4 * phi.support_radius(ball));
    sp = truncated_spectrum_hull(phi, r, g.budget_elems);
    oracle = "truncated-operator{R=" + std::to_string(r) + "}";
  }

  Json out{{"method", oracle}, {"tolerance", format_double(sp.tolerance)}};
  if (sp.method == SpectrumEstimate::Method::TruncatedOperator) {
    const NormReport op = opnorm_estimate(phi, sp.radius,
                                          OpNormOptions{300, 1e-12, g.budget_elems});
    out["opnorm"] = norm_report_json(op);
  }
  std::string csv;
  if (sp.has_hull) {
    out["hull"] = Json::array({format_double(sp.lo), format_double(sp.hi)});
    csv = "lo,hi\n" + format_double(sp.lo) + "," + format_double(sp.hi) + "\n";
  } else {
    Json vals = Json::array();
    csv = "index,re,im\n";
    int idx = 0;
    for (Complex v : sp.values) {
      vals.push_back(Json::array({format_double(v.real()), format_double(v.imag())}));
      csv += std::to_string(idx++) + "," + format_double(v.real()) + "," +
             format_double(v.imag()) + "\n";
    }
    out["values"] = vals;
  }
  std::cout << dump(out);
  write_file(g.out_dir, "spectrum.json", dump(out));
  if (g.emit == "csv") write_file(g.out_dir, "spectrum.csv", csv);
  return 0;
}

int cmd_weights(const GlobalOpts& g, const Json& cfg, const std::string& group_flag,
                const std::string& weight_flag, double p) {
  const GroupModel grp = !group_flag.empty() ? parse_group_shorthand(group_flag)
                         : cfg.contains("group") ? parse_group(cfg.at("group"))
                                                 : GroupModel::zd(1);
  const Weight nu = build_weight(cfg, weight_flag, grp, g.budget_elems);

  CayleyBall ball(grp, grp.standard_generators(), g.budget_elems);
  const std::vector<Point> pts = ball.ball(4);
  Rng rng(g.seed);
  double worst_sub = 0.0, worst_poly = 0.0, worst_sym = 0.0;
  const double c = nu.poly_constant_C();
  for (int it = 0; it < 1000; ++it) {
    const Point x = pts[rng.below(pts.size())];
    const Point y = pts[rng.below(pts.size())];
    const double nxy = nu(grp.multiply(x, y));
    worst_sub = std::max(worst_sub, nxy / (nu(x) * nu(y)));
    if (std::isfinite(c)) worst_poly = std::max(worst_poly, nxy / (c * (nu(x) + nu(y))));
    worst_sym = std::max(worst_sym, std::abs(nu(grp.inverse(x)) - nu(x)));
  }

  // shell count sized so the enumerated ball stays within the element budget
  const int d = std::max(1, grp.growth_order());
  const int n_max =
      grp.is_finite()
          ? 64
          : std::max(8, static_cast<int>(std::pow(
                            static_cast<double>(g.budget_elems) / 4.0, 1.0 / d)));
  const IntegrabilityReport ir = weight_integrability(nu, p, n_max);
  Json out{{"weight", nu.describe()},
           {"poly_constant_C", format_double(c)},
           {"axioms", Json{{"submultiplicative_worst", format_double(worst_sub)},
                           {"polynomial_worst", format_double(worst_poly)},
                           {"symmetry_worst", format_double(worst_sym)}}},
           {"integrability", Json{{"p", p},
                                  {"partial_sum", format_double(ir.partial_sum)},
                                  {"tail_estimate", format_double(ir.tail_estimate)},
                                  {"converged", ir.converged},
                                  {"diverged", ir.diverged},
                                  {"fitted_decay", format_double(ir.fitted_decay)},
                                  {"shells", ir.shells_used}}}};
  std::cout << dump(out);
  write_file(g.out_dir, "weights.json", dump(out));
  const bool ok = worst_sub <= 1 + 1e-9 &&
                  (!std::isfinite(c) || worst_poly <= 1 + 1e-9) && worst_sym <= 1e-9;
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerics for weighted twisted convolution algebras"};
  app.require_subcommand(1);
  // global flags may follow the subcommand, per the documented invocations
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--budget-elems", g.budget_elems, "ball/support element budget");
  app.add_option("--out-dir", g.out_dir, "artifact output directory");
  app.add_option("--emit", g.emit, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config_path, "experiment JSON config file");

  std::string suite = "core";
  auto* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--suite", suite, "core or a module name");

  std::string group_flag, twist_flag, phi_flag, weight_flag;
  std::string function_flag = "gaussian:0,1";
  double tmax = 64.0, tol = 1e-4, p = 2.0;

  auto* growth = app.add_subcommand("growth", "one-parameter group growth profile");
  growth->add_option("--group", group_flag, "group shorthand, e.g. Zd:1");
  growth->add_option("--twist", twist_flag, "twist shorthand");
  growth->add_option("--phi", phi_flag, "section name or JSON file");
  growth->add_option("--weight", weight_flag, "weight shorthand");
  growth->add_option("--tmax", tmax, "largest t in the grid");

  auto* calculus = app.add_subcommand("calculus", "smooth functional calculus");
  calculus->add_option("--group", group_flag);
  calculus->add_option("--twist", twist_flag);
  calculus->add_option("--phi", phi_flag);
  calculus->add_option("--function", function_flag, "family:args, e.g. gaussian:0,1");
  calculus->add_option("--tol", tol, "target error budget");

  auto* invert = app.add_subcommand("invert", "norm-controlled Neumann inversion");
  invert->add_option("--group", group_flag);
  invert->add_option("--twist", twist_flag);
  invert->add_option("--phi", phi_flag);
  invert->add_option("--weight", weight_flag);
  invert->add_option("--p", p, "integrability exponent");
  invert->add_option("--tol", tol, "residual tolerance");

  int sweep_q = 0;
  auto* spectrum = app.add_subcommand("spectrum", "spectral oracles");
  spectrum->add_option("--group", group_flag);
  spectrum->add_option("--twist", twist_flag);
  spectrum->add_option("--phi", phi_flag);
  spectrum->add_option("--sweep", sweep_q,
                       "emit a theta = p/q band table for all q <= this cap");

  auto* weights = app.add_subcommand("weights", "weight axioms and integrability");
  weights->add_option("--group", group_flag);
  weights->add_option("--weight", weight_flag);
  weights->add_option("--p", p, "integrability exponent");

  auto* run = app.add_subcommand("run", "dispatch on the config file's op field");

  CLI11_PARSE(app, argc, argv);

  try {
    const Json cfg = load_config(g);
    if (run->parsed()) {
      const ExperimentConfig ec = ExperimentConfig::from_json(cfg);
      GlobalOpts gr = g;
      if (cfg.contains("seed")) gr.seed = ec.seed;
      if (cfg.contains("budget_elems")) gr.budget_elems = ec.budget_elems;
      if (cfg.contains("out_dir")) gr.out_dir = ec.out_dir;
      if (cfg.contains("emit")) gr.emit = ec.emit;
      if (ec.op == "verify") return cmd_verify(gr, cfg.value("suite", std::string("core")));
      if (ec.op == "growth")
        return cmd_growth(gr, cfg, "", "", "", "", cfg.value("tmax", 64.0));
      if (ec.op == "calculus")
        return cmd_calculus(gr, cfg, "", "", "",
                            cfg.value("function", std::string("gaussian:0,1")), ec.tol);
      if (ec.op == "invert") return cmd_invert(gr, cfg, "", "", "", "", ec.p, ec.tol);
      if (ec.op == "spectrum") return cmd_spectrum(gr, cfg, "", "", "");
      if (ec.op == "weights") return cmd_weights(gr, cfg, "", "", ec.p);
      throw ConfigError("unknown op in config: " + ec.op);
    }
    if (verify->parsed()) return cmd_verify(g, suite);
    if (growth->parsed())
      return cmd_growth(g, cfg, group_flag, twist_flag, phi_flag, weight_flag, tmax);
    if (calculus->parsed())
      return cmd_calculus(g, cfg, group_flag, twist_flag, phi_flag, function_flag, tol);
    if (invert->parsed())
      return cmd_invert(g, cfg, group_flag, twist_flag, phi_flag, weight_flag, p, tol);
    if (spectrum->parsed()) {
      if (sweep_q > 0) return cmd_spectrum_sweep(g, phi_flag, sweep_q);
      return cmd_spectrum(g, cfg, group_flag, twist_flag, phi_flag);
    }
    if (weights->parsed()) return cmd_weights(g, cfg, group_flag, weight_flag, p);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const InvalidSpec& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const Diverged& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ToleranceNotMet& e) {
    std::cerr << "tolerance not met: " << e.what() << "\n";
    return 2;
  } catch (const NotInvertible& e) {
    std::cerr << "not invertible: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
