#include "fellband/config.hpp"

#include <cmath>
#include <sstream>

namespace fellband {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::int64_t to_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw ConfigError("trailing characters in integer: " + s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("not an integer: " + s);
  }
}

double to_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("trailing characters in number: " + s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("not a number: " + s);
  }
}

}  // namespace

Rational parse_rational(const std::string& text) {
  Rational r;
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    r.num = to_int(text.substr(0, slash));
    r.den = to_int(text.substr(slash + 1));
    if (r.den <= 0) throw ConfigError("rational denominator must be positive: " + text);
    r.exact = true;
  } else {
    r.real = to_double(text);
    r.exact = false;
    // decimals that happen to be small-denominator rationals stay exact
    for (std::int64_t q = 1; q <= 64; ++q) {
      const double scaled = r.real * static_cast<double>(q);
      if (std::abs(scaled - std::llround(scaled)) < 1e-12) {
        r.num = std::llround(scaled);
        r.den = q;
        r.exact = true;
        break;
      }
    }
  }
  return r;
}

Rational parse_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number()) {
    Rational r;
    r.real = j.get<double>();
    r.exact = false;
    for (std::int64_t q = 1; q <= 64; ++q) {
      const double scaled = r.real * static_cast<double>(q);
      if (std::abs(scaled - std::llround(scaled)) < 1e-12) {
        r.num = std::llround(scaled);
        r.den = q;
        r.exact = true;
        break;
      }
    }
    return r;
  }
  throw ConfigError("rational must be a string or number");
}

GroupModel parse_group(const Json& j) {
  if (j.is_string()) return parse_group_shorthand(j.get<std::string>());
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("group spec needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  GroupModel g = GroupModel::zd(1);
  if (kind == "Zd") {
    g = GroupModel::zd(j.value("d", 1));
  } else if (kind == "Heis3") {
    g = GroupModel::heis3();
  } else if (kind == "Cyclic") {
    g = GroupModel::cyclic(j.value("m", 2));
  } else if (kind == "DirectSumZ2") {
    g = GroupModel::direct_sum_z2(j.value("bits", 8));
  } else if (kind == "Product") {
    g = GroupModel::product(parse_group(j.at("left")), parse_group(j.at("right")));
  } else {
    throw ConfigError("unknown group kind: " + kind);
  }
  if (j.value("normalized_measure", false)) g.set_normalized_measure(true);
  return g;
}

GroupModel parse_group_shorthand(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string& kind = parts[0];
  if (kind == "Zd") return GroupModel::zd(parts.size() > 1 ? static_cast<int>(to_int(parts[1])) : 1);
  if (kind == "Heis3") return GroupModel::heis3();
  if (kind == "Cyclic") return GroupModel::cyclic(parts.size() > 1 ? to_int(parts[1]) : 2);
  if (kind == "DirectSumZ2")
    return GroupModel::direct_sum_z2(parts.size() > 1 ? static_cast<int>(to_int(parts[1])) : 8);
  throw ConfigError("unknown group shorthand: " + text);
}

TwistedSystem::Ptr parse_twist(const Json& j, GroupModel group) {
  if (j.is_null()) return TwistedSystem::trivial(std::move(group));
  if (j.is_string()) return parse_twist_shorthand(j.get<std::string>(), std::move(group));
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("twist spec needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return TwistedSystem::trivial(std::move(group), j.value("k", 1));
  if (kind == "nc_torus") {
    const Rational theta = parse_rational(j.at("theta"));
    if (theta.exact)
      return TwistedSystem::nc_torus(std::move(group), theta.num, theta.den);
    return TwistedSystem::nc_torus_real(std::move(group), theta.real);
  }
  if (kind == "carry") {
    const double beta = j.value("beta", 0.5);
    return TwistedSystem::inner_cyclic_power(std::move(group),
                                             Fiber::scalar(std::polar(1.0, kTwoPi * beta)));
  }
  if (kind == "inner_rot") {
    const double a = j.value("angle", 0.7);
    const double c = std::cos(a), s = std::sin(a);
    return TwistedSystem::inner_cyclic_power(
        std::move(group),
        Fiber::matrix(2, {Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0)}));
  }
  if (kind == "pauli") {
    return TwistedSystem::inner_cyclic_power(
        std::move(group),
        Fiber::matrix(2, {Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0)}));
  }
  if (kind == "perm_diag") return TwistedSystem::perm_diag_translation(std::move(group));
  throw ConfigError("unknown twist kind: " + kind);
}

TwistedSystem::Ptr parse_twist_shorthand(const std::string& text, GroupModel group) {
  const auto parts = split(text, ':');
  Json j;
  if (parts[0] == "none") {
    j = Json{{"kind", "none"}};
    if (parts.size() > 1) j["k"] = to_int(parts[1]);
  } else if (parts[0] == "nc_torus") {
    if (parts.size() < 2) throw ConfigError("nc_torus shorthand needs theta");
    j = Json{{"kind", "nc_torus"}, {"theta", parts[1]}};
  } else if (parts[0] == "carry") {
    j = Json{{"kind", "carry"}, {"beta", parts.size() > 1 ? to_double(parts[1]) : 0.5}};
  } else if (parts[0] == "inner_rot") {
    j = Json{{"kind", "inner_rot"}, {"angle", parts.size() > 1 ? to_double(parts[1]) : 0.7}};
  } else if (parts[0] == "pauli") {
    j = Json{{"kind", "pauli"}};
  } else if (parts[0] == "perm_diag") {
    j = Json{{"kind", "perm_diag"}};
  } else {
    throw ConfigError("unknown twist shorthand: " + text);
  }
  return parse_twist(j, std::move(group));
}

Weight parse_weight(const Json& j, std::shared_ptr<CayleyBall> ball) {
  if (j.is_null()) {
    WeightSpec one;
    return make_weight(ball, one);
  }
  if (j.is_string()) return parse_weight_shorthand(j.get<std::string>(), std::move(ball));
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("weight spec needs a kind");
  const std::string kind = j.at("kind").get<std::string>();
  WeightSpec spec;
  if (kind == "one") {
    spec.kind = WeightSpec::Kind::One;
  } else if (kind == "word") {
    spec.kind = WeightSpec::Kind::WordLength;
  } else if (kind == "word_power") {
    spec.kind = WeightSpec::Kind::PowerOfWordLength;
    spec.s = j.value("s", 1.0);
  } else if (kind == "locally_finite") {
    spec.kind = WeightSpec::Kind::LocallyFinite;
    for (const auto& m : j.at("m")) spec.chain_m.push_back(m.get<double>());
  } else {
    throw ConfigError("unknown weight kind: " + kind);
  }
  return make_weight(std::move(ball), spec);
}

Weight parse_weight_shorthand(const std::string& text, std::shared_ptr<CayleyBall> ball) {
  const auto parts = split(text, ':');
  Json j;
  if (parts[0] == "one" || parts[0] == "word") {
    j = Json{{"kind", parts[0]}};
  } else if (parts[0] == "word_power") {
    j = Json{{"kind", "word_power"}, {"s", parts.size() > 1 ? to_double(parts[1]) : 1.0}};
  } else if (parts[0] == "locally_finite") {
    Json m = Json::array();
    if (parts.size() > 1)
      for (const std::string& v : split(parts[1], ',')) m.push_back(to_double(v));
    j = Json{{"kind", "locally_finite"}, {"m", m}};
  } else {
    throw ConfigError("unknown weight shorthand: " + text);
  }
  return parse_weight(j, std::move(ball));
}

CrossSection named_section(const std::string& name, TwistedSystem::Ptr sys) {
  const GroupModel& g = sys->group();
  if (name == "unit") return CrossSection::unit(sys);
  if (name == "laplacian" || name == "harper") {
    CrossSection s(sys);
    for (const Point& x : g.standard_generators().elements)
      if (!(x == g.identity())) s.accumulate(x, Fiber::identity(sys->fiber_dim()));
    return s;
  }
  if (name == "shifted_laplacian") {
    // 2*unit - laplacian/2: strictly positive symbol on Z^d
    CrossSection s = CrossSection::unit(sys);
    s *= Complex(2, 0);
    CrossSection lap = named_section("laplacian", sys);
    lap *= Complex(-0.5, 0);
    s += lap;
    return s;
  }
  throw ConfigError("unknown section name: " + name);
}

CrossSection parse_section(const Json& j, TwistedSystem::Ptr sys) {
  if (j.is_string()) return named_section(j.get<std::string>(), std::move(sys));
  if (j.is_object() && j.contains("name"))
    return named_section(j.at("name").get<std::string>(), std::move(sys));
  if (j.is_object() && j.contains("random")) {
    const Json& r = j.at("random");
    Rng rng(r.value("seed", 7ULL));
    const int radius = r.value("radius", 2);
    const int points = r.value("points", 6);
    const bool sa = r.value("selfadjoint", false);
    CayleyBall ball(sys->group(), sys->group().standard_generators());
    const std::vector<Point> pts = ball.ball(radius);
    CrossSection s(sys);
    for (int i = 0; i < points; ++i) {
      const Point& x = pts[rng.below(pts.size())];
      Fiber f = Fiber::zero(sys->fiber_dim());
      for (int a = 0; a < sys->fiber_dim(); ++a)
        for (int b = 0; b < sys->fiber_dim(); ++b) f.set(a, b, rng.complex_gaussian());
      s.accumulate(x, f);
    }
    s.prune();
    if (sa) {
      CrossSection adj = involution(s);
      s += adj;
      s *= Complex(0.5, 0);
      s.prune();
    }
    return s;
  }
  if (j.is_object() && j.contains("points")) {
    CrossSection s(sys);
    const int k = sys->fiber_dim();
    for (const Json& entry : j.at("points")) {
      Point x;
      for (const auto& c : entry.at("point")) x.push(c.get<std::int64_t>());
      if (x.size() != sys->group().coord_count())
        throw ConfigError("point coordinate count mismatch");
      const Json& fib = entry.at("fiber");
      Fiber f = Fiber::zero(k);
      if (static_cast<int>(fib.size()) != k) throw ConfigError("fiber row count mismatch");
      for (int i = 0; i < k; ++i) {
        const Json& row = fib.at(static_cast<std::size_t>(i));
        if (static_cast<int>(row.size()) != k)
          throw ConfigError("fiber column count mismatch");
        for (int jj = 0; jj < k; ++jj) {
          const Json& z = row.at(static_cast<std::size_t>(jj));
          f.set(i, jj, Complex(z.at(0).get<double>(), z.at(1).get<double>()));
        }
      }
      s.accumulate(x, f);
    }
    return s;
  }
  throw ConfigError("section spec must be a name, literal, or recipe");
}

Json section_to_json(const CrossSection& phi) {
  Json points = Json::array();
  const int k = phi.fiber_dim();
  for (const auto& [x, a] : phi.entries()) {
    Json coords = Json::array();
    for (int i = 0; i < x.size(); ++i) coords.push_back(x[i]);
    Json fiber = Json::array();
    for (int i = 0; i < k; ++i) {
      Json row = Json::array();
      for (int j = 0; j < k; ++j)
        row.push_back(Json::array({a.at(i, j).real(), a.at(i, j).imag()}));
      fiber.push_back(row);
    }
    points.push_back(Json{{"point", coords}, {"fiber", fiber}});
  }
  return Json{{"points", points}};
}

std::string section_to_csv(const CrossSection& phi) {
  std::ostringstream out;
  const int d = phi.group().coord_count();
  for (int i = 0; i < d; ++i) out << "x" << i << ",";
  out << "i,j,re,im\n";
  const int k = phi.fiber_dim();
  for (const auto& [x, a] : phi.entries()) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const Complex z = a.at(i, j);
        if (z == Complex(0, 0) && k > 1) continue;
        for (int c = 0; c < d; ++c) out << x[c] << ",";
        out << i << "," << j << "," << format_double(z.real()) << ","
            << format_double(z.imag()) << "\n";
      }
  }
  return out.str();
}

Json norm_report_json(const NormReport& report) {
  return Json{{"value", format_double(report.value)},
              {"method", report.method_tag()},
              {"lower_bound", report.lower_bound},
              {"error_budget", format_double(report.error_budget)},
              {"last_increment", format_double(report.last_increment)}};
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  ExperimentConfig cfg;
  if (j.contains("group")) cfg.group = parse_group(j.at("group"));
  cfg.system = parse_twist(j.contains("twist") ? j.at("twist") : Json(), cfg.group);
  if (j.contains("weight")) cfg.weight_json = j.at("weight");
  if (j.contains("phi")) cfg.phi_json = j.at("phi");
  cfg.op = j.value("op", "verify");
  cfg.tol = j.value("tol", 1e-6);
  cfg.p = j.value("p", 2.0);
  cfg.seed = j.value("seed", 7ULL);
  cfg.budget_elems = j.value("budget_elems", CayleyBall::kDefaultBudget);
  cfg.out_dir = j.value("out_dir", ".");
  cfg.emit = j.value("emit", "json");
  cfg.extra = j;
  return cfg;
}

}  // namespace fellband
