#include "lbcalc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "lbcalc/acceptance.hpp"
#include "lbcalc/dirichlet.hpp"
#include "lbcalc/error.hpp"
#include "lbcalc/estimate.hpp"
#include "lbcalc/germ.hpp"
#include "lbcalc/json_io.hpp"
#include "lbcalc/lie.hpp"
#include "lbcalc/limit.hpp"

namespace lbcalc::cli {

namespace {

using io::json;

struct VerbSpec {
  std::string name;
  std::string help;
  std::vector<std::string> flags;
  std::vector<std::string> required;
  std::size_t min_inputs;
  std::size_t max_inputs;
};

const std::vector<VerbSpec>& verb_specs() {
  static const std::vector<VerbSpec> specs = {
      {"bch", "BCH product of two matrices or two Dirichlet series", {"--order", "--s", "--z"}, {"--order"}, 2, 2},
      {"dirichlet-bracket", "convolution bracket of two series", {"--s"}, {}, 2, 2},
      {"dirichlet-norm", "half-plane norm of a series", {"--s"}, {"--s"}, 1, 1},
      {"dirichlet-eval", "value, exponential and leading coefficient at z", {"--z"}, {"--z"}, 1, 1},
      {"germ-compose", "composition of two germs, and its derivative given two directions", {}, {}, 2, 4},
      {"germ-invert", "certified inverse of a germ", {"--order"}, {}, 1, 1},
      {"estimate-verify", "bounded-series inequality for a family of germs", {"--r", "--degree", "--samples"},
       {"--r"}, 1, 64},
      {"limit-certify", "continuity certificate from a map spec or step sups",
       {"--R", "--r", "--epsilon"}, {"--R", "--r", "--epsilon"}, 1, 1},
      {"limit-verify", "sample a certificate", {"--samples"}, {}, 1, 1},
      {"modulus-dirichlet", "regularity modulus on the Dirichlet scale", {"--s", "--epsilon", "--u"},
       {"--s", "--epsilon", "--u"}, 0, 1},
      {"modulus-germ", "regularity modulus on the germ scale", {"--n", "--epsilon", "--l"},
       {"--n", "--epsilon", "--l"}, 0, 1},
      {"suite", "run the acceptance battery", {}, {}, 0, 0},
  };
  return specs;
}

const VerbSpec& spec_for(const std::string& verb) {
  for (const auto& s : verb_specs()) {
    if (s.name == verb) return s;
  }
  throw UsageError("unknown verb '" + verb + "'");
}

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw UsageError("invalid seed '" + text + "' from " + origin);
  }
  return value;
}

Complex parse_complex(const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      throw UsageError("invalid value '" + text + "' for --z (expected re or re,im)");
    }
    if (used != piece.size() || !std::isfinite(v)) {
      throw UsageError("invalid value '" + text + "' for --z (expected re or re,im)");
    }
    parts.push_back(v);
  }
  if (parts.empty() || parts.size() > 2) throw UsageError("invalid value '" + text + "' for --z (expected re or re,im)");
  return {parts[0], parts.size() == 2 ? parts[1] : 0.0};
}

// --- report helpers ------------------------------------------------------

json base_report(const Command& c, std::vector<std::string> operations) {
  return {{"verb", c.verb}, {"operations", std::move(operations)}};
}

double required_real(const std::optional<double>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required flag ") + flag);
  return *v;
}

int integral(double v, const char* flag) {
  if (std::floor(v) != v || std::abs(v) > 1e6) throw UsageError(std::string(flag) + " must be an integer here");
  return static_cast<int>(v);
}

double max_coefficient(const germ::Germ& g) {
  double out = 0.0;
  for (std::size_t a = 0; a < g.anchors().size(); ++a) {
    for (const auto& s : g.at(a)) {
      for (Complex c : s.coefficients()) out = std::max(out, std::abs(c));
    }
  }
  return out;
}

// --- verbs ---------------------------------------------------------------

int run_bch(const Command& c, std::ostream& out) {
  const json a = io::read_json_file(c.inputs[0]);
  const json b = io::read_json_file(c.inputs[1]);
  const int order = *c.order;
  if (a.contains("terms") != b.contains("terms")) throw ValidationError("bch inputs must both be matrices or both series");
  if (a.contains("terms")) {
    const auto x = io::series_from_json(a);
    const auto y = io::series_from_json(b);
    const dirichlet::HalfPlane s(required_real(c.s, "--s"));
    const auto product = dirichlet::bch_series(x, y, s, order);
    const Complex z = c.z ? parse_complex(*c.z) : Complex(s.s(), 0.0);
    if (z.real() < s.s()) throw DomainError("--z must lie in the half plane Re z >= s");
    const Matrix lhs = dirichlet::exp_pointwise(product, z);
    const Matrix rhs = dirichlet::exp_pointwise(x, z) * dirichlet::exp_pointwise(y, z);
    json report = base_report(c, {"norm_s", "bch_series", "bracket", "evaluate", "exp_pointwise"});
    report["result"] = io::to_json(product);
    report["norms"] = {{"x", dirichlet::norm_s(x, s)},
                       {"y", dirichlet::norm_s(y, s)},
                       {"result", dirichlet::norm_s(product, s)},
                       {"bound", lie::bch_input_bound()}};
    report["pointwise"] = {{"z", io::to_json(z)}, {"deviation", norm_one(lhs - rhs)}};
    out << report.dump(2) << '\n';
    return kOk;
  }
  const Matrix x = io::matrix_from_json(a);
  const Matrix y = io::matrix_from_json(b);
  const Matrix product = lie::bch(x, y, order);
  const Matrix oracle = lie::mat_log(lie::mat_exp(x) * lie::mat_exp(y));
  json report = base_report(c, {"compatible_norm", "bch", "mat_exp", "mat_log"});
  report["result"] = io::to_json(product);
  report["norms"] = {{"x", lie::compatible_norm(x)},
                     {"y", lie::compatible_norm(y)},
                     {"sum", lie::compatible_norm(x) + lie::compatible_norm(y)},
                     {"bound", lie::bch_input_bound()},
                     {"result", lie::compatible_norm(product)},
                     {"result_bound", lie::bch_output_bound()}};
  report["oracle_deviation"] = norm_one(product - oracle);
  out << report.dump(2) << '\n';
  return kOk;
}

int run_dirichlet_bracket(const Command& c, std::ostream& out) {
  const auto x = io::series_from_json(io::read_json_file(c.inputs[0]));
  const auto y = io::series_from_json(io::read_json_file(c.inputs[1]));
  const auto result = dirichlet::bracket(x, y);
  json report = base_report(c, {"bracket"});
  report["result"] = io::to_json(result);
  if (c.s) {
    const dirichlet::HalfPlane s(*c.s);
    report["operations"].push_back("norm_s");
    report["norms"] = {{"s", s.s()},
                       {"x", dirichlet::norm_s(x, s)},
                       {"y", dirichlet::norm_s(y, s)},
                       {"result", dirichlet::norm_s(result, s)}};
  }
  out << report.dump(2) << '\n';
  return kOk;
}

int run_dirichlet_norm(const Command& c, std::ostream& out) {
  const auto x = io::series_from_json(io::read_json_file(c.inputs[0]));
  const dirichlet::HalfPlane s(*c.s);
  json report = base_report(c, {"norm_s"});
  report["s"] = s.s();
  report["norm"] = dirichlet::norm_s(x, s);
  out << report.dump(2) << '\n';
  return kOk;
}

int run_dirichlet_eval(const Command& c, std::ostream& out) {
  const auto x = io::series_from_json(io::read_json_file(c.inputs[0]));
  const Complex z = parse_complex(*c.z);
  json report = base_report(c, {"evaluate", "exp_pointwise"});
  report["z"] = io::to_json(z);
  report["value"] = io::to_json(dirichlet::evaluate(x, z));
  report["exp"] = io::to_json(dirichlet::exp_pointwise(x, z));
  if (z.real() >= 2.0) {
    const auto lead = dirichlet::leading_coefficient(x, z.real());
    const Matrix a1 = x.coefficient(1);
    report["operations"].push_back("leading_coefficient");
    report["leading"] = {{"probe", z.real()},
                         {"value", io::to_json(lead.value)},
                         {"tail_bound", lead.tail_bound},
                         {"stored", io::to_json(a1)},
                         {"deviation", lie::compatible_norm(lead.value - a1)}};
  }
  out << report.dump(2) << '\n';
  return kOk;
}

int run_germ_compose(const Command& c, std::ostream& out) {
  if (c.inputs.size() == 3) throw UsageError("germ-compose takes two germs, or two germs and two directions");
  const auto g1 = io::germ_from_json(io::read_json_file(c.inputs[0]));
  const auto g2 = io::germ_from_json(io::read_json_file(c.inputs[1]));
  const auto result = germ::compose(g1, g2);
  json report = base_report(c, {"compose", "sup_norm", "d_norm"});
  report["result"] = io::to_json(result);
  report["norms"] = {{"sup", germ::sup_norm(result)}, {"d", germ::d_norm(result)}};
  report["containment"] = {{"n", g1.index()}, {"l", g2.index()}, {"inner_d", germ::d_norm(g2)},
                           {"static_index", germ::composition_index(g1.index(), 1)}};
  if (c.inputs.size() == 4) {
    const auto d1 = io::germ_from_json(io::read_json_file(c.inputs[2]));
    const auto d2 = io::germ_from_json(io::read_json_file(c.inputs[3]));
    report["operations"].push_back("compose_derivative");
    report["derivative"] = io::to_json(germ::compose_derivative(g1, g2, d1, d2));
  }
  out << report.dump(2) << '\n';
  return kOk;
}

int run_germ_invert(const Command& c, std::ostream& out) {
  const auto g = io::germ_from_json(io::read_json_file(c.inputs[0]));
  const auto inv = germ::invert(g);
  const auto res = germ::residual(g, inv);
  json report = base_report(c, {"invert", "residual", "sup_norm", "d_norm", "derivative_bound"});
  report["result"] = io::to_json(inv);
  report["input"] = {{"index", g.index()}, {"sup", germ::sup_norm(g)}, {"d", germ::d_norm(g)}};
  report["inverse"] = {{"index", inv.index()}, {"sup", germ::sup_norm(inv)}, {"sup_bound", 1.0 / (6.0 * g.index())}};
  report["residual_max"] = max_coefficient(res);
  const int top = c.order.value_or(3);
  if (top < 0) throw UsageError("--order must be nonnegative for germ-invert");
  json bounds = json::array();
  for (int l = 0; l <= top; ++l) bounds.push_back({{"l", l}, {"bound", germ::derivative_bound(g, l)}});
  report["derivative_bounds"] = bounds;
  report["checks"] = {"d_norm(input) <= 1/2", "residual vanishes through the truncation degree",
                      "sup_norm(inverse) <= 1/(6n)"};
  out << report.dump(2) << '\n';
  return kOk;
}

int run_estimate_verify(const Command& c, std::ostream& out) {
  std::vector<estimate::AnalyticSample> known;
  for (const auto& path : c.inputs) {
    const auto g = io::germ_from_json(io::read_json_file(path));
    for (auto& s : estimate::samples_from_germ(g)) known.push_back(std::move(s));
  }
  estimate::EstimateOptions options;
  options.seed = c.seed;
  if (c.degree) options.degree = *c.degree;
  if (c.samples) options.nodes = *c.samples;
  const double r = *c.r;
  const auto report_known = estimate::verify_bounded_series(known, r, options);
  auto blind = known;
  for (auto& s : blind) s.degree_sups.reset();
  const auto report_blind = estimate::verify_bounded_series(blind, r, options);

  json report = base_report(c, {"verify_bounded_series", "cauchy_directional_coefficient", "polarization_factor",
                                "sup_norm"});
  report.update(io::to_json(report_known));
  report["contour"] = io::to_json(report_blind);
  json factors = json::array();
  for (std::size_t k = 0; k < report_known.degrees.size(); ++k) {
    const auto p = estimate::polarization_factor(static_cast<int>(k));
    factors.push_back({{"k", k}, {"factor", p.factor}, {"bound", p.bound}});
  }
  report["polarization"] = factors;
  const bool verdict = report_known.verdict && report_blind.verdict;
  report["verdict"] = verdict;
  out << report.dump(2) << '\n';
  return verdict ? kOk : kVerdictFalse;
}

struct LimitSetup {
  limit::DirectLimit space;
  limit::LimitMap map;
};

LimitSetup limit_from_spec(const json& limit_spec, const json& map_spec) {
  const std::string kind = limit_spec.value("kind", "");
  LimitSetup setup{[&] {
                     if (kind == "matrix") return limit::matrix_limit();
                     if (kind == "dirichlet") {
                       return limit::dirichlet_limit(limit_spec.value("s0", 0.0),
                                                     limit_spec.value("dim", std::size_t{2}));
                     }
                     if (kind == "germ") {
                       return limit::germ_limit(limit_spec.value("dim", std::size_t{1}),
                                                limit_spec.value("degree", germ::kDefaultDegree));
                     }
                     throw ValidationError("unknown limit kind '" + kind + "'");
                   }(),
                   limit::zero_map(limit::ElementKind::matrix)};
  const std::string map_kind = map_spec.value("kind", "");
  if (map_kind == "zero") {
    setup.map = limit::zero_map(setup.space.kind);
  } else if (map_kind == "matrix-polynomial") {
    std::vector<Complex> coeffs;
    for (const auto& v : map_spec.at("coeffs")) coeffs.push_back(io::complex_from_json(v));
    setup.map = limit::matrix_polynomial_map(std::move(coeffs), map_spec.value("weighted", false));
  } else if (map_kind == "dirichlet-bracket") {
    setup.map = limit::dirichlet_bracket_map(io::series_from_json(map_spec.at("gamma0")),
                                             limit_spec.value("s0", 0.0), map_spec.value("s_out", 0.0));
  } else if (map_kind == "germ-scaling") {
    setup.map = limit::germ_scaling_map(io::complex_from_json(map_spec.at("c")), map_spec.value("out_index", 1));
  } else {
    throw ValidationError("unknown map kind '" + map_kind + "'");
  }
  return setup;
}

int run_limit_certify(const Command& c, std::ostream& out) {
  const json spec = io::read_json_file(c.inputs[0]);
  const double big_r = *c.R;
  const double r = *c.r;
  std::vector<double> sups;
  json report = base_report(c, {"build_certificate"});
  if (spec.contains("step_sups")) {
    for (const auto& v : spec.at("step_sups")) {
      if (!v.is_number()) throw ValidationError("step_sups must be numbers");
      sups.push_back(v.get<double>());
    }
  } else {
    const int steps = spec.value("steps", 3);
    const auto setup = limit_from_spec(spec.at("limit"), spec.at("map"));
    sups = limit::step_sups(setup.map, steps, big_r, r);
    report["limit"] = spec.at("limit");
    report["map"] = spec.at("map");
  }
  const auto cert = limit::build_certificate(std::move(sups), big_r, r, *c.epsilon);
  report.update(io::to_json(cert));
  out << report.dump(2) << '\n';
  return kOk;
}

int run_limit_verify(const Command& c, std::ostream& out) {
  const json doc = io::read_json_file(c.inputs[0]);
  const auto cert = io::certificate_from_json(doc);
  if (!doc.contains("limit") || !doc.contains("map")) {
    throw ValidationError("certificate carries no limit/map description to sample");
  }
  const auto setup = limit_from_spec(doc.at("limit"), doc.at("map"));
  const int samples = c.samples.value_or(1000);
  if (samples < 1) throw UsageError("--samples must be positive");
  const auto result =
      limit::verify_certificate(setup.space, setup.map, cert, static_cast<std::size_t>(samples), c.seed);
  json report = base_report(c, {"verify_certificate", "neighborhood_contains"});
  report.update(io::to_json(result));
  out << report.dump(2) << '\n';
  return result.verdict ? kOk : kVerdictFalse;
}

int run_modulus_dirichlet(const Command& c, std::ostream& out) {
  const auto modulus = limit::dirichlet_regularity_modulus(integral(*c.s, "--s"), *c.epsilon, *c.u);
  json report = base_report(c, {"dirichlet_regularity_modulus"});
  report.update(io::to_json(modulus));
  bool holds = true;
  if (!c.inputs.empty()) {
    const auto check = limit::check_dirichlet_modulus(modulus, io::series_from_json(io::read_json_file(c.inputs[0])));
    report["check"] = io::to_json(check);
    holds = check.holds;
  }
  out << report.dump(2) << '\n';
  return holds ? kOk : kVerdictFalse;
}

int run_modulus_germ(const Command& c, std::ostream& out) {
  const int n = *c.n;
  const auto modulus = limit::germ_regularity_modulus(n, *c.epsilon, *c.l, limit::DegreeSups::unit_ball_budget(n));
  json report = base_report(c, {"germ_regularity_modulus"});
  report.update(io::to_json(modulus));
  report["chain_at_delta"] = limit::germ_chain_bound(modulus, modulus.delta);
  bool holds = true;
  if (!c.inputs.empty()) {
    const auto check = limit::check_germ_modulus(modulus, io::germ_from_json(io::read_json_file(c.inputs[0])));
    report["check"] = io::to_json(check);
    holds = check.holds;
  }
  out << report.dump(2) << '\n';
  return holds ? kOk : kVerdictFalse;
}

int run_suite(const Command& c, std::ostream& out) {
  acceptance::SuiteOptions options;
  options.seed = c.seed;
  const auto results = acceptance::run_all(options);
  json criteria = json::array();
  bool all = true;
  for (const auto& r : results) {
    criteria.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  json report = base_report(c, {});
  report["seed"] = c.seed;
  report["criteria"] = criteria;
  report["passed"] = all;
  out << report.dump(2) << '\n';
  return all ? kOk : kVerdictFalse;
}

}  // namespace

const std::vector<std::string>& verbs() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : verb_specs()) out.push_back(s.name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names = {
      "compatible_norm", "mat_exp", "mat_log", "bch",
      "norm_s", "bracket", "evaluate", "bch_series", "exp_pointwise", "leading_coefficient",
      "sup_norm", "d_norm", "compose", "compose_derivative", "invert", "residual", "derivative_bound",
      "cauchy_directional_coefficient", "polarization_factor", "verify_bounded_series",
      "neighborhood_contains", "build_certificate", "verify_certificate", "dirichlet_regularity_modulus",
      "germ_regularity_modulus"};
  return names;
}

Command parse(const std::vector<std::string>& args) {
  const char* env = std::getenv("LBCALC_SEED");
  return parse(args, env ? std::optional<std::string>(env) : std::nullopt);
}

Command parse(const std::vector<std::string>& args, const std::optional<std::string>& env_seed) {
  if (args.empty()) throw UsageError("missing verb; expected one of the verbs listed by --help");

  if (args.front().empty() || args.front().front() != '-') {
    const auto& names = verbs();
    if (std::find(names.begin(), names.end(), args.front()) == names.end()) {
      throw UsageError("unknown verb '" + args.front() + "'");
    }
  }

  CLI::App app{"Desk-scale calculus on Banach Lie algebras, Dirichlet series and analytic germs", "lbcalc"};
  app.require_subcommand(1);

  struct Values {
    std::vector<std::string> inputs;
    long long order = 0, samples = 0, degree = 0, u = 0, n = 0, l = 0;
    double s = 0, epsilon = 0, r = 0, big_r = 0;
    std::string z;
    std::uint64_t seed = 0;
  };
  std::map<std::string, Values> values;
  std::map<std::string, CLI::App*> subs;

  for (const auto& spec : verb_specs()) {
    Values& v = values[spec.name];
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    subs[spec.name] = sub;
    auto has = [&](const char* flag) {
      return std::find(spec.flags.begin(), spec.flags.end(), flag) != spec.flags.end();
    };
    auto needed = [&](const char* flag) {
      return std::find(spec.required.begin(), spec.required.end(), flag) != spec.required.end();
    };
    auto add = [&](const char* flag, auto& target, const char* help) {
      if (!has(flag)) return;
      auto* opt = sub->add_option(flag, target, help);
      if (needed(flag)) opt->required();
    };
    add("--order", v.order, "truncation order (BCH) or highest derivative order (germ-invert)");
    add("--s", v.s, "half-plane abscissa");
    add("--z", v.z, "complex point: re or re,im");
    add("--epsilon", v.epsilon, "target radius epsilon");
    add("--r", v.r, "inner radius r < R/(2e)");
    add("--R", v.big_r, "outer radius R");
    add("--samples", v.samples, "number of samples (limit-verify) or contour nodes (estimate-verify)");
    add("--degree", v.degree, "truncation degree");
    add("--u", v.u, "source abscissa u >= s + 2");
    add("--n", v.n, "germ index n");
    add("--l", v.l, "germ index l >= 6n");
    sub->add_option("--seed", v.seed, "random seed (falls back to LBCALC_SEED)");
    if (spec.max_inputs > 0) sub->add_option("inputs", v.inputs, "input JSON files");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    Command help;
    help.verb = "help";
    const auto* chosen = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    help.help = chosen->help();
    return help;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const VerbSpec& spec = spec_for(chosen->get_name());
  const Values& v = values[spec.name];

  Command c;
  c.verb = spec.name;
  c.inputs = v.inputs;
  if (c.inputs.size() < spec.min_inputs || c.inputs.size() > spec.max_inputs) {
    std::ostringstream msg;
    msg << c.verb << " takes " << spec.min_inputs;
    if (spec.max_inputs != spec.min_inputs) msg << " to " << spec.max_inputs;
    msg << " input file(s), got " << c.inputs.size();
    throw UsageError(msg.str());
  }
  auto given = [&](const char* flag) {
    const bool declared = flag == std::string("--seed") ||
                          std::find(spec.flags.begin(), spec.flags.end(), flag) != spec.flags.end();
    return declared && chosen->count(flag) > 0;
  };
  auto small_int = [&](const char* flag, long long value) {
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max()) {
      throw UsageError(std::string("value out of range for ") + flag);
    }
    return static_cast<int>(value);
  };
  auto finite = [&](const char* flag, double value) {
    if (!std::isfinite(value)) throw UsageError(std::string("non-finite value for ") + flag);
    return value;
  };
  if (given("--order")) c.order = small_int("--order", v.order);
  if (given("--samples")) c.samples = small_int("--samples", v.samples);
  if (given("--degree")) c.degree = small_int("--degree", v.degree);
  if (given("--u")) c.u = small_int("--u", v.u);
  if (given("--n")) c.n = small_int("--n", v.n);
  if (given("--l")) c.l = small_int("--l", v.l);
  if (given("--s")) c.s = finite("--s", v.s);
  if (given("--epsilon")) c.epsilon = finite("--epsilon", v.epsilon);
  if (given("--r")) c.r = finite("--r", v.r);
  if (given("--R")) c.R = finite("--R", v.big_r);
  if (given("--z")) {
    parse_complex(v.z);
    c.z = v.z;
  }
  if (given("--seed")) {
    c.seed = v.seed;
    c.seed_given = true;
  } else if (env_seed) {
    c.seed = parse_seed(*env_seed, "LBCALC_SEED");
    c.seed_given = true;
  } else {
    c.seed = kDefaultSeed;
  }
  return c;
}

int execute(const Command& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.verb == "help") {
      out << c.help;
      return kOk;
    }
    const VerbSpec& spec = spec_for(c.verb);
    for (const auto& flag : spec.required) {
      const bool present = (flag == "--order" && c.order) || (flag == "--s" && c.s) || (flag == "--z" && c.z) ||
                           (flag == "--epsilon" && c.epsilon) || (flag == "--r" && c.r) || (flag == "--R" && c.R) ||
                           (flag == "--u" && c.u) || (flag == "--n" && c.n) || (flag == "--l" && c.l);
      if (!present) throw UsageError(c.verb + " requires " + flag);
    }
    if (c.inputs.size() < spec.min_inputs || c.inputs.size() > spec.max_inputs) {
      throw UsageError(c.verb + ": wrong number of input files");
    }
    if (c.verb == "bch") return run_bch(c, out);
    if (c.verb == "dirichlet-bracket") return run_dirichlet_bracket(c, out);
    if (c.verb == "dirichlet-norm") return run_dirichlet_norm(c, out);
    if (c.verb == "dirichlet-eval") return run_dirichlet_eval(c, out);
    if (c.verb == "germ-compose") return run_germ_compose(c, out);
    if (c.verb == "germ-invert") return run_germ_invert(c, out);
    if (c.verb == "estimate-verify") return run_estimate_verify(c, out);
    if (c.verb == "limit-certify") return run_limit_certify(c, out);
    if (c.verb == "limit-verify") return run_limit_verify(c, out);
    if (c.verb == "modulus-dirichlet") return run_modulus_dirichlet(c, out);
    if (c.verb == "modulus-germ") return run_modulus_germ(c, out);
    if (c.verb == "suite") return run_suite(c, out);
    throw UsageError("unknown verb '" + c.verb + "'");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kInternal;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command c;
  try {
    c = parse(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  return execute(c, out, err);
}

}  // namespace lbcalc::cli
