#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>

#include "lbcalc/cli.hpp"
#include "lbcalc/json_io.hpp"

using namespace lbcalc;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Workspace {
 public:
  Workspace() {
    dir_ = fs::temp_directory_path() / ("lbcalc_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const json& content) const {
    const auto path = dir_ / name;
    std::ofstream(path) << content.dump();
    return path.string();
  }
  std::string write_text(const std::string& name, const std::string& content) const {
    const auto path = dir_ / name;
    std::ofstream(path) << content;
    return path.string();
  }

 private:
  fs::path dir_;
};

json small_matrix(double scale) {
  return io::to_json(Matrix::from_rows({{0.05 * scale, 0.01}, {Complex(0.0, 0.015), -0.025 * scale}}));
}

json scalar_germ(int index, std::initializer_list<std::pair<int, double>> terms) {
  germ::GermBuilder b(germ::AnchorSet::origin(1), index);
  for (const auto& [k, c] : terms) b.term(0, {k}, {Complex(c)});
  return io::to_json(b.build());
}

json small_series() {
  dirichlet::DirichletSeries g(2);
  g.add_term(1, Matrix::unit(2, 0, 1, 0.02)).add_term(3, Matrix::diagonal({0.05, -0.01}));
  return io::to_json(g);
}

}  // namespace

TEST_CASE("parse examples") {
  const auto c = cli::parse({"bch", "--order", "8", "x.json", "y.json"}, std::nullopt);
  CHECK(c.verb == "bch");
  CHECK(c.order == 8);
  CHECK(c.inputs == std::vector<std::string>{"x.json", "y.json"});
  CHECK(c.seed == cli::kDefaultSeed);
  CHECK_FALSE(c.seed_given);

  const auto s = cli::parse({"suite", "--seed", "42"}, std::nullopt);
  CHECK(s.verb == "suite");
  CHECK(s.seed == 42);
  CHECK(s.seed_given);

  CHECK_THROWS_AS(cli::parse({"bch", "--order", "zebra"}, std::nullopt), cli::UsageError);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(cli::parse({}, std::nullopt), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"frobnicate"}, std::nullopt), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"bch", "x.json", "y.json"}, std::nullopt), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"bch", "--order", "3", "x.json"}, std::nullopt), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"dirichlet-norm", "--z", "1", "g.json"}, std::nullopt), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"dirichlet-eval", "--z", "1,2,3", "g.json"}, std::nullopt), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"suite", "extra.json"}, std::nullopt), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"suite", "--seed", "-4"}, std::nullopt), cli::UsageError);
  CHECK_THROWS_AS(cli::parse({"modulus-dirichlet", "--s", "1", "--epsilon", "nan", "--u", "4"}, std::nullopt),
                  cli::UsageError);
}

TEST_CASE("seed from the environment") {
  const auto c = cli::parse({"suite"}, std::string("99"));
  CHECK(c.seed == 99);
  CHECK(c.seed_given);
  // the flag wins over the environment
  CHECK(cli::parse({"suite", "--seed", "5"}, std::string("99")).seed == 5);
  CHECK_THROWS_AS(cli::parse({"suite"}, std::string("seven")), cli::UsageError);
}

TEST_CASE("help") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  for (const auto& v : cli::verbs()) CHECK(r.out.find(v) != std::string::npos);
  const auto sub = run({"limit-certify", "--help"});
  CHECK(sub.code == 0);
  CHECK(sub.out.find("--epsilon") != std::string::npos);
}

TEST_CASE("bch exit codes") {
  Workspace ws;
  const auto x = ws.write("x.json", small_matrix(1.0));
  const auto y = ws.write("y.json", small_matrix(-0.5));
  const auto ok = run({"bch", "--order", "8", x, y});
  REQUIRE(ok.code == 0);
  const json rep = ok.report();
  CHECK(rep["verb"] == "bch");
  CHECK(rep["result"]["dim"] == 2);
  CHECK(rep["oracle_deviation"].get<double>() < 1e-10);

  const auto big = ws.write("big.json", small_matrix(3.0));
  const auto bad = run({"bch", "--order", "8", big, big});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("log(3/2)") != std::string::npos);
  CHECK(bad.out.empty());

  CHECK(run({"bch", "--order", "20", x, y}).code == 2);
  CHECK(run({"bch", "--order", "4", x, ws.write("missing_field.json", json{{"dim", 2}})}).code == 2);
  CHECK(run({"bch", "--order", "4", x, "/nonexistent/file.json"}).code == 2);
  CHECK(run({"bch", "--order", "4", x, ws.write_text("garbage.json", "[1,")}).code == 2);
}

TEST_CASE("series verbs") {
  Workspace ws;
  const auto g = ws.write("g.json", small_series());
  const auto b = run({"bch", "--order", "6", "--s", "0", g, g});
  REQUIRE(b.code == 0);
  CHECK(b.report()["pointwise"]["deviation"].get<double>() < 1e-12);
  CHECK(run({"bch", "--order", "6", g, g}).code == 2);

  const auto n = run({"dirichlet-norm", "--s", "1", g});
  REQUIRE(n.code == 0);
  CHECK(n.report()["norm"].get<double>() == doctest::Approx(0.04 + 0.1 / 3.0));

  const auto br = run({"dirichlet-bracket", "--s", "0", g, g});
  REQUIRE(br.code == 0);
  CHECK(br.report()["result"]["terms"].empty());

  const auto e = run({"dirichlet-eval", "--z", "3,1", g});
  REQUIRE(e.code == 0);
  CHECK(e.report().contains("leading"));
}

TEST_CASE("germ verbs") {
  Workspace ws;
  const auto g1 = ws.write("g1.json", scalar_germ(1, {{2, 1.0}}));
  const auto g2 = ws.write("g2.json", scalar_germ(5, {{2, 1.0}}));
  const auto c = run({"germ-compose", g1, g2});
  REQUIRE(c.code == 0);
  const auto composed = io::germ_from_json(c.report()["result"]);
  const int a3[] = {3};
  CHECK(composed.component(0, 0).coefficient(a3) == Complex(2.0));

  const auto d = run({"germ-compose", g1, g2, g1, g2});
  REQUIRE(d.code == 0);
  CHECK(d.report().contains("derivative"));
  CHECK(run({"germ-compose", g1, g2, g1}).code == 2);
  CHECK(run({"germ-compose", g1, ws.write("g4.json", scalar_germ(4, {{2, 1.0}}))}).code == 3);

  const auto small = ws.write("small.json", scalar_germ(1, {{2, 0.1}}));
  const auto inv = run({"germ-invert", small});
  REQUIRE(inv.code == 0);
  CHECK(inv.report()["inverse"]["index"] == 12);
  CHECK(inv.report()["residual_max"].get<double>() < 1e-12);
  CHECK(run({"germ-invert", ws.write("steep.json", scalar_germ(1, {{1, 0.7}}))}).code == 3);
}

TEST_CASE("estimate verb") {
  Workspace ws;
  const auto id = ws.write("id.json", scalar_germ(1, {{1, 1.0}}));
  const auto r = run({"estimate-verify", "--r", "0.1", id});
  REQUIRE(r.code == 0);
  const json rep = r.report();
  CHECK(rep["lhs"].get<double>() == doctest::Approx(0.1));
  CHECK(std::abs(rep["rhs"].get<double>() - 2.19133110406149) < 1e-13);
  CHECK(rep["verdict"] == true);
  CHECK(run({"estimate-verify", "--r", "0.2", id}).code == 3);
}

TEST_CASE("limit certify and verify") {
  Workspace ws;
  const json spec{{"limit", {{"kind", "matrix"}}},
                  {"map", {{"kind", "matrix-polynomial"}, {"coeffs", json::array({0.01})}, {"weighted", false}}},
                  {"steps", 3}};
  const auto cert = run({"limit-certify", "--R", "1", "--r", "0.1", "--epsilon", "1", ws.write("spec.json", spec)});
  REQUIRE(cert.code == 0);
  const json c = cert.report();
  CHECK(c["b"][0] == 1.0);
  const auto cert_path = ws.write("cert.json", c);

  const auto good = run({"limit-verify", "--samples", "2000", "--seed", "4", cert_path});
  CHECK(good.code == 0);
  CHECK(good.report()["verdict"] == true);

  json corrupted = c;
  for (auto& d : corrupted["delta"]) d = d.get<double>() * 10.0;
  const auto bad = run({"limit-verify", "--samples", "2000", "--seed", "4", ws.write("bad.json", corrupted)});
  CHECK(bad.code == 1);
  const json br = bad.report();
  CHECK(br["verdict"] == false);
  CHECK(br["violations"].get<int>() > 0);

  const json sups{{"step_sups", json::array({10.0})}};
  const auto plain = run({"limit-certify", "--R", "1", "--r", "0.1", "--epsilon", "1", ws.write("s.json", sups)});
  REQUIRE(plain.code == 0);
  CHECK(plain.report()["delta"][0].get<double>() == doctest::Approx(0.0025));
  CHECK(run({"limit-verify", ws.write("plain.json", plain.report())}).code == 2);
  CHECK(run({"limit-certify", "--R", "1", "--r", "0.5", "--epsilon", "1", ws.write("s2.json", sups)}).code == 3);
}

TEST_CASE("modulus verbs") {
  const auto d = run({"modulus-dirichlet", "--s", "1", "--epsilon", "0.1", "--u", "10"});
  REQUIRE(d.code == 0);
  CHECK(d.report()["n0"] == 40);
  CHECK(d.report()["t"] == 3);
  CHECK(run({"modulus-dirichlet", "--s", "1", "--epsilon", "0.1", "--u", "2"}).code == 2);

  const auto g = run({"modulus-germ", "--n", "1", "--epsilon", "0.1", "--l", "6"});
  REQUIRE(g.code == 0);
  CHECK(g.report()["m"] == 6);
  CHECK(g.report()["chain_at_delta"].get<double>() == doctest::Approx(0.1));
}

TEST_CASE("reports are deterministic") {
  Workspace ws;
  const auto id = ws.write("id.json", scalar_germ(2, {{1, 0.3}, {2, 0.5}}));
  const auto a = run({"estimate-verify", "--r", "0.05", "--seed", "11", id});
  const auto b = run({"estimate-verify", "--r", "0.05", "--seed", "11", id});
  CHECK(a.out == b.out);

  const json spec{{"limit", {{"kind", "dirichlet"}, {"s0", 0.0}, {"dim", 2}}},
                  {"map", {{"kind", "dirichlet-bracket"}, {"gamma0", small_series()}, {"s_out", 3.0}}},
                  {"steps", 3}};
  const auto cert = run({"limit-certify", "--R", "1", "--r", "0.1", "--epsilon", "0.01", ws.write("s.json", spec)});
  REQUIRE(cert.code == 0);
  const auto path = ws.write("c.json", cert.report());
  const auto v1 = run({"limit-verify", "--seed", "8", path});
  const auto v2 = run({"limit-verify", "--seed", "8", path});
  CHECK(v1.code == 0);
  CHECK(v1.out == v2.out);
}

TEST_CASE("every operation is reachable from some verb") {
  Workspace ws;
  const auto x = ws.write("x.json", small_matrix(1.0));
  const auto g = ws.write("g.json", small_series());
  const auto g1 = ws.write("g1.json", scalar_germ(1, {{2, 0.1}}));
  const auto g2 = ws.write("g2.json", scalar_germ(5, {{2, 0.2}}));
  const json spec{{"limit", {{"kind", "germ"}, {"dim", 1}, {"degree", 4}}},
                  {"map", {{"kind", "germ-scaling"}, {"c", 2.0}, {"out_index", 3}}},
                  {"steps", 3}};
  const auto cert = run({"limit-certify", "--R", "1", "--r", "0.1", "--epsilon", "0.1", ws.write("s.json", spec)});
  REQUIRE(cert.code == 0);
  const auto cert_path = ws.write("c.json", cert.report());

  const std::vector<std::vector<std::string>> commands = {
      {"bch", "--order", "4", x, x},
      {"bch", "--order", "4", "--s", "0", g, g},
      {"dirichlet-bracket", g, g},
      {"dirichlet-norm", "--s", "0", g},
      {"dirichlet-eval", "--z", "2", g},
      {"germ-compose", g1, g2, g1, g2},
      {"germ-invert", g1},
      {"estimate-verify", "--r", "0.1", g1},
      {"limit-verify", "--samples", "50", cert_path},
      {"modulus-dirichlet", "--s", "0", "--epsilon", "0.5", "--u", "3"},
      {"modulus-germ", "--n", "1", "--epsilon", "0.5", "--l", "6"},
  };
  std::set<std::string> seen;
  const json cert_report = cert.report();
  for (const auto& name : cert_report["operations"]) seen.insert(name.get<std::string>());
  for (const auto& args : commands) {
    const auto r = run(args);
    INFO(args.front());
    REQUIRE(r.code == 0);
    const json report = r.report();
    for (const auto& name : report["operations"]) seen.insert(name.get<std::string>());
  }
  for (const auto& op : cli::operation_names()) {
    INFO(op);
    CHECK(seen.count(op) == 1);
  }
}

TEST_CASE("the installed tool maps exit codes") {
  const std::string tool = LBCALC_TOOL_PATH;
  CHECK(std::system((tool + " modulus-dirichlet --s 1 --epsilon 0.1 --u 10 > /dev/null").c_str()) == 0);
  const int usage = std::system((tool + " frobnicate 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(usage) == 2);
}
