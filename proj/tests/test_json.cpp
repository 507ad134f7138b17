#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lbcalc/error.hpp"
#include "lbcalc/json_io.hpp"

using namespace lbcalc;
using io::json;

TEST_CASE("complex and matrix round trips") {
  const Complex c{1.5, -0.25};
  CHECK(io::complex_from_json(io::to_json(c)) == c);
  CHECK(io::complex_from_json(json(2.0)) == Complex(2.0));
  CHECK_THROWS_AS(io::complex_from_json(json::array({1.0})), ValidationError);
  CHECK_THROWS_AS(io::complex_from_json(json("x")), ValidationError);

  const Matrix m = Matrix::from_rows({{1.0, Complex(0.0, 2.0)}, {-3.0, 0.125}});
  const json j = io::to_json(m);
  CHECK(j["dim"] == 2);
  CHECK(io::matrix_from_json(j) == m);
  // survives text serialization bit for bit
  CHECK(io::matrix_from_json(json::parse(j.dump())) == m);

  CHECK_THROWS_AS(io::matrix_from_json(json{{"dim", 2}, {"entries", json::array({1, 2, 3})}}), ValidationError);
  CHECK_THROWS_AS(io::matrix_from_json(json{{"entries", json::array()}}), ValidationError);
  CHECK_THROWS_AS(io::matrix_from_json(json{{"dim", 0}, {"entries", json::array()}}), ValidationError);
}

TEST_CASE("series round trip and ordering") {
  dirichlet::DirichletSeries g(2);
  g.add_term(1, Matrix::identity(2)).add_term(7, Matrix::unit(2, 1, 0, Complex(0.0, -1.0)));
  const json j = io::to_json(g);
  CHECK(j["terms"].size() == 2);
  CHECK(j["terms"][1]["n"] == 7);
  CHECK(io::series_from_json(json::parse(j.dump())) == g);

  json unordered = j;
  std::swap(unordered["terms"][0], unordered["terms"][1]);
  CHECK_THROWS_AS(io::series_from_json(unordered), ValidationError);
  json zero_n = j;
  zero_n["terms"][0]["n"] = 0;
  CHECK_THROWS_AS(io::series_from_json(zero_n), ValidationError);
  json fractional = j;
  fractional["terms"][0]["n"] = 1.5;
  CHECK_THROWS_AS(io::series_from_json(fractional), ValidationError);
}

TEST_CASE("germ round trip") {
  const germ::AnchorSet anchors(2, {{0.0, 0.0}, {3.0, Complex(0.0, 1.0)}});
  const auto g = germ::GermBuilder(anchors, 2, 5)
                     .term(0, {1, 1}, {Complex(0.5), Complex(0.0, 0.25)})
                     .term(1, {0, 3}, {Complex(-1.0), Complex(0.0)})
                     .build();
  const json j = io::to_json(g);
  CHECK(j["index"] == 2);
  CHECK(j["degree"] == 5);
  const auto back = io::germ_from_json(json::parse(j.dump()));
  CHECK(back == g);

  json constant = j;
  constant["series"][0]["terms"][0]["alpha"] = json::array({0, 0});
  CHECK_THROWS_AS(io::germ_from_json(constant), ValidationError);
  json wrong_len = j;
  wrong_len["series"][0]["terms"][0]["alpha"] = json::array({1});
  CHECK_THROWS_AS(io::germ_from_json(wrong_len), ValidationError);
}

TEST_CASE("certificate round trip and validation") {
  const auto cert = limit::build_certificate({1.0, 3.0}, 1.0, 0.1, 0.5);
  const json j = io::to_json(cert);
  const auto back = io::certificate_from_json(json::parse(j.dump()));
  CHECK(back.delta == cert.delta);
  CHECK(back.step_sups == cert.step_sups);
  CHECK(limit::certificate_consistent(back));

  json bad = j;
  bad["delta"] = json::array({0.1});
  CHECK_THROWS_AS(io::certificate_from_json(bad), ValidationError);
  bad = j;
  bad["delta"][0] = -1.0;
  CHECK_THROWS_AS(io::certificate_from_json(bad), ValidationError);
}

TEST_CASE("report fields") {
  limit::VerifyReport v;
  v.max_observed = 0.5;
  v.epsilon = 1.0;
  v.samples = 10;
  v.verdict = true;
  v.seed = 3;
  const json vj = io::to_json(v);
  for (const char* key : {"max_observed", "epsilon", "samples", "verdict", "seed"}) CHECK(vj.contains(key));

  estimate::EstimateReport e;
  e.degrees = {0.0, 1.0};
  e.partial_sums = {0.0, 0.1};
  e.lhs = 0.1;
  e.rhs = 2.0;
  e.verdict = true;
  e.R = 1.0;
  e.r = 0.1;
  e.s = 0.9;
  e.Q = 256;
  const json ej = io::to_json(e);
  for (const char* key : {"degrees", "lhs", "rhs", "verdict", "parameters"}) CHECK(ej.contains(key));
  for (const char* key : {"R", "r", "s", "Q"}) CHECK(ej["parameters"].contains(key));

  const auto dm = limit::dirichlet_regularity_modulus(1, 0.1, 10);
  CHECK(io::to_json(dm)["n0"] == 40);
  const auto gm = limit::germ_regularity_modulus(1, 0.1, 6, limit::DegreeSups::finite({1.0, 0.5}));
  CHECK(io::to_json(gm)["degree_sups"]["kind"] == "finite");
}

TEST_CASE("reading files") {
  const auto path = std::filesystem::temp_directory_path() / "lbcalc_json_io_test.json";
  {
    std::ofstream out(path);
    out << "{\"dim\": 1, \"entries\": [[2, 0]]}";
  }
  CHECK(io::matrix_from_json(io::read_json_file(path.string())) == Matrix(1, {2.0}));
  {
    std::ofstream out(path);
    out << "{not json";
  }
  CHECK_THROWS_AS(io::read_json_file(path.string()), ValidationError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::read_json_file(path.string()), ValidationError);
}
