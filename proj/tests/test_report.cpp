#include "pshc/report.hpp"
#include "test_util.hpp"

using namespace pshc;

TEST_CASE("parameter lists") {
  CHECK(parse_params("2,1") == std::vector<int>{2, 1});
  CHECK(parse_params("4") == std::vector<int>{4});
  CHECK_THROWS_AS(parse_params("2,x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_params(""), std::invalid_argument);
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.tol = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.tol = 1e-9;
  c.samples = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("table rows") {
  RunConfig c;
  c.models = {{"su_pq", {2, 1}}, {"so_p_2", {4}}, {"heisenberg", {3}}, {"e6_minus14", {}}};
  Json doc = cmd_table(c);
  CHECK(doc["schema_version"] == "1");
  const auto& rows = doc["rows"];
  REQUIRE(rows.size() == 4);
  CHECK(rows[0]["c0_prime"].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-8));
  CHECK(rows[0]["kappa"].get<double>() == doctest::Approx(-1.0 / 3).epsilon(1e-8));
  CHECK(rows[0]["c0_prime_abs_diff"].get<double>() < 1e-8);
  CHECK(rows[1]["c0_prime"].get<double>() == doctest::Approx(5.0 / 16).epsilon(1e-8));
  CHECK(rows[1]["kappa"].get<double>() == doctest::Approx(-0.25).epsilon(1e-8));
  CHECK(rows[2]["flat"] == true);
  CHECK(rows[2]["c0_prime"].is_null());
  CHECK(rows[3]["status"] == "out_of_scope");
}

TEST_CASE("model block") {
  RunConfig c;
  c.samples = 50;
  c.models = {{"su_pq", {2, 2}}};
  Json doc = cmd_model(c);
  const auto& b = doc["models"][0];
  CHECK(b["pseudo_einstein"] == true);
  CHECK(b["cm_norm2"].get<double>() > 0);
  CHECK(b["curvature_ranges"]["complex_sectional"]["max"].get<double>() <= 1e-10);
  CHECK(b["d"] == 4);
  c.models = {{"e7_minus25", {}}};
  CHECK_THROWS_AS(cmd_model(c), std::invalid_argument);
}

TEST_CASE("documents are deterministic and round-trip") {
  RunConfig c;
  c.samples = 30;
  c.models = {{"so_p_2", {3}}};
  std::string a = serialize(cmd_model(c));
  std::string b = serialize(cmd_model(c));
  CHECK(a == b);
  Json parsed = Json::parse(a);
  CHECK(serialize(parsed) == a);
  CHECK(parsed["models"][0]["kappa"].get<double>() == cmd_model(c)["models"][0]["kappa"].get<double>());
}

TEST_CASE("verify exit status") {
  RunConfig c;
  c.trials = 2;
  VerifyOutcome ok = cmd_verify(c);
  CHECK(ok.pass);
  CHECK(ok.doc["pass"] == true);
  c.negative_control = true;
  VerifyOutcome bad = cmd_verify(c);
  CHECK_FALSE(bad.pass);
}
