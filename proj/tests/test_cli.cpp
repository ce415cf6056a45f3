#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "runner.hpp"

using namespace nlhj;
using namespace nlhj::cli;
namespace fs = std::filesystem;

namespace {
const fs::path kConfigs = fs::path(NLHJ_SOURCE_DIR) / "configs";

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("nlhj_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const std::string& name, const json& cfg) {
  auto p = scratch("cfg") / (name + ".json");
  std::ofstream(p) << cfg.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json model(double sigma, double m, double theta = 0.0) {
  return {{"grid", {{"dim", 1}, {"n", 64}}},
          {"measure", {{"kind", "fractional"}, {"sigma", sigma}}},
          {"hamiltonian", {{"b", 1.0}, {"m", m}, {"f", 0.0}, {"theta", theta}}}};
}
}  // namespace

TEST_CASE("field profiles") {
  auto g = make_grid(1, 8);
  CHECK(parse_field(json(2.5), g, "f").min() == 2.5);
  auto c = parse_field(json{{"profile", "cosine"}, {"amplitude", 0.5}, {"offset", 1.5}}, g, "g");
  CHECK(c.max() <= 2.0);
  CHECK(c.min() >= 1.0);
  CHECK_THROWS_AS(parse_field(json{{"profile", "square"}}, g, "f"), ConfigError);
  CHECK_THROWS_AS(parse_field(json("cos"), g, "f"), ConfigError);
}

TEST_CASE("measure and jump parsing") {
  json cfg = {{"measure", {{"kind", "finite"}, {"sigma", 0.5}, {"atoms", {{{"offset", {0.25}}, {"mass", 1.0}}}}}}};
  auto q = parse_measure(cfg, make_grid(1, 16));
  CHECK(q.atoms.size() == 1);
  CHECK_THROWS_AS(parse_measure_spec(json{{"measure", {{"kind", "levy"}}}}, 1), ConfigError);
  CHECK_THROWS_AS(parse_measure_spec(json{{"measure", {{"kind", "crossed"}}}}, 1), ConfigError);
  auto j = parse_jump(json{{"jump", {{"kind", "scaled"}, {"g", 2.0}}}}, make_grid(1, 16));
  CHECK(j.cj() == 2.0);
  CHECK_THROWS_AS(parse_jump(json{{"jump", {{"kind", "scaled"}, {"g", -1.0}}}}, make_grid(1, 16)), ConfigError);
}

TEST_CASE("validate reports derived exponents") {
  auto rep = validate_config(model(0.5, 2.0));
  REQUIRE(rep.ok());
  CHECK(rep.derived["gamma0_boundary"].get<double>() == doctest::Approx(0.75));
  CHECK(rep.derived["gamma0_interior"].get<double>() == 1.0);
  CHECK(rep.derived["H0"].get<double>() == 0.0);

  auto r15 = validate_config(model(1.5, 2.0));
  REQUIRE(r15.ok());
  CHECK(r15.derived["gamma0_interior"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("validate rejects bad hypotheses") {
  CHECK_FALSE(validate_config(model(1.5, 1.2)).ok());
  CHECK_FALSE(validate_config(model(0.5, 2.0, 2.5)).ok());

  json lam = model(0.5, 2.0);
  lam["experiment"] = {{"ergodic", {{"lambda_seq", {0.1, 0.2}}}}};
  CHECK_FALSE(validate_config(lam).ok());

  json gam = model(0.5, 2.0);
  gam["experiment"] = {{"barrier", {{"gamma", 1.5}}}};
  CHECK_FALSE(validate_config(gam).ok());

  std::ostringstream log;
  CHECK(validate(write_config("bad", model(1.5, 1.2)), log) == 2);
  CHECK(log.str().find("max(1, sigma)") != std::string::npos);
  std::ostringstream ok;
  CHECK(validate(kConfigs / "cosine-ergodic.json", ok) == 0);
}

TEST_CASE("run exit codes") {
  std::ostringstream log;
  CHECK(run(kConfigs / "cosine-ergodic.json", "foo", scratch("foo"), log) == 2);

  auto bad = scratch("malformed") / "broken.json";
  std::ofstream(bad) << "{ \"grid\": ";
  CHECK(run(bad, "covering", scratch("malformed_out"), log) == 2);

  json unknown = model(0.5, 2.0);
  unknown["extra"] = 1;
  CHECK(run(write_config("unknown", unknown), "structure", scratch("unknown_out"), log) == 2);
}

TEST_CASE("forced C1 = 0 fails with negative margins") {
  auto out = scratch("forced");
  std::ostringstream log;
  CHECK(run(kConfigs / "barrier-forced-c1.json", "barrier", out, log) == 1);
  json summary = json::parse(slurp(out / "summary.json"));
  CHECK_FALSE(summary["pass"].get<bool>());
  bool saw = false;
  for (const auto& c : summary["checks"]) {
    if (c["check"] == "min_margin") {
      saw = true;
      CHECK(c["value"].get<double>() < 0.0);
      CHECK(c["criterion"] == "C2");
    }
  }
  CHECK(saw);
}

TEST_CASE("end-to-end ergodic run on the exact case") {
  auto out = scratch("constant");
  std::ostringstream log;
  CHECK(run(kConfigs / "constant-f.json", "ergodic", out, log) == 0);
  CHECK(fs::exists(out / "ergodic.csv"));
  CHECK(fs::exists(out / "summary.json"));
  json summary = json::parse(slurp(out / "summary.json"));
  for (const auto& c : summary["checks"]) {
    CHECK(c.contains("criterion"));
    CHECK(c.contains("threshold"));
    CHECK(c["pass"].get<bool>());
  }
}

TEST_CASE("identical config gives identical CSVs") {
  auto a = scratch("det_a");
  auto b = scratch("det_b");
  std::ostringstream log;
  REQUIRE(run(kConfigs / "structure.json", "structure", a, log) == 0);
  REQUIRE(run(kConfigs / "structure.json", "structure", b, log) == 0);
  CHECK(slurp(a / "structure.csv") == slurp(b / "structure.csv"));
  REQUIRE(run(kConfigs / "covering-crossed.json", "covering", a, log) == 0);
  REQUIRE(run(kConfigs / "covering-crossed.json", "covering", b, log) == 0);
  CHECK(slurp(a / "covering.csv") == slurp(b / "covering.csv"));
}
