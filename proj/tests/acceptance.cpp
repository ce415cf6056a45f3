// Runs the shipped configs through the experiment runner and prints one
// line per acceptance criterion. A criterion passes when every check tagged
// with its id passes.
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "runner.hpp"

namespace fs = std::filesystem;
using nlhj::cli::Check;

int main() {
  const fs::path configs = fs::path(NLHJ_SOURCE_DIR) / "configs";
  const fs::path out = fs::temp_directory_path() / "nlhj_acceptance";

  struct Job {
    const char* config;
    const char* experiment;
  };
  const std::vector<Job> jobs{
      {"operator-oracle", "operator-oracle"}, {"barrier", "barrier"},         {"barrier-levy-ito", "barrier"},
      {"constant-f", "ergodic"},              {"comparison", "comparison"},   {"cosine-ergodic", "regularity"},
      {"cosine-ergodic", "ergodic"},          {"cosine-ergodic", "ltb"},      {"covering-fractional", "covering"},
      {"covering-crossed", "covering"},       {"covering-finite", "covering"}, {"structure", "structure"},
  };
  const std::map<std::string, std::string> titles{
      {"C1", "operator oracle"},        {"C2", "barrier certification"},  {"C3", "a-priori bounds"},
      {"C4", "discrete comparison"},    {"C5", "regularity stability"},   {"C6", "ergodic constant"},
      {"C7", "large-time behaviour"},   {"C8", "covering property"},      {"C9", "Levy-Ito consistency"},
      {"C10", "structure checks"},
  };

  std::map<std::string, std::vector<std::pair<std::string, Check>>> by_criterion;
  std::map<std::string, std::string> errors;
  for (const auto& job : jobs) {
    const std::string tag = std::string(job.config) + "/" + job.experiment;
    try {
      auto cfg = nlhj::cli::load_config(configs / (std::string(job.config) + ".json"));
      auto s = nlhj::cli::run_experiment(cfg, job.experiment, out / (std::string(job.config) + "-" + job.experiment));
      for (const auto& c : s.checks) by_criterion[c.criterion].emplace_back(tag, c);
      std::cerr << "ran " << tag << " in " << s.runtime_s << " s\n";
    } catch (const std::exception& e) {
      errors[tag] = e.what();
      std::cerr << "error in " << tag << ": " << e.what() << '\n';
    }
  }

  int failed = 0;
  for (int k = 1; k <= 10; ++k) {
    const std::string id = "C" + std::to_string(k);
    const auto& checks = by_criterion[id];
    bool ok = !checks.empty() && errors.empty();
    std::ostringstream detail;
    for (const auto& [tag, c] : checks) {
      ok = ok && c.pass;
      detail << ' ' << tag << ':' << c.name << '=' << c.value << (c.pass ? "" : "(!)");
    }
    if (!errors.empty() && !checks.empty()) ok = false;
    if (!ok) ++failed;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << ' ' << titles.at(id) << " |" << detail.str() << '\n';
  }
  for (const auto& [tag, msg] : errors) std::cout << "error: " << tag << ": " << msg << '\n';
  return failed == 0 ? 0 : 1;
}
