#pragma once

// Drives the command-line entry point in-process over a scratch directory:
// synth -> extract-attrs -> stats -> weights -> augment -> evaluate -> compare.

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairaug/cli.hpp"
#include "fairaug/io.hpp"

namespace testsupport {

struct CliResult {
  int code = 0;
  std::string out, err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = fairaug::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct PipelineRun {
  std::vector<std::pair<std::string, CliResult>> steps;
  std::vector<std::filesystem::path> reports;  // JSON documents that must carry run_config

  bool all_ok() const {
    for (const auto& [name, r] : steps) {
      if (r.code != 0) return false;
    }
    return !steps.empty();
  }
  std::string first_failure() const {
    for (const auto& [name, r] : steps) {
      if (r.code != 0) return name + " exited " + std::to_string(r.code) + ": " + r.err;
    }
    return {};
  }
};

inline PipelineRun run_pipeline(const std::filesystem::path& root, std::size_t train, std::size_t test) {
  PipelineRun p;
  const nlohmann::json plan = {
      {"seed", 7},
      {"random_images",
       {{"classes", {"Person", "Cat", "Dog", "Chair", "Table"}},
        {"height", 48},
        {"width", 48},
        {"max_noise", 6},
        {"splits", {{"train", train}, {"test", test}}}}}};
  fairaug::io::write_atomic(root / "plan.json", plan.dump(2));
  const auto s = (root / "synth").string();
  const auto step = [&](const std::string& name, std::vector<std::string> args) {
    p.steps.emplace_back(name, run_cli(std::move(args)));
    return p.steps.back().second.code == 0;
  };
  const auto path = [&](const std::string& rel) { return (root / rel).string(); };

  if (!step("synth", {"synth", "--spec", path("plan.json"), "--out", s})) return p;
  p.reports.push_back(root / "synth" / "run_config.json");
  if (!step("extract-attrs", {"extract-attrs", "--manifest", s + "/manifest.csv", "--out", path("env.csv"),
                              "--threads", "2"}))
    return p;
  p.reports.push_back(root / "env.run.json");
  if (!step("stats", {"stats", "--manifest", path("env.csv"), "--out", path("stats.csv")})) return p;
  p.reports.push_back(root / "stats.json");
  if (!step("weights", {"weights", "--manifest", path("env.csv"), "--out", path("weights.json")})) return p;
  p.reports.push_back(root / "weights.json");
  if (!step("augment", {"augment", "--manifest", path("env.csv"), "--seed", "42", "--out", path("aug")}))
    return p;
  p.reports.push_back(root / "aug" / "run_config.json");
  if (!step("evaluate", {"evaluate", "--manifest", path("env.csv"), "--predictions",
                         s + "/oracle_predictions.csv", "--out", path("eval_a.json")}))
    return p;
  p.reports.push_back(root / "eval_a.json");
  if (!step("evaluate", {"evaluate", "--manifest", path("env.csv"), "--predictions",
                         s + "/oracle_predictions.csv", "--out", path("eval_b.json")}))
    return p;
  if (!step("compare", {"compare", path("eval_a.json"), path("eval_b.json"), "--out", path("cmp.csv")}))
    return p;
  p.reports.push_back(root / "cmp.json");
  return p;
}

inline bool has_run_config(const std::filesystem::path& report) {
  const auto j = nlohmann::json::parse(fairaug::io::read_text(report));
  return j.contains("run_config") && j["run_config"].contains("version") &&
         j["run_config"].contains("seed") && j["run_config"].contains("inputs");
}

}  // namespace testsupport
