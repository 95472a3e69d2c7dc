// Copyright 2026 The graphdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// graphdist command-line tool: dataset generation, training, evaluation,
// gradient-field export and trajectory planning.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "graphdist/checkpoint.hpp"
#include "graphdist/config.hpp"
#include "graphdist/dataset.hpp"
#include "graphdist/environment.hpp"
#include "graphdist/errors.hpp"
#include "graphdist/svg.hpp"
#include "graphdist/training.hpp"
#include "graphdist/trajopt.hpp"

#ifndef GRAPHDIST_VERSION
#define GRAPHDIST_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace graphdist;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3, kFormat = 4, kNumeric = 5, kUnsupported = 6 };

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

nlohmann::json config_json(const KeyValueConfig& kv) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : kv.values()) j[k] = v;
  return j;
}

/// Records one run in `dir/manifest.json`. Each output directory holds a
/// single manifest with one entry per output it contains.
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv)
      : command_(std::move(command)), argv_(std::move(argv)), start_(std::chrono::steady_clock::now()) {}

  nlohmann::json& record() { return record_; }

  void write(const fs::path& dir, const std::string& entry) const {
    fs::create_directories(dir);
    const fs::path path = dir / "manifest.json";
    nlohmann::json m = fs::exists(path) ? read_json(path) : nlohmann::json::object();
    m["tool"] = "graphdist";
    m["tool_version"] = GRAPHDIST_VERSION;
    nlohmann::json run = record_;
    run["command"] = command_;
    run["argv"] = argv_;
    run["cwd"] = fs::current_path().string();
    run["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    m["runs"][entry] = run;
    write_file(path, m.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::chrono::steady_clock::time_point start_;
  nlohmann::json record_ = nlohmann::json::object();
};

// Output directory and manifest entry name for a file output.
std::pair<fs::path, std::string> locate(const fs::path& out) {
  const fs::path abs = fs::absolute(out);
  return {abs.parent_path(), abs.filename().string()};
}

char parse_kind(const std::string& s) {
  if (s.size() != 1 || !is_env_kind(s[0])) throw ConfigError("unknown environment kind '" + s + "' (expected a..e)");
  return s[0];
}

std::unique_ptr<DistanceEstimator> load_estimator(const std::string& ckpt, std::uint64_t seed) {
  if (ckpt == "oracle") return std::make_unique<OracleEstimator>();
  return std::make_unique<ModelEstimator>(GraphDistNet(load_checkpoint(ckpt)), seed);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

int cmd_gendata(const std::string& env, std::size_t count, std::uint64_t seed, const fs::path& out,
                const std::vector<std::string>& argv) {
  Manifest manifest("gendata", argv);
  const char kind = parse_kind(env);
  const std::vector<Sample> samples = generate_dataset(kind, count, seed);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_dataset(out.string(), samples);
  if (load_dataset(out.string()).size() != samples.size()) throw IoError("dataset read-back mismatch for " + out.string());
  std::size_t colliding = 0;
  for (const Sample& s : samples) colliding += s.label <= 0;
  manifest.record()["seeds"] = {{"dataset", seed}};
  manifest.record()["config"] = {{"env", env}, {"count", count}};
  manifest.record()["outputs"] = {out.string()};
  const auto [dir, entry] = locate(out);
  manifest.write(dir, entry);
  std::cout << "wrote " << samples.size() << " samples to " << out.string() << " (" << colliding << " in collision)\n";
  return kOk;
}

int cmd_train(const fs::path& data, const std::string& config_path, const fs::path& out, std::string loss_csv,
              bool quiet, const std::vector<std::string>& argv) {
  Manifest manifest("train", argv);
  const KeyValueConfig kv = config_path.empty() ? KeyValueConfig() : KeyValueConfig::load(config_path);
  const TrainConfig config = TrainConfig::from_config(kv);
  const std::vector<Sample> samples = load_dataset(data.string());
  const TrainResult result = train(samples, config, [&](const EpochLoss& e) {
    if (!quiet) std::cerr << "epoch " << e.epoch << " train_mse " << e.train_mse << " val_mse " << e.val_mse << "\n";
  });
  if (loss_csv.empty()) loss_csv = (out.parent_path() / (out.stem().string() + ".loss.csv")).string();
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_checkpoint(out.string(), result.params, utc_timestamp());
  if (load_checkpoint(out.string()).flatten() != result.params.flatten())
    throw IoError("checkpoint read-back mismatch for " + out.string());
  std::ostringstream csv;
  write_loss_csv(csv, result.curve);
  write_file(loss_csv, csv.str());
  manifest.record()["config"] = config_json(config.to_config());
  manifest.record()["seeds"] = {{"train", config.seed}};
  manifest.record()["inputs"] = {data.string()};
  manifest.record()["outputs"] = {out.string(), loss_csv};
  const auto [dir, entry] = locate(out);
  manifest.write(dir, entry);
  const EpochLoss last = result.curve.empty() ? EpochLoss{} : result.curve.back();
  std::cout << "final train_mse " << fmt(last.train_mse) << " val_mse " << fmt(last.val_mse) << "\n";
  return kOk;
}

int cmd_eval(const std::string& ckpt, const fs::path& data, const fs::path& report, std::uint64_t seed,
             int acd_configs, const std::vector<std::string>& argv) {
  Manifest manifest("eval", argv);
  const std::vector<Sample> samples = load_dataset(data.string());
  const auto estimator = load_estimator(ckpt, seed);
  EvalConfig config;
  config.seed = seed;
  config.acd_configs = acd_configs;
  const Metrics m = evaluate(*estimator, samples, config);
  write_file(report, m.to_json().dump(2) + "\n");
  manifest.record()["seeds"] = {{"eval", seed}};
  manifest.record()["config"] = {{"acd_configs", acd_configs}};
  manifest.record()["inputs"] = {ckpt, data.string()};
  manifest.record()["outputs"] = {report.string()};
  const auto [dir, entry] = locate(report);
  manifest.write(dir, entry);
  std::cout << m.to_json().dump() << "\n";
  return kOk;
}

Environment load_or_generate_env(const std::string& env, std::uint64_t seed, const std::string& env_file) {
  if (!env_file.empty()) return environment_from_json(read_json(env_file));
  return generate_environment(parse_kind(env), seed);
}

std::string grid_csv(const Eigen::MatrixXd& grid, const std::vector<double>& axis) {
  std::ostringstream s;
  s << "i,j,theta1,theta2,distance\n";
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    for (Eigen::Index j = 0; j < grid.cols(); ++j)
      s << i << ',' << j << ',' << fmt(axis[static_cast<std::size_t>(i)]) << ',' << fmt(axis[static_cast<std::size_t>(j)])
        << ',' << fmt(grid(i, j)) << '\n';
  return s.str();
}

int cmd_gradfield(const std::string& ckpt, const std::string& env_kind, std::uint64_t env_seed,
                  const std::string& env_file, int grid, const fs::path& out, const std::string& trajectory,
                  std::uint64_t seed, const std::vector<std::string>& argv) {
  Manifest manifest("gradfield", argv);
  if (grid < 1) throw ConfigError("--grid must be positive");
  const Environment env = load_or_generate_env(env_kind, env_seed, env_file);
  if (env.arm.dof() != 2) throw UnsupportedError("gradfield needs a 2-DoF environment");
  if (env.obstacles.empty()) throw UnsupportedError("gradfield needs at least one obstacle");
  std::vector<double> axis(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) axis[static_cast<std::size_t>(k)] = -std::numbers::pi + (k + 0.5) * 2 * std::numbers::pi / grid;
  // Row i is theta1, column j is theta2.
  std::vector<Sample> cells(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      Sample& s = cells[static_cast<std::size_t>(i * grid + j)];
      s.kind = env.kind;
      s.arm = env.arm;
      s.obstacles = env.obstacles;
      s.joints = {axis[static_cast<std::size_t>(i)], axis[static_cast<std::size_t>(j)]};
      s.label = label_for(s.arm, s.joints, s.obstacles);
    }
  const std::vector<double> model = load_estimator(ckpt, seed)->predict(cells);
  Eigen::MatrixXd model_grid(grid, grid), oracle_grid(grid, grid);
  std::size_t agree = 0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const std::size_t c = static_cast<std::size_t>(i * grid + j);
      model_grid(i, j) = model[c];
      oracle_grid(i, j) = cells[c].label;
      agree += (model[c] > 0) == (cells[c].label > 0);
    }
  fs::create_directories(out);
  write_file(out / "model_grid.csv", grid_csv(model_grid, axis));
  write_file(out / "oracle_grid.csv", grid_csv(oracle_grid, axis));

  Eigen::MatrixXd path;
  if (!trajectory.empty()) {
    const auto w = read_json(trajectory).at("waypoints").get<std::vector<std::vector<double>>>();
    path.resize(static_cast<Eigen::Index>(w.size()), 2);
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (w[t].size() != 2) throw FormatError("trajectory waypoints must be 2-DoF");
      // Heatmap x is theta2 (columns), y is theta1 (rows).
      path(static_cast<Eigen::Index>(t), 0) = w[t][1];
      path(static_cast<Eigen::Index>(t), 1) = w[t][0];
    }
  }
  HeatmapOptions opts;
  opts.title = "estimated distance over (theta2, theta1)";
  write_file(out / "model.svg", heatmap_svg(model_grid, opts, path));
  opts.title = "exact distance over (theta2, theta1)";
  write_file(out / "oracle.svg", heatmap_svg(oracle_grid, opts, path));
  const double agreement = static_cast<double>(agree) / static_cast<double>(cells.size());
  manifest.record()["seeds"] = {{"env", env_seed}, {"partners", seed}};
  manifest.record()["config"] = {{"env", env_file.empty() ? env_kind : env_file}, {"grid", grid}};
  manifest.record()["inputs"] = {ckpt};
  manifest.record()["outputs"] = {"model_grid.csv", "oracle_grid.csv", "model.svg", "oracle.svg"};
  manifest.record()["sign_agreement"] = agreement;
  manifest.write(fs::absolute(out), "gradfield");
  std::cout << "sign agreement " << agreement << " over " << cells.size() << " cells\n";
  return kOk;
}

struct PlanOutcome {
  bool success = false;
  double path_cost = 0;
  double wall_time_s = 0;
};

PlanOutcome plan_one(const GraphDistNet* net, const PlanTask& task, const fs::path& out, std::uint64_t seed,
                     bool seed_given) {
  KeyValueConfig kv = task.config;
  if (seed_given) kv.set("seed", std::to_string(seed));
  const PlanConfig config = PlanConfig::from_config(kv);
  const Trajectory init = init_trajectory(task.start, task.goal, config.waypoints);
  if (!net && !task.env.obstacles.empty()) throw ConfigError("--ckpt is required for tasks with obstacles");
  const ModelParams empty_params = ModelParams::initialize(ModelConfig{}, 0);
  const GraphDistNet fallback(empty_params);
  const PlanResult result = optimize(init, task.env, net ? *net : fallback, config);
  const VerifyResult check = verify(result.trajectory, task.env, config.densify);
  nlohmann::json j = result_to_json(result, check.ok);
  j["initial_path_cost"] = path_cost(init);
  j["initial_collision_free"] = verify(init, task.env, config.densify).ok;
  if (check.first_violation) {
    const Violation& v = *check.first_violation;
    j["first_violation"] = {{"segment", v.segment}, {"step", v.step}, {"distance", v.distance}};
  }
  j["config"] = config_json(config.to_config());
  fs::create_directories(out);
  write_file(out / "result.json", j.dump(2) + "\n");
  std::ostringstream trace;
  write_trace_csv(trace, result.report);
  write_file(out / "trace.csv", trace.str());
  Eigen::MatrixXd poses = result.trajectory.waypoints;
  write_file(out / "scene.svg", scene_svg(task.env, poses));
  return {check.ok, path_cost(result.trajectory), result.report.wall_time_s};
}

int cmd_plan(const std::string& ckpt, const fs::path& task_path, const fs::path& out, std::uint64_t seed,
             bool seed_given, const std::vector<std::string>& argv) {
  Manifest manifest("plan", argv);
  std::unique_ptr<GraphDistNet> net;
  if (!ckpt.empty()) net = std::make_unique<GraphDistNet>(load_checkpoint(ckpt));
  manifest.record()["inputs"] = {ckpt, task_path.string()};
  manifest.record()["seeds"] = {{"plan", seed_given ? nlohmann::json(seed) : nlohmann::json("task")}};
  if (!fs::is_directory(task_path)) {
    const PlanOutcome o = plan_one(net.get(), task_from_json(read_json(task_path)), out, seed, seed_given);
    manifest.record()["outputs"] = {"result.json", "trace.csv", "scene.svg"};
    manifest.write(fs::absolute(out), "plan");
    std::cout << "success " << (o.success ? "true" : "false") << " path_cost " << fmt(o.path_cost) << "\n";
    return kOk;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(task_path))
    if (e.is_regular_file() && e.path().extension() == ".json" && e.path().filename() != "manifest.json")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no task files in " + task_path.string());
  std::ostringstream table;
  table << "task,success,path_cost,wall_time_s\n";
  int successes = 0;
  double cost_sum = 0, time_sum = 0;
  for (const fs::path& f : files) {
    const PlanOutcome o = plan_one(net.get(), task_from_json(read_json(f)), out / f.stem(), seed, seed_given);
    table << f.stem().string() << ',' << (o.success ? 1 : 0) << ',' << fmt(o.path_cost) << ',' << fmt(o.wall_time_s)
          << '\n';
    successes += o.success;
    if (o.success) cost_sum += o.path_cost;
    time_sum += o.wall_time_s;
  }
  const double n = static_cast<double>(files.size());
  nlohmann::json summary = {{"tasks", files.size()},
                            {"success_rate", successes / n},
                            {"mean_path_cost", successes ? cost_sum / successes : 0.0},
                            {"mean_time_s", time_sum / n}};
  write_file(out / "summary.csv", table.str());
  write_file(out / "summary.json", summary.dump(2) + "\n");
  manifest.record()["outputs"] = {"summary.csv", "summary.json"};
  manifest.write(fs::absolute(out), "plan");
  std::cout << "success rate " << summary["success_rate"].get<double>() << " (" << successes << "/" << files.size()
            << "), mean path cost " << summary["mean_path_cost"].get<double>() << ", mean time "
            << summary["mean_time_s"].get<double>() << " s\n";
  return kOk;
}

int cmd_gentasks(const std::string& env, int count, std::uint64_t seed, double clearance, bool obstacle_free, bool blocked,
                 const fs::path& out, const std::vector<std::string>& argv) {
  Manifest manifest("gentasks", argv);
  std::vector<PlanTask> tasks = generate_tasks(parse_kind(env), count, seed, clearance, blocked);
  fs::create_directories(out);
  nlohmann::json outputs = nlohmann::json::array();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (obstacle_free) tasks[i].env.obstacles.clear();
    char name[32];
    std::snprintf(name, sizeof(name), "task_%03zu.json", i);
    write_file(out / name, task_to_json(tasks[i]).dump(2) + "\n");
    outputs.push_back(name);
  }
  manifest.record()["seeds"] = {{"tasks", seed}};
  manifest.record()["config"] = {{"env", env}, {"count", count}, {"clearance", clearance}, {"obstacle_free", obstacle_free}, {"blocked", blocked}};
  manifest.record()["outputs"] = outputs;
  manifest.write(fs::absolute(out), "gentasks");
  std::cout << "wrote " << tasks.size() << " tasks to " << out.string() << "\n";
  return kOk;
}

int run(const std::vector<std::string>& args);

int cmd_replay(const fs::path& manifest_path, const std::string& entry) {
  const nlohmann::json m = read_json(manifest_path);
  if (!m.contains("runs")) throw FormatError(manifest_path.string() + ": no runs recorded");
  int status = kOk;
  for (const auto& [name, rec] : m.at("runs").items()) {
    if (!entry.empty() && name != entry) continue;
    const auto argv = rec.at("argv").get<std::vector<std::string>>();
    const fs::path cwd = fs::current_path();
    fs::current_path(rec.at("cwd").get<std::string>());
    std::cerr << "replaying " << name << "\n";
    const int rc = run(argv);
    fs::current_path(cwd);
    if (rc != kOk) status = rc;
  }
  return status;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"graphdist: learned collision distance for planar arms"};
  app.set_version_flag("--version", GRAPHDIST_VERSION);
  app.require_subcommand(1);

  std::string env = "a", ckpt, config_path, loss_csv, env_file, trajectory, entry;
  std::size_t count = 0;
  std::uint64_t seed = 0, env_seed = 0;
  int grid = 64, acd_configs = 100, task_count = 20;
  double clearance = 0.05;
  bool quiet = false, obstacle_free = false, blocked = false;
  fs::path out, data, report, task, manifest;

  auto* gendata = app.add_subcommand("gendata", "generate a labelled JSON-Lines dataset");
  gendata->add_option("--env", env, "environment kind a..e")->required();
  gendata->add_option("--count", count, "number of samples")->required();
  gendata->add_option("--seed", seed, "dataset seed")->required();
  gendata->add_option("--out", out, "output .jsonl path")->required();

  auto* train_cmd = app.add_subcommand("train", "train a model on a dataset");
  train_cmd->add_option("--data", data, "dataset path")->required();
  train_cmd->add_option("--config", config_path, "key = value training config");
  train_cmd->add_option("--out", out, "checkpoint path")->required();
  train_cmd->add_option("--loss-csv", loss_csv, "loss curve path (default <ckpt stem>.loss.csv)");
  train_cmd->add_flag("--quiet", quiet, "no per-epoch log");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate MAE, AUC and ACD");
  eval_cmd->add_option("--ckpt", ckpt, "checkpoint path, or 'oracle' for the exact geometry")->required();
  eval_cmd->add_option("--data", data, "test dataset")->required();
  eval_cmd->add_option("--report", report, "metrics JSON path")->required();
  eval_cmd->add_option("--seed", seed, "partner and gradient-configuration seed");
  eval_cmd->add_option("--acd-configs", acd_configs, "configurations for the gradient metric");

  auto* grad_cmd = app.add_subcommand("gradfield", "export d-hat and exact distance over the 2-DoF joint torus");
  grad_cmd->add_option("--ckpt", ckpt, "checkpoint path or 'oracle'")->required();
  grad_cmd->add_option("--env", env, "environment kind (2-DoF kinds: a, b)");
  grad_cmd->add_option("--env-seed", env_seed, "environment seed");
  grad_cmd->add_option("--env-file", env_file, "environment JSON instead of --env");
  grad_cmd->add_option("--grid", grid, "cells per axis");
  grad_cmd->add_option("--trajectory", trajectory, "plan result.json to overlay");
  grad_cmd->add_option("--seed", seed, "partner seed");
  grad_cmd->add_option("--out", out, "output directory")->required();

  auto* plan_cmd = app.add_subcommand("plan", "optimize trajectories for one task file or a task directory");
  plan_cmd->add_option("--ckpt", ckpt, "checkpoint path (optional for obstacle-free tasks)");
  plan_cmd->add_option("--task", task, "task JSON or directory of task JSONs")->required();
  plan_cmd->add_option("--out", out, "output directory")->required();
  auto* seed_opt = plan_cmd->add_option("--seed", seed, "override the planning seed");

  auto* tasks_cmd = app.add_subcommand("gentasks", "write random reaching tasks");
  tasks_cmd->add_option("--env", env, "environment kind a..e")->required();
  tasks_cmd->add_option("--count", task_count, "number of tasks");
  tasks_cmd->add_option("--seed", seed, "task seed")->required();
  tasks_cmd->add_option("--clearance", clearance, "minimum exact distance at start and goal");
  tasks_cmd->add_flag("--obstacle-free", obstacle_free, "drop all obstacles (control tasks)");
  tasks_cmd->add_flag("--blocked", blocked, "only keep tasks whose straight-line path collides");
  tasks_cmd->add_option("--out", out, "output directory")->required();

  auto* replay_cmd = app.add_subcommand("replay", "re-run the commands recorded in a manifest");
  replay_cmd->add_option("--manifest", manifest, "manifest.json path")->required();
  replay_cmd->add_option("--entry", entry, "only this run");

  std::vector<const char*> cargv;
  for (const auto& a : args) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*gendata) return cmd_gendata(env, count, seed, out, args);
    if (*train_cmd) return cmd_train(data, config_path, out, loss_csv, quiet, args);
    if (*eval_cmd) return cmd_eval(ckpt, data, report, seed, acd_configs, args);
    if (*grad_cmd) return cmd_gradfield(ckpt, env, env_seed, env_file, grid, out, trajectory, seed, args);
    if (*plan_cmd) return cmd_plan(ckpt, task, out, seed, seed_opt->count() > 0, args);
    if (*tasks_cmd) return cmd_gentasks(env, task_count, seed, clearance, obstacle_free, blocked, out, args);
    if (*replay_cmd) return cmd_replay(manifest, entry);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kFormat;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }
