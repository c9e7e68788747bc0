// Command-line front end: instance generation, single anneals, variational
// runs, sweeps, gap studies, annealing-time reports and schedule dumps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vcqa/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vcqa;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return json::parse(in);
}

void write_json_file(const std::string& path, const json& j) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::vector<double> parse_param_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

// Shared state for subcommands that start from a config file plus overrides.
struct ConfigArgs {
  std::string config_path;
  std::optional<std::string> connectivity;
  std::vector<int> sizes;
  std::optional<int> instance_count;
  std::optional<std::uint64_t> seed;
  std::vector<double> t_grid;
  std::vector<std::string> strategies;
  std::optional<std::string> range;
  std::optional<int> max_evals;
  std::optional<int> restarts;
  std::optional<double> gap_total_time;
  std::optional<int> gap_grid_points;
  std::optional<std::string> output_dir;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--connectivity", connectivity,
                   "linear | cyclic | star | full | heisenberg");
    app.add_option("--sizes", sizes, "qubit counts");
    app.add_option("--instances", instance_count, "instances per size");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--T", t_grid, "anneal times");
    app.add_option("--strategies", strategies,
                   "ramp | vcqa-no-aux | vcqa-x | vcqa-y | vcqa-z");
    app.add_option("--range", range, "half-open | closed");
    app.add_option("--max-evals", max_evals, "optimizer budget per start");
    app.add_option("--restarts", restarts, "optimizer restarts");
    app.add_option("--gap-T", gap_total_time, "anneal time for gap studies");
    app.add_option("--gap-grid", gap_grid_points, "gap grid points");
    app.add_option("-o,--out", output_dir, "output directory");
  }

  harness::ExperimentConfig resolve() const {
    harness::ExperimentConfig config;
    if (!config_path.empty())
      config = harness::config_from_json(read_json_file(config_path));
    if (connectivity)
      config.connectivity = connectivity_from_string(*connectivity);
    if (!sizes.empty()) config.sizes = sizes;
    if (instance_count) config.instance_count = *instance_count;
    if (seed) config.master_seed = *seed;
    if (!t_grid.empty()) config.t_grid = t_grid;
    if (!strategies.empty()) {
      config.strategies.clear();
      for (const auto& s : strategies)
        config.strategies.push_back(harness::strategy_from_string(s));
    }
    if (range) config.range = harness::draw_range_from_string(*range);
    if (max_evals) config.optimizer.max_evals = *max_evals;
    if (restarts) config.optimizer.restarts = *restarts;
    if (gap_total_time) config.gap_total_time = *gap_total_time;
    if (gap_grid_points) config.gap_grid_points = *gap_grid_points;
    if (output_dir) config.output_dir = *output_dir;
    config.optimizer.params_per_schedule = config.params_per_schedule;
    config.validate();
    return config;
  }
};

ProblemInstance load_instance(const std::string& path, int index) {
  const auto instances = harness::load_instances(path);
  if (index < 0 || index >= static_cast<int>(instances.size()))
    throw std::runtime_error("instance index out of range");
  return instances[static_cast<std::size_t>(index)];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational coherent quantum annealing laboratory"};
  app.require_subcommand(1);

  // ---- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a seeded instance ensemble");
  std::string gen_connectivity = "linear";
  int gen_n = 4, gen_count = 20;
  std::uint64_t gen_seed = 1;
  std::string gen_range = "half-open", gen_out = "instances.json";
  double gen_homega = 1.0, gen_hg = 0.1, gen_hdelta = 5.0;
  gen->add_option("--connectivity", gen_connectivity,
                  "linear | cyclic | star | full | heisenberg");
  gen->add_option("--n", gen_n, "qubit count");
  gen->add_option("--count", gen_count, "number of instances");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--range", gen_range, "half-open | closed");
  gen->add_option("--heisenberg-omega", gen_homega, "chain field");
  gen->add_option("--heisenberg-g", gen_hg, "chain coupling");
  gen->add_option("--heisenberg-delta", gen_hdelta, "y anisotropy");
  gen->add_option("-o,--out", gen_out, "output file");
  gen->callback([&] {
    const auto connectivity = connectivity_from_string(gen_connectivity);
    std::optional<HeisenbergParams> h;
    if (connectivity == Connectivity::heisenberg)
      h = HeisenbergParams{gen_homega, gen_hg, gen_hdelta};
    const auto instances = harness::generate_instances(
        connectivity, gen_n, gen_count, gen_seed,
        harness::draw_range_from_string(gen_range), h);
    harness::emit_instances(instances, gen_out);
    std::cout << "wrote " << instances.size() << " instances to " << gen_out
              << "\n";
  });

  // ---- anneal ------------------------------------------------------------
  auto* anneal = app.add_subcommand(
      "anneal", "propagate one instance and report the metrics");
  std::string an_instances, an_params, an_axis = "none", an_out = "run";
  int an_index = 0, an_samples = 1001, an_pps = 2;
  double an_t = 5.0, an_dt = 0.0, an_tol = 1e-6;
  bool an_ramp = false;
  anneal->add_option("--instances", an_instances, "instance file")->required();
  anneal->add_option("--index", an_index, "instance index in the file");
  anneal->add_option("--T", an_t, "anneal time");
  anneal->add_flag("--ramp", an_ramp, "use the exact linear ramp schedules");
  anneal->add_option("--params", an_params,
                     "comma-separated schedule parameters (F1,F2[,F3] blocks)");
  anneal->add_option("--params-per-schedule", an_pps, "knots per schedule");
  anneal->add_option("--aux", an_axis, "none | x | y | z");
  anneal->add_option("--samples", an_samples, "trajectory samples");
  anneal->add_option("--dt", an_dt, "initial step (0 = T/500)");
  anneal->add_option("--tol", an_tol, "refinement tolerance on <H_f>");
  anneal->add_option("-o,--out", an_out, "output directory");
  anneal->callback([&] {
    const auto instance = load_instance(an_instances, an_index);
    const auto axis =
        an_ramp ? AuxAxis::none : aux_axis_from_string(an_axis);
    schedule::ScheduleSet schedules;
    std::vector<double> params;
    if (an_ramp) {
      schedules = schedule::ramp_profile();
    } else {
      params = parse_param_list(an_params);
      optimize::OptimizerConfig opt;
      opt.params_per_schedule = an_pps;
      schedules = optimize::schedules_from_params(params, opt, axis);
    }
    const auto setup = make_setup(instance, schedules, an_t, axis);
    evolve::IntegratorOptions opts;
    opts.dt = an_dt;
    opts.tolerance = an_tol;
    opts.n_samples = an_samples;
    const auto traj = evolve::propagate(setup, opts);
    const auto ground = ground_state(setup.h_final);
    const StateVector& psi = traj.states.back();

    json metrics{{"final_energy", traj.exp_final.back()},
                 {"err_pct", evolve::percent_error(psi, setup.h_final,
                                                   ground.energy)},
                 {"fidelity", evolve::fidelity(psi, ground.basis)},
                 {"ground_energy", ground.energy},
                 {"dt_used", traj.dt_used},
                 {"refinements", traj.refinements},
                 {"conventions", harness::convention_flags()}};
    const fs::path dir(an_out);
    write_json_file((dir / "metrics.json").string(), metrics);
    write_json_file((dir / "trajectory.json").string(),
                    harness::trajectory_to_json(traj, instance, an_t, axis,
                                                params, an_ramp, an_pps, 1.0));
    harness::emit_trajectory_csv(traj, dir / "trajectory.csv");
    std::cout << metrics.dump(2) << "\n";
  });

  // ---- optimize ----------------------------------------------------------
  auto* opt_cmd = app.add_subcommand(
      "optimize", "variational run: minimize the final energy, then score");
  std::string op_instances, op_axis = "z", op_out;
  int op_index = 0, op_evals = 400, op_restarts = 3, op_pps = 2;
  double op_t = 5.0;
  std::uint64_t op_seed = 0;
  opt_cmd->add_option("--instances", op_instances, "instance file")->required();
  opt_cmd->add_option("--index", op_index, "instance index");
  opt_cmd->add_option("--T", op_t, "anneal time");
  opt_cmd->add_option("--aux", op_axis, "none | x | y | z");
  opt_cmd->add_option("--max-evals", op_evals, "budget per start");
  opt_cmd->add_option("--restarts", op_restarts, "independent starts");
  opt_cmd->add_option("--params-per-schedule", op_pps, "knots per schedule");
  opt_cmd->add_option("--opt-seed", op_seed, "optimizer seed");
  opt_cmd->add_option("-o,--out", op_out, "result JSON path");
  opt_cmd->callback([&] {
    const auto instance = load_instance(op_instances, op_index);
    optimize::OptimizerConfig config;
    config.max_evals = op_evals;
    config.restarts = op_restarts;
    config.params_per_schedule = op_pps;
    config.seed = op_seed ? op_seed : harness::mix_seed(instance.seed, 0x0f);
    const auto axis = aux_axis_from_string(op_axis);
    const auto [result, metrics] = optimize::vcqa_run(instance, op_t, axis,
                                                      config);
    json out{{"best_params", result.best_params},
             {"best_cost", result.best_cost},
             {"eval_count", result.eval_count},
             {"converged", result.converged},
             {"err_pct", metrics.err_pct},
             {"fidelity", metrics.fidelity},
             {"final_energy", metrics.final_energy},
             {"T", op_t},
             {"aux_axis", op_axis},
             {"seed", config.seed},
             {"conventions", harness::convention_flags()}};
    if (!op_out.empty()) write_json_file(op_out, out);
    std::cout << out.dump(2) << "\n";
  });

  // ---- sweep ---------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "instance x strategy x T ensemble with aggregate emission");
  ConfigArgs sweep_args;
  sweep_args.add_to(*sweep);
  bool sweep_quiet = false;
  sweep->add_flag("--quiet", sweep_quiet, "suppress progress lines");
  sweep->callback([&] {
    const auto config = sweep_args.resolve();
    const auto records = harness::run_sweep(config, !sweep_quiet);
    const fs::path dir(config.output_dir);
    harness::emit_records(records, dir / "records.json");
    harness::emit_aggregates(harness::aggregate(records),
                             dir / "aggregates.csv");
    harness::emit_manifest(config, dir / "manifest.json");
    std::cout << "wrote " << records.size() << " records under "
              << dir.string() << "\n";
  });

  // ---- gap -----------------------------------------------------------------
  auto* gap = app.add_subcommand(
      "gap", "ensemble-averaged instantaneous gap profiles per strategy");
  ConfigArgs gap_args;
  gap_args.add_to(*gap);
  gap->callback([&] {
    auto config = gap_args.resolve();
    const auto profiles = harness::run_gap_study(config, true);
    std::vector<std::uint64_t> seeds;
    for (int k = 0; k < config.instance_count; ++k)
      seeds.push_back(harness::mix_seed(config.master_seed, k));
    const fs::path dir(config.output_dir);
    for (const auto& profile : profiles)
      harness::emit_gap_profile(profile, seeds,
                                dir / ("gap_" + profile.strategy + ".csv"));
    harness::emit_manifest(config, dir / "manifest.json");
    std::cout << "wrote " << profiles.size() << " profiles under "
              << dir.string() << "\n";
  });

  // ---- annealtime ------------------------------------------------------------
  auto* at = app.add_subcommand(
      "annealtime", "annealing-time report from a stored trajectory");
  std::string at_traj, at_out;
  at->add_option("--trajectory", at_traj, "trajectory JSON from anneal")
      ->required();
  at->add_option("-o,--out", at_out, "report JSON path");
  at->callback([&] {
    const auto [traj, setup] =
        harness::trajectory_from_json(read_json_file(at_traj));
    const auto report = annealtime::annealing_time_prediction(traj, setup);
    const json out = harness::annealtime_report_to_json(report);
    if (!at_out.empty()) write_json_file(at_out, out);
    std::cout << out.dump(2) << "\n";
  });

  // ---- schedule ---------------------------------------------------------------
  auto* sched = app.add_subcommand("schedule", "schedule utilities");
  auto* dump = sched->add_subcommand("dump", "emit (x, F1, F2, F3) CSV");
  std::string sd_params, sd_out = "schedule.csv";
  int sd_grid = 201, sd_pps = 2;
  bool sd_ramp = false, sd_aux = true;
  dump->add_flag("--ramp", sd_ramp, "dump the exact linear ramp");
  dump->add_option("--params", sd_params, "comma-separated parameters");
  dump->add_option("--params-per-schedule", sd_pps, "knots per schedule");
  dump->add_flag("--with-aux,!--no-aux", sd_aux,
                 "whether the parameter vector carries an F3 block");
  dump->add_option("--grid", sd_grid, "number of grid points");
  dump->add_option("-o,--out", sd_out, "output CSV");
  dump->callback([&] {
    schedule::ScheduleSet set;
    if (sd_ramp) {
      set = schedule::ramp_profile();
    } else {
      optimize::OptimizerConfig opt;
      opt.params_per_schedule = sd_pps;
      set = optimize::schedules_from_params(
          parse_param_list(sd_params), opt,
          sd_aux ? AuxAxis::z : AuxAxis::none);
    }
    std::ostringstream csv;
    csv << "x,F1,F2,F3\n";
    csv.precision(17);
    for (int i = 0; i < sd_grid; ++i) {
      const double x = static_cast<double>(i) / (sd_grid - 1);
      csv << x << ',' << set.f1.value(x) << ',' << set.f2.value(x) << ','
          << set.f3.value(x) << '\n';
    }
    fs::path p(sd_out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << csv.str();
    std::cout << "wrote " << sd_out << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
