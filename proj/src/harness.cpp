#include "vcqa/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace vcqa::harness {

namespace fs = std::filesystem;

Strategy strategy_from_string(const std::string& name) {
  if (name == "ramp") return {Strategy::Kind::ramp, AuxAxis::none};
  if (name == "vcqa-no-aux") return {Strategy::Kind::vcqa, AuxAxis::none};
  if (name == "vcqa-x") return {Strategy::Kind::vcqa, AuxAxis::x};
  if (name == "vcqa-y") return {Strategy::Kind::vcqa, AuxAxis::y};
  if (name == "vcqa-z") return {Strategy::Kind::vcqa, AuxAxis::z};
  throw std::invalid_argument("unknown strategy: " + name);
}

std::string to_string(const Strategy& s) {
  if (s.kind == Strategy::Kind::ramp) return "ramp";
  return s.axis == AuxAxis::none ? "vcqa-no-aux"
                                 : "vcqa-" + to_string(s.axis);
}

json convention_flags() {
  return json{{"hermite_h3", "sign-corrected"},
              {"endpoint_slopes", "zero"},
              {"qubit_order", "qubit 1 is the most significant bit"},
              {"annealtime_boundary_term", "computed explicitly"},
              {"annealtime_initial_expectation", "included in the numerator"},
              {"integrator", "midpoint exponential, Krylov action"}};
}

void ExperimentConfig::validate() const {
  if (instance_count < 1)
    throw std::invalid_argument("config: instance_count must be >= 1");
  if (sizes.empty()) throw std::invalid_argument("config: sizes empty");
  if (strategies.empty())
    throw std::invalid_argument("config: strategies empty");
  if (t_grid.empty()) throw std::invalid_argument("config: T grid empty");
  double prev = 0.0;
  for (double t : t_grid) {
    if (!(t > 0.0) || t <= prev)
      throw std::invalid_argument("config: T grid must be positive ascending");
    prev = t;
  }
}

namespace {

json integrator_to_json(const evolve::IntegratorOptions& o) {
  return json{{"dt", o.dt},
              {"tolerance", o.tolerance},
              {"max_refinements", o.max_refinements},
              {"n_samples", o.n_samples},
              {"krylov_tol", o.krylov_tol},
              {"krylov_max_dim", o.krylov_max_dim}};
}

evolve::IntegratorOptions integrator_from_json(const json& j) {
  evolve::IntegratorOptions o;
  o.dt = j.value("dt", o.dt);
  o.tolerance = j.value("tolerance", o.tolerance);
  o.max_refinements = j.value("max_refinements", o.max_refinements);
  o.n_samples = j.value("n_samples", o.n_samples);
  o.krylov_tol = j.value("krylov_tol", o.krylov_tol);
  o.krylov_max_dim = j.value("krylov_max_dim", o.krylov_max_dim);
  return o;
}

json optimizer_to_json(const optimize::OptimizerConfig& o) {
  return json{{"max_evals", o.max_evals},
              {"restarts", o.restarts},
              {"simplex_scale", o.simplex_scale},
              {"f_tol", o.f_tol},
              {"x_tol", o.x_tol},
              {"seed", o.seed},
              {"params_per_schedule", o.params_per_schedule},
              {"f1_bounds", {o.f1_bounds.lo, o.f1_bounds.hi}},
              {"f2_bounds", {o.f2_bounds.lo, o.f2_bounds.hi}},
              {"f3_bounds", {o.f3_bounds.lo, o.f3_bounds.hi}},
              {"integrator", integrator_to_json(o.integrator)}};
}

optimize::OptimizerConfig optimizer_from_json(const json& j) {
  optimize::OptimizerConfig o;
  o.max_evals = j.value("max_evals", o.max_evals);
  o.restarts = j.value("restarts", o.restarts);
  o.simplex_scale = j.value("simplex_scale", o.simplex_scale);
  o.f_tol = j.value("f_tol", o.f_tol);
  o.x_tol = j.value("x_tol", o.x_tol);
  o.seed = j.value("seed", o.seed);
  o.params_per_schedule = j.value("params_per_schedule", o.params_per_schedule);
  auto bounds = [&](const char* key, optimize::Bounds& b) {
    if (j.contains(key)) {
      b.lo = j.at(key).at(0).get<double>();
      b.hi = j.at(key).at(1).get<double>();
    }
  };
  bounds("f1_bounds", o.f1_bounds);
  bounds("f2_bounds", o.f2_bounds);
  bounds("f3_bounds", o.f3_bounds);
  if (j.contains("integrator"))
    o.integrator = integrator_from_json(j.at("integrator"));
  return o;
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json strategies = json::array();
  for (const auto& s : c.strategies) strategies.push_back(to_string(s));
  return json{{"connectivity", to_string(c.connectivity)},
              {"sizes", c.sizes},
              {"instance_count", c.instance_count},
              {"master_seed", c.master_seed},
              {"t_grid", c.t_grid},
              {"strategies", strategies},
              {"params_per_schedule", c.params_per_schedule},
              {"range", to_string(c.range)},
              {"heisenberg",
               {{"omega", c.heisenberg.omega},
                {"g", c.heisenberg.g},
                {"delta", c.heisenberg.delta}}},
              {"epsilon", c.epsilon},
              {"optimizer", optimizer_to_json(c.optimizer)},
              {"integrator", integrator_to_json(c.integrator)},
              {"output_dir", c.output_dir},
              {"gap_grid_points", c.gap_grid_points},
              {"gap_total_time", c.gap_total_time}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("connectivity"))
    c.connectivity = connectivity_from_string(j.at("connectivity"));
  c.sizes = j.value("sizes", c.sizes);
  c.instance_count = j.value("instance_count", c.instance_count);
  c.master_seed = j.value("master_seed", c.master_seed);
  c.t_grid = j.value("t_grid", c.t_grid);
  if (j.contains("strategies")) {
    c.strategies.clear();
    for (const auto& s : j.at("strategies"))
      c.strategies.push_back(strategy_from_string(s.get<std::string>()));
  }
  c.params_per_schedule = j.value("params_per_schedule", c.params_per_schedule);
  if (j.contains("range"))
    c.range = draw_range_from_string(j.at("range").get<std::string>());
  if (j.contains("heisenberg")) {
    const auto& h = j.at("heisenberg");
    c.heisenberg.omega = h.value("omega", c.heisenberg.omega);
    c.heisenberg.g = h.value("g", c.heisenberg.g);
    c.heisenberg.delta = h.value("delta", c.heisenberg.delta);
  }
  c.epsilon = j.value("epsilon", c.epsilon);
  if (j.contains("optimizer"))
    c.optimizer = optimizer_from_json(j.at("optimizer"));
  if (j.contains("integrator"))
    c.integrator = integrator_from_json(j.at("integrator"));
  c.output_dir = j.value("output_dir", c.output_dir);
  c.gap_grid_points = j.value("gap_grid_points", c.gap_grid_points);
  c.gap_total_time = j.value("gap_total_time", c.gap_total_time);
  c.optimizer.params_per_schedule = c.params_per_schedule;
  c.validate();
  return c;
}

std::uint64_t config_hash(const json& j) {
  const std::string dump = j.dump();  // nlohmann keeps keys sorted
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

json record_to_json(const ResultRecord& r) {
  return json{{"instance_index", r.instance_index},
              {"instance_seed", r.instance_seed},
              {"n_qubits", r.n_qubits},
              {"T", r.total_time},
              {"strategy", r.strategy},
              {"ok", r.ok},
              {"failure_reason", r.failure_reason},
              {"err_pct", r.err_pct},
              {"fidelity", r.fidelity},
              {"final_energy", r.final_energy},
              {"ground_energy", r.ground_energy},
              {"best_params", r.best_params},
              {"eval_count", r.eval_count},
              {"wall_seconds", r.wall_seconds},
              {"conventions", convention_flags()}};
}

ResultRecord record_from_json(const json& j) {
  ResultRecord r;
  r.instance_index = j.at("instance_index");
  r.instance_seed = j.at("instance_seed");
  r.n_qubits = j.at("n_qubits");
  r.total_time = j.at("T");
  r.strategy = j.at("strategy");
  r.ok = j.at("ok");
  r.failure_reason = j.value("failure_reason", "");
  r.err_pct = j.at("err_pct");
  r.fidelity = j.at("fidelity");
  r.final_energy = j.at("final_energy");
  r.ground_energy = j.at("ground_energy");
  r.best_params = j.at("best_params").get<std::vector<double>>();
  r.eval_count = j.at("eval_count");
  r.wall_seconds = j.at("wall_seconds");
  return r;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& records) {
  std::map<std::tuple<int, double, std::string>, AggregateRow> rows;
  for (const auto& r : records) {
    auto& row = rows[{r.n_qubits, r.total_time, r.strategy}];
    row.n_qubits = r.n_qubits;
    row.total_time = r.total_time;
    row.strategy = r.strategy;
    if (r.ok) {
      row.mean_err_pct += r.err_pct;
      row.mean_fidelity += r.fidelity;
      ++row.n_ok;
    } else {
      ++row.n_fail;
    }
  }
  std::vector<AggregateRow> out;
  out.reserve(rows.size());
  for (auto& [key, row] : rows) {
    if (row.n_ok > 0) {
      row.mean_err_pct /= row.n_ok;
      row.mean_fidelity /= row.n_ok;
    }
    out.push_back(std::move(row));
  }
  return out;
}

namespace {

ResultRecord run_single(const ProblemInstance& instance, int instance_index,
                        double total_time, const Strategy& strategy,
                        const ExperimentConfig& config) {
  ResultRecord record;
  record.instance_index = instance_index;
  record.instance_seed = instance.seed;
  record.n_qubits = instance.n_qubits;
  record.total_time = total_time;
  record.strategy = to_string(strategy);

  const auto start = std::chrono::steady_clock::now();
  try {
    if (strategy.kind == Strategy::Kind::ramp) {
      const auto setup = make_setup(instance, schedule::ramp_profile(),
                                    total_time, AuxAxis::none, config.epsilon);
      const auto ground = ground_state(setup.h_final);
      const auto metrics = evolve::evaluate_run(setup, ground, config.integrator);
      record.err_pct = metrics.err_pct;
      record.fidelity = metrics.fidelity;
      record.final_energy = metrics.final_energy;
      record.ground_energy = ground.energy;
    } else {
      optimize::OptimizerConfig opt = config.optimizer;
      opt.params_per_schedule = config.params_per_schedule;
      opt.epsilon = config.epsilon;
      opt.seed = mix_seed(instance.seed, 0x0f);
      auto [result, metrics] = optimize::vcqa_run(
          instance, total_time, strategy.axis, opt, config.integrator);
      record.err_pct = metrics.err_pct;
      record.fidelity = metrics.fidelity;
      record.final_energy = metrics.final_energy;
      record.ground_energy =
          ground_state(final_hamiltonian(instance)).energy;
      record.best_params = std::move(result.best_params);
      record.eval_count = result.eval_count;
    }
    record.ok = true;
  } catch (const std::exception& e) {
    record.ok = false;
    record.failure_reason = e.what();
  }
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

}  // namespace

std::vector<ResultRecord> run_sweep(const ExperimentConfig& config,
                                    bool verbose) {
  config.validate();

  struct Task {
    ProblemInstance instance;
    int instance_index;
    double total_time;
    Strategy strategy;
  };
  std::vector<Task> tasks;
  for (int n : config.sizes) {
    const auto instances = generate_instances(
        config.connectivity, n, config.instance_count, config.master_seed,
        config.range,
        config.connectivity == Connectivity::heisenberg
            ? std::optional<HeisenbergParams>(config.heisenberg)
            : std::nullopt);
    for (double t : config.t_grid)
      for (std::size_t k = 0; k < instances.size(); ++k)
        for (const auto& strategy : config.strategies)
          tasks.push_back({instances[k], static_cast<int>(k), t, strategy});
  }

  std::vector<ResultRecord> records(tasks.size());
  std::atomic<int> done{0};
  parallel_for(static_cast<int>(tasks.size()), worker_count(), [&](int i) {
    const auto& task = tasks[static_cast<std::size_t>(i)];
    records[static_cast<std::size_t>(i)] =
        run_single(task.instance, task.instance_index, task.total_time,
                   task.strategy, config);
    const int finished = ++done;
    if (verbose) {
      std::ostringstream line;
      line << "[" << finished << "/" << tasks.size() << "] N="
           << task.instance.n_qubits << " T=" << task.total_time << " "
           << to_string(task.strategy) << " #" << task.instance_index
           << (records[static_cast<std::size_t>(i)].ok ? "" : " FAILED")
           << '\n';
      std::cerr << line.str();
    }
  });
  return records;
}

std::vector<spectrum::GapProfile> run_gap_study(const ExperimentConfig& config,
                                                bool verbose) {
  config.validate();
  const int n = config.sizes.front();
  const auto instances =
      generate_instances(config.connectivity, n, config.instance_count,
                         config.master_seed, config.range);
  const auto grid = spectrum::uniform_grid(config.gap_grid_points);

  std::vector<spectrum::GapProfile> out;
  for (const auto& strategy : config.strategies) {
    if (verbose)
      std::cerr << "gap study: strategy " << to_string(strategy) << '\n';
    std::vector<spectrum::GapProfile> per_instance(instances.size());
    parallel_for(
        static_cast<int>(instances.size()), worker_count(), [&](int i) {
          const auto& instance = instances[static_cast<std::size_t>(i)];
          schedule::ScheduleSet schedules;
          AuxAxis axis = AuxAxis::none;
          if (strategy.kind == Strategy::Kind::ramp) {
            schedules = schedule::ramp_profile();
          } else {
            axis = strategy.axis;
            optimize::OptimizerConfig opt = config.optimizer;
            opt.params_per_schedule = config.params_per_schedule;
            opt.epsilon = config.epsilon;
            opt.seed = mix_seed(instance.seed, 0x0f);
            const auto result = optimize::minimize(
                instance, config.gap_total_time, axis, opt);
            schedules = optimize::schedules_from_params(result.best_params,
                                                        opt, axis);
          }
          const auto setup = make_setup(instance, schedules,
                                        config.gap_total_time, axis,
                                        config.epsilon);
          per_instance[static_cast<std::size_t>(i)] =
              spectrum::gap_profile(setup, grid, to_string(strategy));
        });
    auto mean = spectrum::average_gap_profile(per_instance);
    mean.strategy = to_string(strategy);
    out.push_back(std::move(mean));
  }
  return out;
}

ResultRecord replay(const ResultRecord& record,
                    const ExperimentConfig& config) {
  const auto instances = generate_instances(
      config.connectivity, record.n_qubits, record.instance_index + 1,
      config.master_seed, config.range,
      config.connectivity == Connectivity::heisenberg
          ? std::optional<HeisenbergParams>(config.heisenberg)
          : std::nullopt);
  const auto& instance = instances.back();
  if (instance.seed != record.instance_seed)
    throw std::runtime_error("replay: seed mismatch, config differs from the "
                             "one that produced the record");
  const Strategy strategy = strategy_from_string(record.strategy);

  ResultRecord out = record;
  if (strategy.kind == Strategy::Kind::ramp) {
    return run_single(instance, record.instance_index, record.total_time,
                      strategy, config);
  }
  // Replay the stored parameters directly; the optimizer path is covered by
  // determinism of minimize itself.
  optimize::OptimizerConfig opt = config.optimizer;
  opt.params_per_schedule = config.params_per_schedule;
  const auto schedules =
      optimize::schedules_from_params(record.best_params, opt, strategy.axis);
  const auto setup = make_setup(instance, schedules, record.total_time,
                                strategy.axis, config.epsilon);
  const auto ground = ground_state(setup.h_final);
  const auto metrics = evolve::evaluate_run(setup, ground, config.integrator);
  out.err_pct = metrics.err_pct;
  out.fidelity = metrics.fidelity;
  out.final_energy = metrics.final_energy;
  out.ground_energy = ground.energy;
  return out;
}

// ---- file emission ------------------------------------------------------

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string format_double(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

void emit_records(const std::vector<ResultRecord>& records,
                  const fs::path& path) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  write_text(path, arr.dump(2) + "\n");
}

std::vector<ResultRecord> load_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json arr = json::parse(in);
  std::vector<ResultRecord> records;
  for (const auto& j : arr) records.push_back(record_from_json(j));
  return records;
}

void emit_aggregates(const std::vector<AggregateRow>& rows,
                     const fs::path& path) {
  std::ostringstream csv;
  csv << "N,T,strategy,mean_err_pct,mean_fidelity,n_ok,n_fail\n";
  for (const auto& row : rows)
    csv << row.n_qubits << ',' << format_double(row.total_time) << ','
        << row.strategy << ',' << format_double(row.mean_err_pct) << ','
        << format_double(row.mean_fidelity) << ',' << row.n_ok << ','
        << row.n_fail << '\n';
  write_text(path, csv.str());
}

void emit_gap_profile(const spectrum::GapProfile& profile,
                      const std::vector<std::uint64_t>& seeds,
                      const fs::path& path) {
  std::ostringstream csv;
  csv << "# strategy=" << profile.strategy << " instances=" << seeds.size()
      << " seeds=";
  for (std::size_t i = 0; i < seeds.size(); ++i)
    csv << (i ? "," : "") << seeds[i];
  csv << "\ns,gap\n";
  for (std::size_t i = 0; i < profile.grid.size(); ++i)
    csv << format_double(profile.grid[i]) << ','
        << format_double(profile.gaps[i]) << '\n';
  write_text(path, csv.str());
}

void emit_manifest(const ExperimentConfig& config, const fs::path& path) {
  const json cfg = config_to_json(config);
  std::vector<std::uint64_t> seeds;
  seeds.reserve(config.instance_count);
  for (int k = 0; k < config.instance_count; ++k)
    seeds.push_back(mix_seed(config.master_seed, k));
  json manifest{{"config", cfg},
                {"config_hash", config_hash(cfg)},
                {"instance_seeds", seeds},
                {"version", kVersion},
                {"conventions", convention_flags()}};
  write_text(path, manifest.dump(2) + "\n");
}

json instance_to_json(const ProblemInstance& instance) {
  json couplings = json::array();
  for (const auto& e : instance.couplings)
    couplings.push_back({{"i", e.i}, {"j", e.j}, {"g", e.g}});
  json j{{"connectivity", to_string(instance.connectivity)},
         {"N", instance.n_qubits},
         {"seed", instance.seed},
         {"omegas", instance.omegas},
         {"couplings", couplings}};
  if (instance.heisenberg)
    j["heisenberg"] = {{"omega", instance.heisenberg->omega},
                       {"g", instance.heisenberg->g},
                       {"delta", instance.heisenberg->delta}};
  return j;
}

ProblemInstance instance_from_json(const json& j) {
  ProblemInstance instance;
  instance.connectivity = connectivity_from_string(j.at("connectivity"));
  instance.n_qubits = j.at("N");
  instance.seed = j.at("seed");
  instance.omegas = j.at("omegas").get<std::vector<double>>();
  for (const auto& edge : j.at("couplings"))
    instance.couplings.push_back(
        {edge.at("i").get<int>(), edge.at("j").get<int>(),
         edge.at("g").get<double>()});
  if (j.contains("heisenberg")) {
    const auto& h = j.at("heisenberg");
    instance.heisenberg =
        HeisenbergParams{h.at("omega"), h.at("g"), h.at("delta")};
  }
  instance.validate();
  return instance;
}

void emit_instances(const std::vector<ProblemInstance>& instances,
                    const fs::path& path) {
  json arr = json::array();
  for (const auto& inst : instances) arr.push_back(instance_to_json(inst));
  write_text(path, arr.dump(2) + "\n");
}

std::vector<ProblemInstance> load_instances(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json arr = json::parse(in);
  std::vector<ProblemInstance> instances;
  for (const auto& j : arr) instances.push_back(instance_from_json(j));
  return instances;
}

json trajectory_to_json(const evolve::Trajectory& traj,
                        const ProblemInstance& instance, double total_time,
                        AuxAxis axis, const std::vector<double>& params,
                        bool ramp, int params_per_schedule, double epsilon) {
  return json{{"instance", instance_to_json(instance)},
              {"T", total_time},
              {"epsilon", epsilon},
              {"aux_axis", to_string(axis)},
              {"ramp", ramp},
              {"params", params},
              {"params_per_schedule", params_per_schedule},
              {"times", traj.times},
              {"exp_initial", traj.exp_initial},
              {"exp_final", traj.exp_final},
              {"exp_aux", traj.exp_aux},
              {"comm_fi", traj.comm_fi},
              {"comm_ai", traj.comm_ai},
              {"comm_af", traj.comm_af},
              {"norms", traj.norms},
              {"dt_used", traj.dt_used},
              {"refinements", traj.refinements},
              {"conventions", convention_flags()}};
}

void emit_trajectory_csv(const evolve::Trajectory& traj,
                         const fs::path& path) {
  std::ostringstream csv;
  csv << "t,exp_initial,exp_final,exp_aux,norm\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    csv << format_double(traj.times[i]) << ','
        << format_double(traj.exp_initial[i]) << ','
        << format_double(traj.exp_final[i]) << ','
        << format_double(traj.exp_aux[i]) << ','
        << format_double(traj.norms[i]) << '\n';
  write_text(path, csv.str());
}

std::pair<evolve::Trajectory, AnnealSetup> trajectory_from_json(const json& j) {
  const ProblemInstance instance = instance_from_json(j.at("instance"));
  const double total_time = j.at("T");
  const double epsilon = j.value("epsilon", 1.0);
  const AuxAxis axis = aux_axis_from_string(j.at("aux_axis"));
  const bool ramp = j.value("ramp", false);

  schedule::ScheduleSet schedules;
  if (ramp) {
    schedules = schedule::ramp_profile();
  } else {
    optimize::OptimizerConfig opt;
    opt.params_per_schedule = j.at("params_per_schedule");
    schedules = optimize::schedules_from_params(
        j.at("params").get<std::vector<double>>(), opt, axis);
  }
  AnnealSetup setup = make_setup(instance, schedules, total_time, axis, epsilon);

  evolve::Trajectory traj;
  traj.times = j.at("times").get<std::vector<double>>();
  traj.exp_initial = j.at("exp_initial").get<std::vector<double>>();
  traj.exp_final = j.at("exp_final").get<std::vector<double>>();
  traj.exp_aux = j.at("exp_aux").get<std::vector<double>>();
  traj.comm_fi = j.at("comm_fi").get<std::vector<double>>();
  traj.comm_ai = j.at("comm_ai").get<std::vector<double>>();
  traj.comm_af = j.at("comm_af").get<std::vector<double>>();
  traj.norms = j.at("norms").get<std::vector<double>>();
  traj.total_time = total_time;
  traj.dt_used = j.value("dt_used", 0.0);
  traj.refinements = j.value("refinements", 0);
  return {std::move(traj), std::move(setup)};
}

json annealtime_report_to_json(const annealtime::AnnealTimeReport& r) {
  return json{{"t_actual", r.t_actual},
              {"t_predicted", r.t_predicted},
              {"coefficient_c", r.coefficient_c},
              {"denominator", r.denominator},
              {"boundary_term_tf", r.boundary_term_tf},
              {"boundary_term_t0", r.boundary_term_t0},
              {"numerator", r.numerator},
              {"residual", r.residual},
              {"reduced_form", r.reduced_form},
              {"numerator_dropped_terms", r.numerator_dropped_terms},
              {"t_predicted_dropped_terms", r.t_predicted_dropped_terms},
              {"conventions", convention_flags()}};
}

int worker_count() {
  if (const char* env = std::getenv("VCQA_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  workers = std::clamp(workers, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace vcqa::harness
