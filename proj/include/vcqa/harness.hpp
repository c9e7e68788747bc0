#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vcqa/annealtime.hpp"
#include "vcqa/evolve.hpp"
#include "vcqa/instances.hpp"
#include "vcqa/optimize.hpp"
#include "vcqa/spectrum.hpp"

namespace vcqa::harness {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Run strategy: the plain ramp baseline or the variational protocol with a
/// chosen auxiliary axis ("vcqa-no-aux" optimizes four parameters).
struct Strategy {
  enum class Kind { ramp, vcqa };
  Kind kind = Kind::ramp;
  AuxAxis axis = AuxAxis::none;
};

Strategy strategy_from_string(const std::string& name);
std::string to_string(const Strategy& s);

/// Fixed implementation conventions, stamped into every output so results
/// are interpretable without the code.
json convention_flags();

struct ExperimentConfig {
  Connectivity connectivity = Connectivity::linear;
  std::vector<int> sizes = {2, 4, 7, 10};
  int instance_count = 20;
  std::uint64_t master_seed = 1;
  std::vector<double> t_grid = {5.0};
  std::vector<Strategy> strategies = {strategy_from_string("ramp"),
                                      strategy_from_string("vcqa-z")};
  int params_per_schedule = 2;
  DrawRange range = DrawRange::half_open_unit;
  HeisenbergParams heisenberg{};
  double epsilon = 1.0;
  optimize::OptimizerConfig optimizer;
  evolve::IntegratorOptions integrator;  ///< scoring integrator
  std::string output_dir = "out";
  int gap_grid_points = 101;   ///< gap-study grid resolution
  double gap_total_time = 1.0; ///< anneal time used when optimizing gap-study schedules

  void validate() const;
};

json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const json& j);

/// FNV-1a over the canonical (sorted-key) dump; changes iff content changes.
std::uint64_t config_hash(const json& j);

/// One finished run.
struct ResultRecord {
  int instance_index = 0;
  std::uint64_t instance_seed = 0;
  int n_qubits = 0;
  double total_time = 0.0;
  std::string strategy;
  bool ok = false;
  std::string failure_reason;
  double err_pct = 0.0;
  double fidelity = 0.0;
  double final_energy = 0.0;
  double ground_energy = 0.0;
  std::vector<double> best_params;  ///< empty for the ramp strategy
  int eval_count = 0;
  double wall_seconds = 0.0;
};

json record_to_json(const ResultRecord& r);
ResultRecord record_from_json(const json& j);

struct AggregateRow {
  int n_qubits = 0;
  double total_time = 0.0;
  std::string strategy;
  double mean_err_pct = 0.0;
  double mean_fidelity = 0.0;
  int n_ok = 0;
  int n_fail = 0;
};

/// Exact arithmetic means over the ok records, keyed by (N, T, strategy).
std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& records);

/// Every (size, T, instance, strategy) combination of the config. Failures
/// are recorded with their reason, never dropped.
std::vector<ResultRecord> run_sweep(const ExperimentConfig& config,
                                    bool verbose = false);

/// Ensemble-averaged gap profiles per strategy on the fully connected
/// 4-site study (or whatever the config describes).
std::vector<spectrum::GapProfile> run_gap_study(const ExperimentConfig& config,
                                                bool verbose = false);

/// Re-run one record from its seeds and config; used by the replay check.
ResultRecord replay(const ResultRecord& record, const ExperimentConfig& config);

// ---- file emission ----------------------------------------------------

void emit_records(const std::vector<ResultRecord>& records,
                  const std::filesystem::path& path);
std::vector<ResultRecord> load_records(const std::filesystem::path& path);

/// CSV columns: N,T,strategy,mean_err_pct,mean_fidelity,n_ok,n_fail.
void emit_aggregates(const std::vector<AggregateRow>& rows,
                     const std::filesystem::path& path);

/// CSV columns (s, gap) with instance count and seed list in a header
/// comment.
void emit_gap_profile(const spectrum::GapProfile& profile,
                      const std::vector<std::uint64_t>& seeds,
                      const std::filesystem::path& path);

void emit_manifest(const ExperimentConfig& config,
                   const std::filesystem::path& path);

/// Instance file I/O; doubles round-trip bit-exactly.
json instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const json& j);
void emit_instances(const std::vector<ProblemInstance>& instances,
                    const std::filesystem::path& path);
std::vector<ProblemInstance> load_instances(const std::filesystem::path& path);

/// Trajectory record with enough provenance to rebuild the schedules.
json trajectory_to_json(const evolve::Trajectory& traj,
                        const ProblemInstance& instance, double total_time,
                        AuxAxis axis, const std::vector<double>& params,
                        bool ramp, int params_per_schedule, double epsilon);
void emit_trajectory_csv(const evolve::Trajectory& traj,
                         const std::filesystem::path& path);

/// Rebuilds (trajectory, setup) from a stored trajectory record.
std::pair<evolve::Trajectory, AnnealSetup> trajectory_from_json(const json& j);

json annealtime_report_to_json(const annealtime::AnnealTimeReport& report);

/// Worker count: the VCQA_WORKERS environment variable, else the hardware
/// concurrency.
int worker_count();

/// Runs fn(0..count-1) on a bounded pool; results must go to disjoint slots.
void parallel_for(int count, int workers,
                  const std::function<void(int)>& fn);

}  // namespace vcqa::harness
