#pragma once

#include <span>
#include <string>
#include <vector>

#include "vralloc/agents.hpp"
#include "vralloc/config.hpp"
#include "vralloc/game.hpp"
#include "vralloc/metrics.hpp"

namespace vralloc {

struct SweepRow {
    int num_sbs = 0;
    std::string learner;
    double mean_delay_s = 0.0;
    double std_delay_s = 0.0;
    int replications = 0;
};

struct ConvergenceCurvePoint {
    std::string learner;
    int iteration = 0;
    double utility = 0.0;
};

struct ConvergenceRunRow {
    std::string learner;
    int replication = 0;
    int iterations_to_converge = 0;
};

struct ConvergenceResult {
    std::vector<ConvergenceCurvePoint> curve;  // mean over replications
    std::vector<ConvergenceRunRow> runs;
};

struct NeCheckReport {
    int players = 0;
    double oracle_worst_gain = 0.0;
    double empirical_worst_gain = 0.0;
    std::vector<MixedStrategy> oracle_profile;
    std::vector<MixedStrategy> empirical_profile;
    std::vector<std::vector<int>> action_counts_played;  // per player, per action
};

/// First iteration (1-based) whose trailing smoothed utility reaches within
/// `tolerance` of the mean over the final `final_window` entries; trace
/// length when it never does.
int iterations_to_converge(std::span<const double> trace, int final_window = 100,
                           double tolerance = 0.05, int smooth_window = 20);

/// One seeded replication: topology, content, then periods of the slot game
/// with channel redraws each period and content/correlation redraws at the
/// scheduled change events. Deterministic given (config, replication index).
MetricsRecord run_replication(const ExperimentConfig& config, int replication_index);

/// All replications, in parallel, bit-identical to serial execution.
std::vector<MetricsRecord> run_replications(const ExperimentConfig& config);

std::vector<SweepRow> sweep_sbs_count(const ExperimentConfig& base,
                                      const std::vector<int>& sbs_values,
                                      const std::vector<LearnerKind>& learners);

/// Per-learner utility trace after the last scheduled change event (from the
/// run start when the schedule is empty), plus per-replication iteration
/// counts.
ConvergenceResult convergence_experiment(const ExperimentConfig& config,
                                         const std::vector<LearnerKind>& learners);

/// Deterministic two-cell toy game: solves it exactly, runs ESN self-play,
/// and reports the worst deviation gain of both profiles.
NeCheckReport ne_check(const ExperimentConfig& config);

void export_metrics(const std::vector<MetricsRecord>& records, const ExperimentConfig& config,
                    const std::string& dir);
void export_sweep(const std::vector<SweepRow>& rows, const ExperimentConfig& config,
                  const std::string& dir);
void export_convergence(const ConvergenceResult& result, const ExperimentConfig& config,
                        const std::string& dir);

}  // namespace vralloc
