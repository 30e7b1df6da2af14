#include "vralloc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "vralloc/qos.hpp"
#include "vralloc/rng.hpp"

namespace vralloc {

int iterations_to_converge(std::span<const double> trace, int final_window, double tolerance,
                           int smooth_window) {
    const int n = static_cast<int>(trace.size());
    if (n == 0) return 0;
    const int fw = std::min(final_window, n);
    double target = 0.0;
    for (int i = n - fw; i < n; ++i) target += trace[i];
    target /= fw;
    const double band = tolerance * std::max(std::abs(target), 1e-3);

    // A full trailing window is required before the first test, so a lucky
    // opening slot cannot report instant convergence.
    double window_sum = 0.0;
    for (int t = 0; t < n; ++t) {
        window_sum += trace[t];
        if (t >= smooth_window) window_sum -= trace[t - smooth_window];
        if (t + 1 < std::min(smooth_window, n)) continue;
        const int w = std::min(t + 1, smooth_window);
        if (window_sum / w >= target - band) return t + 1;
    }
    return n;
}

namespace {

bool is_esn(LearnerKind kind) {
    return kind == LearnerKind::EsnTransfer || kind == LearnerKind::EsnPlain;
}

struct CellAggregate {
    double avg_dl = 0.0;
    double avg_ul = 0.0;
    int feasible = 0;
    int infeasible = 0;
};

CellAggregate aggregate_cell(const std::vector<UserSlotOutcome>& outcomes) {
    CellAggregate agg;
    double dl_sum = 0.0, ul_sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.dl_feasible && o.ul_feasible) {
            dl_sum += o.dl_delay_s;
            ul_sum += o.ul_delay_s;
            ++agg.feasible;
        } else {
            ++agg.infeasible;
        }
    }
    if (agg.feasible > 0) {
        agg.avg_dl = dl_sum / agg.feasible;
        agg.avg_ul = ul_sum / agg.feasible;
    }
    return agg;
}

}  // namespace

MetricsRecord run_replication(const ExperimentConfig& config, int replication_index) {
    config.validate();
    const std::uint64_t rep_seed =
        derive_seed(config.seed, Stream::Misc, {static_cast<std::uint64_t>(replication_index)});

    Topology topo = generate_topology(config.net, rep_seed);
    assign_content(topo, config.content, rep_seed);
    int change_count = 0;
    ContentModel content =
        synthesize_overlap(topo, config.content, derive_seed(rep_seed, Stream::Overlap, {0}));

    const int num_sbs = config.net.num_sbs;
    std::vector<ActionSet> sets;
    sets.reserve(num_sbs);
    for (int j = 0; j < num_sbs; ++j) {
        sets.push_back(enumerate_actions(j, topo, config.net, config.action_cap, rep_seed));
    }

    const bool aware = config.learner != LearnerKind::QNoCorr;
    const bool esn = is_esn(config.learner);

    std::vector<std::unique_ptr<EsnAgent>> esn_agents(num_sbs);
    std::vector<std::unique_ptr<QAgent>> q_agents(num_sbs);
    for (int j = 0; j < num_sbs; ++j) {
        if (sets[j].actions.empty()) continue;
        if (esn) {
            esn_agents[j] = std::make_unique<EsnAgent>(
                j, num_sbs, static_cast<int>(sets[j].actions.size()),
                config.learner == LearnerKind::EsnTransfer, config.esn, rep_seed);
        } else {
            q_agents[j] = std::make_unique<QAgent>(
                static_cast<int>(sets[j].actions.size()), config.q_step_size,
                config.learner == LearnerKind::QCorr, config.esn.explore,
                derive_seed(rep_seed, Stream::Agent, {static_cast<std::uint64_t>(j), 9}));
        }
    }

    MetricsRecord rec;
    rec.per_run.replication = replication_index;
    const int covered = topo.num_covered();
    rec.per_run.covered_users = covered;
    rec.per_run.uncovered_users = config.net.num_users - covered;

    double delay_weighted_sum = 0.0;
    long feasible_total = 0;
    long infeasible_total = 0;
    int last_change_period = 0;

    int global_slot = 0;
    for (int period = 1; period <= config.periods; ++period) {
        const ChannelRealization channel = sample_channel(
            topo, config.net,
            derive_seed(rep_seed, Stream::Channel, {static_cast<std::uint64_t>(period)}));

        const bool change = std::find(config.change_schedule.begin(),
                                      config.change_schedule.end(),
                                      period) != config.change_schedule.end();
        if (change) {
            ++change_count;
            last_change_period = period;
            // Users switch content: new labels and new pixel overlaps, same
            // topology and association so every action set stays valid.
            assign_content(topo, config.content,
                           derive_seed(rep_seed, Stream::Content,
                                       {static_cast<std::uint64_t>(change_count)}));
            content = synthesize_overlap(
                topo, config.content,
                derive_seed(rep_seed, Stream::Overlap,
                            {static_cast<std::uint64_t>(change_count)}));
            for (int j = 0; j < num_sbs; ++j) {
                if (esn_agents[j]) {
                    transfer_bootstrap(*esn_agents[j],
                                       static_cast<int>(sets[j].actions.size()));
                }
                if (q_agents[j]) q_agents[j]->on_environment_change();
            }
        }

        const CorrelationState corr = max_correlations(topo, content, config.net);
        const PeriodContext ctx =
            make_period_context(topo, config.net, channel, content, corr, aware);

        for (int slot = 1; slot <= config.slots_per_period; ++slot) {
            ++global_slot;
            std::vector<int> chosen(num_sbs, -1);
            if (esn) {
                std::vector<double> observed(num_sbs, 0.0);
                for (int j = 0; j < num_sbs; ++j) {
                    if (!esn_agents[j]) continue;
                    const int idx = esn_agents[j]->begin_step(global_slot);
                    observed[j] = esn_agents[j]->normalized_index(idx);
                }
                for (int j = 0; j < num_sbs; ++j) {
                    if (esn_agents[j]) chosen[j] = esn_agents[j]->act(observed);
                }
            } else {
                for (int j = 0; j < num_sbs; ++j) {
                    if (q_agents[j]) chosen[j] = q_agents[j]->choose(global_slot);
                }
            }

            const auto cells = evaluate_all_cells(sets, chosen, ctx);
            double network_utility = 0.0;
            for (int j = 0; j < num_sbs; ++j) {
                if (sets[j].users.empty() || chosen[j] < 0) continue;
                double utility = 0.0;
                for (const auto& o : cells[j]) utility += o.utility;
                network_utility += utility;

                const CellAggregate agg = aggregate_cell(cells[j]);
                rec.per_slot.push_back({replication_index, period, global_slot, j, utility,
                                        agg.avg_dl, agg.avg_ul, agg.feasible, agg.infeasible});
                // The run-level delay is the steady-state figure: only the
                // second half of each period counts, after exploration has
                // decayed. Infeasible slots are tallied over the whole run.
                if (slot > config.slots_per_period / 2) {
                    delay_weighted_sum += (agg.avg_dl + agg.avg_ul) * agg.feasible;
                    feasible_total += agg.feasible;
                }
                infeasible_total += agg.infeasible;

                if (esn_agents[j]) esn_agents[j]->finish_step(utility);
                if (q_agents[j]) q_agents[j]->learn(utility);
            }
            rec.utility_trace.push_back(covered > 0 ? network_utility / covered : 0.0);
        }
    }

    rec.per_run.avg_user_delay_s =
        feasible_total > 0 ? delay_weighted_sum / static_cast<double>(feasible_total) : 0.0;
    rec.per_run.infeasible_count = infeasible_total;
    const int n_trace = static_cast<int>(rec.utility_trace.size());
    const int fw = std::min(100, n_trace);
    double final_sum = 0.0;
    for (int i = n_trace - fw; i < n_trace; ++i) final_sum += rec.utility_trace[i];
    rec.per_run.final_utility = fw > 0 ? final_sum / fw : 0.0;

    const int offset = last_change_period > 0
                           ? (last_change_period - 1) * config.slots_per_period
                           : 0;
    rec.per_run.iterations_to_converge = iterations_to_converge(
        std::span<const double>(rec.utility_trace).subspan(offset));
    return rec;
}

std::vector<MetricsRecord> run_replications(const ExperimentConfig& config) {
    const int n = config.replications;
    std::vector<MetricsRecord> results(n);
    const unsigned hw = std::thread::hardware_concurrency();
    const int workers = std::max(1, std::min<int>(n, hw ? static_cast<int>(hw) : 1));

    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                results[i] = run_replication(config, i);
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

std::vector<SweepRow> sweep_sbs_count(const ExperimentConfig& base,
                                      const std::vector<int>& sbs_values,
                                      const std::vector<LearnerKind>& learners) {
    std::vector<SweepRow> rows;
    for (int num_sbs : sbs_values) {
        for (LearnerKind learner : learners) {
            ExperimentConfig config = base;
            config.net.num_sbs = num_sbs;
            config.learner = learner;
            const auto records = run_replications(config);

            std::vector<double> delays;
            for (const auto& rec : records) {
                if (rec.per_run.covered_users > 0 && rec.per_run.avg_user_delay_s > 0.0) {
                    delays.push_back(rec.per_run.avg_user_delay_s);
                }
            }
            SweepRow row;
            row.num_sbs = num_sbs;
            row.learner = learner_name(learner);
            row.replications = static_cast<int>(delays.size());
            if (!delays.empty()) {
                const double mean =
                    std::accumulate(delays.begin(), delays.end(), 0.0) / delays.size();
                row.mean_delay_s = mean;
                if (delays.size() > 1) {
                    double ss = 0.0;
                    for (double d : delays) ss += (d - mean) * (d - mean);
                    row.std_delay_s = std::sqrt(ss / (delays.size() - 1));
                }
            }
            rows.push_back(row);
        }
    }
    return rows;
}

ConvergenceResult convergence_experiment(const ExperimentConfig& config,
                                         const std::vector<LearnerKind>& learners) {
    ConvergenceResult result;
    const int last_change =
        config.change_schedule.empty()
            ? 0
            : *std::max_element(config.change_schedule.begin(), config.change_schedule.end());
    const int offset = last_change > 0 ? (last_change - 1) * config.slots_per_period : 0;

    for (LearnerKind learner : learners) {
        ExperimentConfig cfg = config;
        cfg.learner = learner;
        const auto records = run_replications(cfg);

        std::size_t post_len = 0;
        for (const auto& rec : records) {
            post_len = std::max(post_len, rec.utility_trace.size() - offset);
        }
        std::vector<double> mean_curve(post_len, 0.0);
        for (const auto& rec : records) {
            const auto trace = std::span<const double>(rec.utility_trace).subspan(offset);
            for (std::size_t i = 0; i < trace.size(); ++i) mean_curve[i] += trace[i];
            result.runs.push_back({learner_name(learner), rec.per_run.replication,
                                   iterations_to_converge(trace)});
        }
        for (std::size_t i = 0; i < post_len; ++i) {
            result.curve.push_back({learner_name(learner), static_cast<int>(i + 1),
                                    mean_curve[i] / records.size()});
        }
    }
    return result;
}

NeCheckReport ne_check(const ExperimentConfig& config) {
    // Fixed two-cell geometry; only the channel and action sampling follow
    // the seed. Users sit well inside their own cell's coverage disk.
    NetworkConfig net = config.net;
    net.num_sbs = 2;
    net.num_users = 4;

    Topology topo;
    topo.sbs_positions = {{-25.0, 0.0}, {25.0, 0.0}};
    topo.user_positions = {{-30.0, 0.0}, {-20.0, 6.0}, {20.0, -6.0}, {30.0, 0.0}};
    topo.association =
        associate_users(topo.user_positions, topo.sbs_positions, net.sbs_coverage_radius_m);
    topo.content_id = {0, 0, 0, 0};
    topo.tracking_std.assign(4, config.content.tracking_std);
    topo.cell_users.assign(2, {});
    for (int u = 0; u < 4; ++u) {
        if (topo.association[u] != kUncovered) topo.cell_users[topo.association[u]].push_back(u);
    }

    const std::uint64_t seed = config.seed;
    const ContentModel content =
        synthesize_overlap(topo, config.content, derive_seed(seed, Stream::Overlap, {0}));
    const ChannelRealization channel = sample_channel(topo, net, seed);
    const CorrelationState corr = max_correlations(topo, content, net);
    const PeriodContext ctx = make_period_context(topo, net, channel, content, corr, true);

    const int cap = std::min(4, config.action_cap);
    std::vector<ActionSet> sets;
    for (int j = 0; j < 2; ++j) {
        sets.push_back(enumerate_actions(j, topo, net, cap, seed));
    }

    std::vector<int> player_sbs;
    const GameSpec game = make_sbs_game(sets, ctx, player_sbs);

    NeCheckReport report;
    report.players = game.players();
    report.oracle_profile = brute_force_ne(game);
    report.oracle_worst_gain = is_epsilon_ne(report.oracle_profile, game, 1e-6).worst_gain;

    // ESN self-play on the same toy game.
    std::vector<std::unique_ptr<EsnAgent>> agents(2);
    for (int j = 0; j < 2; ++j) {
        agents[j] = std::make_unique<EsnAgent>(j, 2, static_cast<int>(sets[j].actions.size()),
                                               true, config.esn, seed);
    }
    const int slots = config.periods * config.slots_per_period;
    const int window = std::max(1, slots / 2);
    report.action_counts_played.assign(2, {});
    for (int j = 0; j < 2; ++j) {
        report.action_counts_played[j].assign(sets[j].actions.size(), 0);
    }

    std::vector<int> chosen(2, -1);
    for (int t = 1; t <= slots; ++t) {
        std::vector<double> observed(2, 0.0);
        for (int j = 0; j < 2; ++j) {
            observed[j] = agents[j]->normalized_index(agents[j]->begin_step(t));
        }
        for (int j = 0; j < 2; ++j) chosen[j] = agents[j]->act(observed);
        const auto utilities = all_sbs_utilities(sets, chosen, ctx);
        for (int j = 0; j < 2; ++j) {
            agents[j]->finish_step(utilities[j]);
            if (t > slots - window) ++report.action_counts_played[j][chosen[j]];
        }
    }

    report.empirical_profile.clear();
    for (int p = 0; p < game.players(); ++p) {
        const int j = player_sbs[p];
        MixedStrategy s;
        s.probs.assign(sets[j].actions.size(), 0.0);
        for (std::size_t a = 0; a < s.probs.size(); ++a) {
            s.probs[a] =
                static_cast<double>(report.action_counts_played[j][a]) / window;
        }
        report.empirical_profile.push_back(std::move(s));
    }
    report.empirical_worst_gain = is_epsilon_ne(report.empirical_profile, game, 0.05).worst_gain;
    return report;
}

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

void write_common_manifest(const ExperimentConfig& config, const std::string& dir) {
    write_manifest(dir + "/manifest.txt", canonical_string(config), config.seed, kToolVersion);
}

}  // namespace

void export_metrics(const std::vector<MetricsRecord>& records, const ExperimentConfig& config,
                    const std::string& dir) {
    ensure_dir(dir);
    write_slot_csv(dir + "/slots.csv", records);
    write_run_csv(dir + "/runs.csv", records);
    write_common_manifest(config, dir);
}

void export_sweep(const std::vector<SweepRow>& rows, const ExperimentConfig& config,
                  const std::string& dir) {
    ensure_dir(dir);
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        cells.push_back({std::to_string(r.num_sbs), r.learner, format_double(r.mean_delay_s),
                         format_double(r.std_delay_s), std::to_string(r.replications)});
    }
    write_csv(dir + "/sweep.csv",
              {"numSbs", "learner", "meanDelay_s", "stdDelay_s", "replications"}, cells);
    write_common_manifest(config, dir);
}

void export_convergence(const ConvergenceResult& result, const ExperimentConfig& config,
                        const std::string& dir) {
    ensure_dir(dir);
    std::vector<std::vector<std::string>> curve;
    for (const auto& p : result.curve) {
        curve.push_back({p.learner, std::to_string(p.iteration), format_double(p.utility)});
    }
    write_csv(dir + "/converge_curve.csv", {"learner", "iteration", "utility"}, curve);

    std::vector<std::vector<std::string>> runs;
    for (const auto& r : result.runs) {
        runs.push_back({r.learner, std::to_string(r.replication),
                        std::to_string(r.iterations_to_converge)});
    }
    write_csv(dir + "/converge_summary.csv",
              {"learner", "replication", "iterationsToConverge"}, runs);
    write_common_manifest(config, dir);
}

}  // namespace vralloc
