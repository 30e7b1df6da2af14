#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "vralloc/config.hpp"
#include "vralloc/sim.hpp"

namespace {

std::vector<vralloc::LearnerKind> to_learners(const std::vector<std::string>& names,
                                              std::vector<vralloc::LearnerKind> fallback) {
    if (names.empty()) return fallback;
    std::vector<vralloc::LearnerKind> out;
    for (const auto& n : names) out.push_back(vralloc::learner_from_name(n));
    return out;
}

void print_strategy(const vralloc::MixedStrategy& s) {
    std::cout << "[";
    for (std::size_t i = 0; i < s.probs.size(); ++i) {
        if (i) std::cout << ", ";
        std::cout << s.probs[i];
    }
    std::cout << "]";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace vralloc;

    CLI::App app{"Data-correlation-aware spectrum/compute allocation simulator for wireless VR "
                 "small cells"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_override;
    std::vector<std::string> learner_names;
    std::vector<int> sbs_values;
    std::uint64_t seed_override = 0;
    int reps_override = 0;

    app.add_option("--config", config_path, "flat key=value config file");
    auto* seed_opt = app.add_option("--seed", seed_override, "master seed");
    auto* reps_opt = app.add_option("--replications", reps_override, "replication count");
    app.add_option("--out", out_override, "output directory");
    app.add_option("--learner", learner_names, "learner name(s): esn-transfer, esn-plain, q-corr, q-nocorr")
        ->delimiter(',');
    app.add_option("--sbs", sbs_values, "SBS counts for the sweep")->delimiter(',');

    auto* cmd_validate = app.add_subcommand("validate-config", "parse, validate, and echo the config");
    auto* cmd_sweep = app.add_subcommand("sweep", "mean user delay vs number of SBSs");
    auto* cmd_converge = app.add_subcommand("converge", "utility convergence after a change event");
    auto* cmd_necheck = app.add_subcommand("ne-check", "equilibrium check on the two-cell toy game");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (seed_opt->count()) cfg.seed = seed_override;
        if (reps_opt->count()) cfg.replications = reps_override;
        if (!out_override.empty()) cfg.output_dir = out_override;
        if (learner_names.size() == 1) cfg.learner = learner_from_name(learner_names[0]);
        cfg.validate();

        if (*cmd_validate) {
            std::cout << canonical_string(cfg) << "OK\n";
            return 0;
        }

        if (*cmd_sweep) {
            const auto sbs = sbs_values.empty() ? std::vector<int>{2, 3, 4, 5, 6, 7} : sbs_values;
            const auto learners = to_learners(
                learner_names, {LearnerKind::EsnTransfer, LearnerKind::EsnPlain,
                                LearnerKind::QCorr, LearnerKind::QNoCorr});
            const auto rows = sweep_sbs_count(cfg, sbs, learners);
            export_sweep(rows, cfg, cfg.output_dir);
            std::cout << "numSbs,learner,meanDelay_s,stdDelay_s,replications\n";
            for (const auto& r : rows) {
                std::cout << r.num_sbs << ',' << r.learner << ',' << r.mean_delay_s << ','
                          << r.std_delay_s << ',' << r.replications << '\n';
            }
            std::cout << "wrote " << cfg.output_dir << "/sweep.csv\n";
            return 0;
        }

        if (*cmd_converge) {
            const auto learners = to_learners(
                learner_names,
                {LearnerKind::EsnTransfer, LearnerKind::EsnPlain, LearnerKind::QCorr});
            const auto result = convergence_experiment(cfg, learners);
            export_convergence(result, cfg, cfg.output_dir);
            for (const auto learner : learners) {
                std::vector<int> iters;
                for (const auto& r : result.runs) {
                    if (r.learner == learner_name(learner)) {
                        iters.push_back(r.iterations_to_converge);
                    }
                }
                std::sort(iters.begin(), iters.end());
                const int median = iters.empty() ? 0 : iters[iters.size() / 2];
                std::cout << learner_name(learner) << ": median iterationsToConverge = " << median
                          << " over " << iters.size() << " replications\n";
            }
            std::cout << "wrote " << cfg.output_dir << "/converge_curve.csv and converge_summary.csv\n";
            return 0;
        }

        if (*cmd_necheck) {
            const auto report = ne_check(cfg);
            std::cout << "players: " << report.players << '\n';
            std::cout << "oracle profile:";
            for (const auto& s : report.oracle_profile) {
                std::cout << ' ';
                print_strategy(s);
            }
            std::cout << "\noracle worst deviation gain: " << report.oracle_worst_gain << '\n';
            std::cout << "empirical profile:";
            for (const auto& s : report.empirical_profile) {
                std::cout << ' ';
                print_strategy(s);
            }
            std::cout << "\nempirical worst deviation gain: " << report.empirical_worst_gain
                      << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
