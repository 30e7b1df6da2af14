#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "vralloc/esn.hpp"
#include "vralloc/game.hpp"

namespace vralloc {

enum class LearnerKind { EsnTransfer, EsnPlain, QCorr, QNoCorr };

const char* learner_name(LearnerKind kind);
LearnerKind learner_from_name(const std::string& name);

/// epsilon = max(floor, init * decay^t), t counted from the last
/// environment change so every learner re-explores after a change.
struct ExplorationSchedule {
    double init = 0.5;
    double decay = 0.995;
    double floor = 0.01;

    double at(int t_since_change) const;
};

/// eps/n everywhere plus the remaining 1-eps on the greedy action.
MixedStrategy greedy_strategy(int n, int greedy_action, double eps);

struct EsnAgentConfig {
    int units = 1000;            // N_w
    double spectral_radius = 0.9;
    double lambda = 0.03;        // base readout learning rate
    double lambda_prime = 0.3;   // transfer readout learning rate
    int washout = 10;            // reservoir updates before readout training
    int bootstrap_passes = 5;    // LMS passes over transferred targets
    ExplorationSchedule explore;
};

/// One SBS's learning agent. The base estimator runs a reservoir over the
/// broadcast strategy indices of all SBSs and reads one utility estimate
/// per action out of it (one readout row per action, each trained with the
/// scalar LMS rule on the action actually played). The transfer net is a
/// second reservoir over the same indices plus the own action index with a
/// single readout row; it estimates the utility deviation caused by an
/// environment change. Codebook: index 0 is the uniform strategy, 1+a the
/// strategy favoring action a; indices are normalized to [0,1] before
/// entering the input weights.
///
/// A slot runs in three phases so agents can synchronize at the broadcast:
///   begin_step -> broadcast index; act(observed) -> action;
///   finish_step(realized utility) -> readout training.
class EsnAgent {
public:
    EsnAgent(int sbs, int num_sbs, int num_actions, bool transfer_enabled,
             const EsnAgentConfig& config, std::uint64_t seed);

    /// Phase 1: read per-action estimates off the reservoir, pick the
    /// strategy (uniform at t == 1, epsilon-greedy after), return the
    /// codebook index to broadcast.
    int begin_step(int t);

    /// Phase 2: receive all broadcast indices (normalized, own included),
    /// sample the action, commit both reservoir states.
    int act(std::span<const double> observed_norm_indices);

    /// Phase 3: train the played action's readout row toward the realized
    /// utility and, inside a change epoch, the transfer readout toward the
    /// deviation.
    void finish_step(double realized_utility);

    /// Capture the pre-change per-action estimates and warm-start the base
    /// readout from stored + predicted deviation. Resets the exploration
    /// clock.
    void on_environment_change();

    double normalized_index(int codebook_index) const;
    int num_actions() const { return num_actions_; }
    int sbs() const { return sbs_; }
    bool transfer_enabled() const { return transfer_enabled_; }
    const MixedStrategy& strategy() const { return strategy_; }
    int last_action() const { return last_action_; }
    const std::vector<double>& estimates() const { return estimates_; }
    const std::vector<double>& stored_utilities() const { return stored_utilities_; }
    int steps_since_change() const { return t_since_change_; }

    EsnNet& base_net() { return base_; }
    EsnNet& transfer_net() { return transfer_; }
    const EsnNet& base_net() const { return base_; }
    const EsnNet& transfer_net() const { return transfer_; }

    /// Per-action estimates read off the current reservoir state.
    std::vector<double> current_estimates() const;

private:
    Eigen::VectorXd base_input(std::span<const double> observed) const;
    Eigen::VectorXd transfer_input(std::span<const double> observed, int action) const;
    void train_base_row(int action, double target);

    int sbs_;
    int num_sbs_;
    int num_actions_;
    bool transfer_enabled_;
    EsnAgentConfig config_;
    EsnNet base_;
    Eigen::MatrixXd base_readout_;        // num_actions x N_w
    EsnNet transfer_;
    std::mt19937_64 rng_;
    std::vector<double> observed_;        // last received normalized indices
    std::vector<double> estimates_;       // per-action estimates at begin_step
    std::vector<double> stored_utilities_;// pre-change estimates; empty before any change
    MixedStrategy strategy_;
    int broadcast_index_ = 0;
    int last_action_ = -1;
    int t_since_change_ = 0;
    int trained_steps_ = 0;
};

/// Table-driven epsilon-greedy bandit; the game has no state transitions, so
/// Q(a) tracks the running utility of each action.
class QAgent {
public:
    QAgent(int num_actions, double step_size, bool correlation_aware,
           const ExplorationSchedule& explore, std::uint64_t seed);

    int choose(int t);
    void learn(double realized_utility);
    void on_environment_change();

    bool correlation_aware() const { return correlation_aware_; }
    int num_actions() const { return num_actions_; }
    const MixedStrategy& strategy() const { return strategy_; }
    const std::vector<double>& q_values() const { return q_; }
    int last_action() const { return last_action_; }

private:
    int num_actions_;
    double step_size_;
    bool correlation_aware_;
    ExplorationSchedule explore_;
    std::mt19937_64 rng_;
    std::vector<double> q_;
    MixedStrategy strategy_;
    int last_action_ = -1;
    int t_since_change_ = 0;
};

int sample_action(const MixedStrategy& strategy, std::mt19937_64& rng);

/// One full Table-style step: broadcast, receive (own slot filled in),
/// act, query the realized utility, train. Returns the chosen action.
int agent_step(EsnAgent& agent, std::span<const double> other_norm_indices, int t,
               const std::function<double(int action)>& utility_oracle);

/// Epsilon-greedy pick plus the table update in one call.
int q_step(QAgent& agent, int t, const std::function<double(int action)>& utility_oracle);

/// Wrapper for the change-event warm start; throws std::invalid_argument
/// when the action-set size no longer matches (transfer precondition).
void transfer_bootstrap(EsnAgent& agent, int action_count);

}  // namespace vralloc
