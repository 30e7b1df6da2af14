#include "vralloc/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vralloc/rng.hpp"

namespace vralloc {

const char* learner_name(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::EsnTransfer: return "esn-transfer";
        case LearnerKind::EsnPlain: return "esn-plain";
        case LearnerKind::QCorr: return "q-corr";
        case LearnerKind::QNoCorr: return "q-nocorr";
    }
    return "?";
}

LearnerKind learner_from_name(const std::string& name) {
    if (name == "esn-transfer") return LearnerKind::EsnTransfer;
    if (name == "esn-plain") return LearnerKind::EsnPlain;
    if (name == "q-corr") return LearnerKind::QCorr;
    if (name == "q-nocorr") return LearnerKind::QNoCorr;
    throw std::invalid_argument("unknown learner: " + name);
}

double ExplorationSchedule::at(int t_since_change) const {
    return std::max(floor, init * std::pow(decay, t_since_change));
}

MixedStrategy greedy_strategy(int n, int greedy_action, double eps) {
    MixedStrategy s;
    s.probs.assign(n, eps / n);
    s.probs[greedy_action] += 1.0 - eps;
    return s;
}

int sample_action(const MixedStrategy& strategy, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = unit(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < strategy.probs.size(); ++i) {
        acc += strategy.probs[i];
        if (r < acc) return static_cast<int>(i);
    }
    return static_cast<int>(strategy.probs.size()) - 1;
}

EsnAgent::EsnAgent(int sbs, int num_sbs, int num_actions, bool transfer_enabled,
                   const EsnAgentConfig& config, std::uint64_t seed)
    : sbs_(sbs),
      num_sbs_(num_sbs),
      num_actions_(num_actions),
      transfer_enabled_(transfer_enabled),
      config_(config),
      base_(esn_init(config.units, num_sbs,
                     derive_seed(seed, Stream::Agent, {static_cast<std::uint64_t>(sbs), 0}),
                     config.spectral_radius, config.lambda)),
      transfer_(esn_init(config.units, num_sbs + 1,
                         derive_seed(seed, Stream::Agent, {static_cast<std::uint64_t>(sbs), 1}),
                         config.spectral_radius, config.lambda_prime)),
      rng_(make_stream(seed, Stream::Agent, {static_cast<std::uint64_t>(sbs), 2})),
      observed_(num_sbs, 0.0),
      estimates_(num_actions, 0.0) {
    if (num_actions < 1) throw std::invalid_argument("agent needs a nonempty action set");
    base_readout_ = Eigen::MatrixXd::Zero(num_actions, config.units);
    strategy_ = uniform_strategy(num_actions);
}

double EsnAgent::normalized_index(int codebook_index) const {
    // Codebook: 0 = uniform, 1+a = strategy peaked on action a.
    return static_cast<double>(codebook_index) / num_actions_;
}

Eigen::VectorXd EsnAgent::base_input(std::span<const double> observed) const {
    Eigen::VectorXd x(num_sbs_);
    for (int j = 0; j < num_sbs_; ++j) x(j) = observed[j];
    return x;
}

Eigen::VectorXd EsnAgent::transfer_input(std::span<const double> observed, int action) const {
    Eigen::VectorXd x(num_sbs_ + 1);
    for (int j = 0; j < num_sbs_; ++j) x(j) = observed[j];
    x(num_sbs_) = static_cast<double>(action) / num_actions_;
    return x;
}

std::vector<double> EsnAgent::current_estimates() const {
    const Eigen::VectorXd est = base_readout_ * base_.state;
    return std::vector<double>(est.data(), est.data() + est.size());
}

void EsnAgent::train_base_row(int action, double target) {
    const double y = base_readout_.row(action).dot(base_.state);
    base_readout_.row(action) += config_.lambda * (target - y) * base_.state.transpose();
}

int EsnAgent::begin_step(int t) {
    estimates_ = current_estimates();
    if (t <= 1) {
        strategy_ = uniform_strategy(num_actions_);
        broadcast_index_ = 0;
    } else {
        const int best = static_cast<int>(
            std::max_element(estimates_.begin(), estimates_.end()) - estimates_.begin());
        const double eps = config_.explore.at(t_since_change_);
        strategy_ = greedy_strategy(num_actions_, best, eps);
        broadcast_index_ = 1 + best;
    }
    ++t_since_change_;
    return broadcast_index_;
}

int EsnAgent::act(std::span<const double> observed_norm_indices) {
    if (static_cast<int>(observed_norm_indices.size()) != num_sbs_) {
        throw std::invalid_argument("observed index vector must have one entry per SBS");
    }
    observed_.assign(observed_norm_indices.begin(), observed_norm_indices.end());
    last_action_ = sample_action(strategy_, rng_);
    esn_update_state(base_, base_input(observed_));
    esn_update_state(transfer_, transfer_input(observed_, last_action_));
    return last_action_;
}

void EsnAgent::finish_step(double realized_utility) {
    ++trained_steps_;
    if (trained_steps_ <= config_.washout) return;
    train_base_row(last_action_, realized_utility);
    if (!stored_utilities_.empty()) {
        const double deviation_target = realized_utility - stored_utilities_[last_action_];
        esn_train_readout(transfer_, deviation_target);
    }
}

void EsnAgent::on_environment_change() {
    if (!transfer_enabled_) {
        // Without transfer the learner is re-executed from scratch, as a
        // conventional RL run would be when the environment changes: fresh
        // estimates and a fresh exploration schedule.
        base_readout_.setZero();
        t_since_change_ = 0;
        return;
    }

    // The transfer learner is not re-executed; it keeps its decayed
    // exploration and warm-starts the estimates instead.
    stored_utilities_ = current_estimates();

    // Warm-start the base readout toward stored + predicted deviation for
    // every action.
    for (int pass = 0; pass < config_.bootstrap_passes; ++pass) {
        for (int a = 0; a < num_actions_; ++a) {
            const Eigen::VectorXd cand =
                esn_candidate_state(transfer_, transfer_input(observed_, a));
            const double target = stored_utilities_[a] + esn_predict_at(transfer_, cand);
            train_base_row(a, target);
        }
    }
}

QAgent::QAgent(int num_actions, double step_size, bool correlation_aware,
               const ExplorationSchedule& explore, std::uint64_t seed)
    : num_actions_(num_actions),
      step_size_(step_size),
      correlation_aware_(correlation_aware),
      explore_(explore),
      rng_(make_stream(seed, Stream::Agent, {0x51AB1EULL})),
      q_(num_actions, 0.0) {
    if (num_actions < 1) throw std::invalid_argument("agent needs a nonempty action set");
    strategy_ = uniform_strategy(num_actions);
}

int QAgent::choose(int t) {
    if (t <= 1) {
        strategy_ = uniform_strategy(num_actions_);
    } else {
        const int best =
            static_cast<int>(std::max_element(q_.begin(), q_.end()) - q_.begin());
        strategy_ = greedy_strategy(num_actions_, best, explore_.at(t_since_change_));
    }
    ++t_since_change_;
    last_action_ = sample_action(strategy_, rng_);
    return last_action_;
}

void QAgent::learn(double realized_utility) {
    q_[last_action_] += step_size_ * (realized_utility - q_[last_action_]);
}

void QAgent::on_environment_change() {
    // Re-executed from scratch on every environment change.
    t_since_change_ = 0;
    std::fill(q_.begin(), q_.end(), 0.0);
}

int agent_step(EsnAgent& agent, std::span<const double> other_norm_indices, int t,
               const std::function<double(int action)>& utility_oracle) {
    const int idx = agent.begin_step(t);
    std::vector<double> observed(other_norm_indices.begin(), other_norm_indices.end());
    observed[agent.sbs()] = agent.normalized_index(idx);
    const int action = agent.act(observed);
    agent.finish_step(utility_oracle(action));
    return action;
}

int q_step(QAgent& agent, int t, const std::function<double(int action)>& utility_oracle) {
    const int action = agent.choose(t);
    agent.learn(utility_oracle(action));
    return action;
}

void transfer_bootstrap(EsnAgent& agent, int action_count) {
    if (action_count != agent.num_actions()) {
        throw std::invalid_argument(
            "transfer requires an unchanged action set; size changed");
    }
    agent.on_environment_change();
}

}  // namespace vralloc
