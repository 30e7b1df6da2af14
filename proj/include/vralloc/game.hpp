#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vralloc/correlation.hpp"
#include "vralloc/net_model.hpp"

namespace vralloc {

/// One SBS action: a full RB assignment plus a quantized compute split.
/// compute_units is parallel to the owning ActionSet's user list; each entry
/// is >= 1 and the entries sum to quant_levels, so every user's share is a
/// positive multiple of capacity/quant_levels.
struct Action {
    SbsAllocation rb;
    std::vector<int> compute_units;
};

struct ActionSet {
    int sbs = 0;
    std::vector<int> users;        // sorted associated users; empty marks the SBS idle
    int quant_levels = 1;          // max(M, |users|)
    bool exhaustive = true;
    std::vector<Action> actions;

    double compute_share(const Action& action, int user_pos, double capacity) const {
        return action.compute_units[user_pos] * capacity / quant_levels;
    }
};

/// Full product space when it fits under cap (canonical lexicographic order
/// over DL assignment, UL assignment, compute composition), otherwise cap
/// distinct uniform samples, always including round-robin RBs with the most
/// even compute split. Deterministic given seed.
ActionSet enumerate_actions(int sbs, const Topology& topology, const NetworkConfig& config,
                            int cap, std::uint64_t seed);

/// The deterministic fair allocation: RB k to the k-mod-n'th user, compute as
/// even as the quantization allows.
Action fair_action(const ActionSet& set, const NetworkConfig& config);

/// Throws std::logic_error when an action violates its invariants.
void validate_action(const ActionSet& set, const Action& action, const NetworkConfig& config);

/// Everything fixed within one period: channel, loads, delay normalizers.
struct PeriodContext {
    const NetworkConfig* config = nullptr;
    const Topology* topology = nullptr;
    const ChannelRealization* channel = nullptr;
    std::vector<double> dl_load_bits;  // per user, correlation-adjusted or raw
    std::vector<double> ul_load_bits;
    std::vector<double> dmax_dl_s;     // per user, 0 for uncovered
    std::vector<double> dmax_ul_s;
};

/// Computes loads and worst-case delays for the period. correlation_aware
/// selects whether transmit loads shrink with the measured correlations.
/// Throws std::invalid_argument when any covered user's worst-case delay
/// does not exceed the tolerable delay (degenerate utility normalization).
PeriodContext make_period_context(const Topology& topology, const NetworkConfig& config,
                                  const ChannelRealization& channel,
                                  const ContentModel& content, const CorrelationState& corr,
                                  bool correlation_aware);

JointAllocation to_joint_allocation(const std::vector<ActionSet>& sets,
                                    std::span<const int> chosen);

struct UserSlotOutcome {
    int user = kUncovered;
    double dl_delay_s = 0.0;
    double ul_delay_s = 0.0;
    double utility = 0.0;
    bool dl_feasible = true;
    bool ul_feasible = true;
};

/// Per-user delays and utilities for one cell under a joint action.
std::vector<UserSlotOutcome> evaluate_cell(int sbs, const std::vector<ActionSet>& sets,
                                           std::span<const int> chosen,
                                           const PeriodContext& ctx);

/// All cells at once (single joint-allocation build).
std::vector<std::vector<UserSlotOutcome>> evaluate_all_cells(const std::vector<ActionSet>& sets,
                                                             std::span<const int> chosen,
                                                             const PeriodContext& ctx);

/// Sum of the cell's per-user total utilities; the per-slot value equals the
/// period average because the context is static within a period. Idle -> 0.
double sbs_utility(int sbs, const std::vector<ActionSet>& sets, std::span<const int> chosen,
                   const PeriodContext& ctx);

std::vector<double> all_sbs_utilities(const std::vector<ActionSet>& sets,
                                      std::span<const int> chosen, const PeriodContext& ctx);

struct MixedStrategy {
    std::vector<double> probs;

    /// Throws std::invalid_argument unless probs sum to 1 within 1e-9 and
    /// every entry lies in [0,1].
    void validate() const;
};

MixedStrategy uniform_strategy(int n);
MixedStrategy degenerate_strategy(int n, int action);

/// Abstract finite game: per-player action counts and a joint-action payoff.
struct GameSpec {
    std::vector<int> action_counts;
    std::function<double(int player, std::span<const int> joint)> utility;

    int players() const { return static_cast<int>(action_counts.size()); }
    std::size_t joint_space_size() const;
};

/// Physical game over the enumerated action sets of every non-idle SBS.
/// player_sbs maps GameSpec player index -> SBS index.
GameSpec make_sbs_game(const std::vector<ActionSet>& sets, const PeriodContext& ctx,
                       std::vector<int>& player_sbs);

struct ExpectedUtilityResult {
    std::vector<double> value;      // per player
    std::vector<double> std_error;  // zero when exact
    bool exact = true;
};

/// Exact joint-space sum when it fits under exact_limit, else Monte Carlo
/// with mc_samples draws and a reported standard error.
ExpectedUtilityResult expected_utility(const std::vector<MixedStrategy>& strategies,
                                       const GameSpec& game,
                                       std::size_t exact_limit = 1'000'000,
                                       int mc_samples = 20000, std::uint64_t mc_seed = 12345);

struct NeCheckResult {
    bool is_ne = false;
    double worst_gain = 0.0;
    int worst_player = -1;
};

/// Pure deviations suffice by linearity of the expected utility in one
/// player's strategy. Requires an exactly computable joint space.
NeCheckResult is_epsilon_ne(const std::vector<MixedStrategy>& strategies, const GameSpec& game,
                            double epsilon);

/// Support enumeration for games of at most 2 players and 4 actions each.
/// Prefers maximal joint support (interior mixtures first) and breaks ties
/// by lexicographic support order, so games whose only equilibrium is
/// interior return it directly. Throws std::runtime_error if no support
/// pair verifies (a solver bug for finite games).
std::vector<MixedStrategy> brute_force_ne(const GameSpec& game);

}  // namespace vralloc
