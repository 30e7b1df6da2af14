#include "vralloc/game.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "vralloc/qos.hpp"
#include "vralloc/rng.hpp"

namespace vralloc {

namespace {

// Saturating arithmetic for action-space counting; anything at or above
// `limit` only needs to be known as "too big".
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, std::uint64_t limit) {
    if (a == 0 || b == 0) return 0;
    if (a >= limit / b + 1) return limit;
    const std::uint64_t p = a * b;
    return p >= limit ? limit : p;
}

std::uint64_t sat_pow(std::uint64_t base, int exp, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r = sat_mul(r, base, limit);
    return r;
}

std::uint64_t sat_binomial(int m, int k, std::uint64_t limit) {
    if (k < 0 || k > m) return 0;
    k = std::min(k, m - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = sat_mul(r, static_cast<std::uint64_t>(m - k + i), limit * i);
        r /= i;
        if (r >= limit) return limit;
    }
    return std::min(r, limit);
}

// Compositions of total into n positive parts, lexicographic order.
std::vector<std::vector<int>> all_compositions(int total, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> parts(n, 1);
    parts[n - 1] = total - (n - 1);
    // Walk bar positions as a k-combination of {1..total-1}.
    std::vector<int> bars(n - 1);
    for (int i = 0; i < n - 1; ++i) bars[i] = i + 1;
    auto emit = [&]() {
        std::vector<int> p(n);
        int prev = 0;
        for (int i = 0; i < n - 1; ++i) {
            p[i] = bars[i] - prev;
            prev = bars[i];
        }
        p[n - 1] = total - prev;
        out.push_back(std::move(p));
    };
    if (n == 1) {
        out.push_back({total});
        return out;
    }
    while (true) {
        emit();
        int i = n - 2;
        while (i >= 0 && bars[i] == total - 1 - (n - 2 - i)) --i;
        if (i < 0) break;
        ++bars[i];
        for (int j = i + 1; j < n - 1; ++j) bars[j] = bars[j - 1] + 1;
    }
    return out;
}

std::vector<int> sample_composition(int total, int n, std::mt19937_64& rng) {
    if (n == 1) return {total};
    std::vector<int> positions(total - 1);
    for (int i = 0; i < total - 1; ++i) positions[i] = i + 1;
    for (int i = 0; i < n - 1; ++i) {
        std::uniform_int_distribution<int> pick(i, total - 2);
        std::swap(positions[i], positions[pick(rng)]);
    }
    std::vector<int> bars(positions.begin(), positions.begin() + (n - 1));
    std::sort(bars.begin(), bars.end());
    std::vector<int> parts(n);
    int prev = 0;
    for (int i = 0; i < n - 1; ++i) {
        parts[i] = bars[i] - prev;
        prev = bars[i];
    }
    parts[n - 1] = total - prev;
    return parts;
}

std::vector<int> encode_action(const Action& a) {
    std::vector<int> key;
    key.reserve(a.rb.dl_user.size() + a.rb.ul_user.size() + a.compute_units.size());
    key.insert(key.end(), a.rb.dl_user.begin(), a.rb.dl_user.end());
    key.insert(key.end(), a.rb.ul_user.begin(), a.rb.ul_user.end());
    key.insert(key.end(), a.compute_units.begin(), a.compute_units.end());
    return key;
}

}  // namespace

Action fair_action(const ActionSet& set, const NetworkConfig& config) {
    const int n = static_cast<int>(set.users.size());
    Action a;
    a.rb.dl_user.resize(config.num_dl_rb);
    a.rb.ul_user.resize(config.num_ul_rb);
    for (int k = 0; k < config.num_dl_rb; ++k) a.rb.dl_user[k] = set.users[k % n];
    for (int k = 0; k < config.num_ul_rb; ++k) a.rb.ul_user[k] = set.users[k % n];
    const int base = set.quant_levels / n;
    const int rem = set.quant_levels % n;
    a.compute_units.assign(n, base);
    for (int i = 0; i < rem; ++i) ++a.compute_units[i];
    return a;
}

void validate_action(const ActionSet& set, const Action& action, const NetworkConfig& config) {
    auto in_cell = [&](int user) {
        return std::binary_search(set.users.begin(), set.users.end(), user);
    };
    if (static_cast<int>(action.rb.dl_user.size()) != config.num_dl_rb ||
        static_cast<int>(action.rb.ul_user.size()) != config.num_ul_rb) {
        throw std::logic_error("action RB vectors have the wrong length");
    }
    for (int u : action.rb.dl_user) {
        if (u == kNoUser || !in_cell(u)) throw std::logic_error("downlink RB not assigned in-cell");
    }
    for (int u : action.rb.ul_user) {
        if (u == kNoUser || !in_cell(u)) throw std::logic_error("uplink RB not assigned in-cell");
    }
    if (action.compute_units.size() != set.users.size()) {
        throw std::logic_error("compute split has the wrong length");
    }
    int total = 0;
    for (int units : action.compute_units) {
        if (units < 1) throw std::logic_error("compute share below one quantization unit");
        total += units;
    }
    if (total != set.quant_levels) {
        throw std::logic_error("compute split does not sum to the SBS capacity");
    }
}

ActionSet enumerate_actions(int sbs, const Topology& topology, const NetworkConfig& config,
                            int cap, std::uint64_t seed) {
    if (cap < 1) throw std::invalid_argument("action cap must be >= 1");
    ActionSet set;
    set.sbs = sbs;
    set.users = topology.cell_users[sbs];
    std::sort(set.users.begin(), set.users.end());
    const int n = static_cast<int>(set.users.size());
    if (n == 0) {
        set.quant_levels = config.compute_levels;
        return set;  // idle SBS
    }
    set.quant_levels = std::max(config.compute_levels, n);

    const auto limit = static_cast<std::uint64_t>(cap) + 1;
    const std::uint64_t space =
        sat_mul(sat_mul(sat_pow(n, config.num_dl_rb, limit), sat_pow(n, config.num_ul_rb, limit),
                        limit),
                sat_binomial(set.quant_levels - 1, n - 1, limit), limit);

    if (space <= static_cast<std::uint64_t>(cap)) {
        set.exhaustive = true;
        const auto comps = all_compositions(set.quant_levels, n);
        std::vector<int> dl(config.num_dl_rb, 0), ul(config.num_ul_rb, 0);
        auto advance = [&](std::vector<int>& digits) {
            for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
                if (++digits[i] < n) return true;
                digits[i] = 0;
            }
            return false;
        };
        bool more_dl = true;
        while (more_dl) {
            bool more_ul = true;
            std::fill(ul.begin(), ul.end(), 0);
            while (more_ul) {
                for (const auto& comp : comps) {
                    Action a;
                    a.rb.dl_user.resize(config.num_dl_rb);
                    a.rb.ul_user.resize(config.num_ul_rb);
                    for (int k = 0; k < config.num_dl_rb; ++k) a.rb.dl_user[k] = set.users[dl[k]];
                    for (int k = 0; k < config.num_ul_rb; ++k) a.rb.ul_user[k] = set.users[ul[k]];
                    a.compute_units = comp;
                    set.actions.push_back(std::move(a));
                }
                more_ul = advance(ul);
            }
            more_dl = advance(dl);
        }
        return set;
    }

    set.exhaustive = false;
    auto rng = make_stream(seed, Stream::ActionSet, {static_cast<std::uint64_t>(sbs)});
    std::set<std::vector<int>> seen;
    Action fair = fair_action(set, config);
    seen.insert(encode_action(fair));
    set.actions.push_back(std::move(fair));
    std::uniform_int_distribution<int> pick_user(0, n - 1);
    while (static_cast<int>(set.actions.size()) < cap) {
        Action a;
        a.rb.dl_user.resize(config.num_dl_rb);
        a.rb.ul_user.resize(config.num_ul_rb);
        for (int k = 0; k < config.num_dl_rb; ++k) a.rb.dl_user[k] = set.users[pick_user(rng)];
        for (int k = 0; k < config.num_ul_rb; ++k) a.rb.ul_user[k] = set.users[pick_user(rng)];
        a.compute_units = sample_composition(set.quant_levels, n, rng);
        if (seen.insert(encode_action(a)).second) {
            set.actions.push_back(std::move(a));
        }
    }
    // Keep the sampled set in the same canonical order as exhaustive sets;
    // neighboring indices then share most of their assignment, which gives
    // the action-index input a geometric meaning.
    std::sort(set.actions.begin(), set.actions.end(), [](const Action& a, const Action& b) {
        return encode_action(a) < encode_action(b);
    });
    return set;
}

PeriodContext make_period_context(const Topology& topology, const NetworkConfig& config,
                                  const ChannelRealization& channel,
                                  const ContentModel& content, const CorrelationState& corr,
                                  bool correlation_aware) {
    PeriodContext ctx;
    ctx.config = &config;
    ctx.topology = &topology;
    ctx.channel = &channel;
    const int users = static_cast<int>(topology.user_positions.size());
    ctx.dl_load_bits.assign(users, 0.0);
    ctx.ul_load_bits.assign(users, 0.0);
    ctx.dmax_dl_s.assign(users, 0.0);
    ctx.dmax_ul_s.assign(users, 0.0);

    for (int u = 0; u < users; ++u) {
        const int sbs = topology.association[u];
        if (sbs == kUncovered) continue;
        ctx.dl_load_bits[u] = correlation_aware
                                  ? effective_dl_load(content.base_dl_bits[u], corr.phi_max[u])
                                  : content.base_dl_bits[u];
        ctx.ul_load_bits[u] = correlation_aware
                                  ? effective_ul_load(content.base_ul_bits[u], corr.rho_max[u])
                                  : content.base_ul_bits[u];
        const int quant_levels =
            std::max(config.compute_levels, static_cast<int>(topology.cell_users[sbs].size()));
        ctx.dmax_dl_s[u] = max_delay_dl(u, sbs, config, channel, content.base_dl_bits[u]);
        ctx.dmax_ul_s[u] = max_delay_ul(u, sbs, topology, config, channel,
                                        content.base_ul_bits[u], quant_levels);
        if (!(ctx.dmax_dl_s[u] > config.max_delay_dl_s) ||
            !(ctx.dmax_ul_s[u] > config.max_delay_ul_s)) {
            throw std::invalid_argument(
                "worst-case delay does not exceed the tolerable delay; "
                "increase loads or lower maxDelayDl/maxDelayUl");
        }
    }
    return ctx;
}

JointAllocation to_joint_allocation(const std::vector<ActionSet>& sets,
                                    std::span<const int> chosen) {
    JointAllocation joint(sets.size());
    for (std::size_t j = 0; j < sets.size(); ++j) {
        if (chosen[j] >= 0 && !sets[j].actions.empty()) {
            joint[j] = sets[j].actions[chosen[j]].rb;
        }
    }
    return joint;
}

namespace {

std::vector<UserSlotOutcome> evaluate_cell_with_joint(int sbs,
                                                      const std::vector<ActionSet>& sets,
                                                      std::span<const int> chosen,
                                                      const JointAllocation& joint,
                                                      const PeriodContext& ctx) {
    std::vector<UserSlotOutcome> outcomes;
    const ActionSet& set = sets[sbs];
    if (set.users.empty() || chosen[sbs] < 0) return outcomes;
    const Action& action = set.actions[chosen[sbs]];
    const NetworkConfig& cfg = *ctx.config;

    outcomes.reserve(set.users.size());
    for (std::size_t pos = 0; pos < set.users.size(); ++pos) {
        const int user = set.users[pos];
        UserSlotOutcome o;
        o.user = user;

        const double dl_rate = user_dl_rate(user, sbs, joint, *ctx.channel, cfg);
        o.dl_delay_s = downlink_delay(ctx.dl_load_bits[user], dl_rate, cfg.backhaul_share_bps());
        o.dl_feasible = std::isfinite(o.dl_delay_s);
        const double u_dl = utility_dl(o.dl_delay_s, ctx.dmax_dl_s[user], cfg.max_delay_dl_s);

        const double ul_rate = user_ul_rate(user, sbs, joint, *ctx.channel, cfg);
        const double share =
            set.compute_share(action, static_cast<int>(pos), cfg.compute_capacity);
        o.ul_delay_s = uplink_delay(ctx.ul_load_bits[user], ul_rate, share);
        o.ul_feasible = std::isfinite(o.ul_delay_s);
        const double u_ul = utility_ul(o.ul_delay_s, ctx.dmax_ul_s[user], cfg.max_delay_ul_s);

        o.utility = utility_total(u_dl, u_ul);
        outcomes.push_back(o);
    }
    return outcomes;
}

}  // namespace

std::vector<UserSlotOutcome> evaluate_cell(int sbs, const std::vector<ActionSet>& sets,
                                           std::span<const int> chosen,
                                           const PeriodContext& ctx) {
    return evaluate_cell_with_joint(sbs, sets, chosen, to_joint_allocation(sets, chosen), ctx);
}

std::vector<std::vector<UserSlotOutcome>> evaluate_all_cells(const std::vector<ActionSet>& sets,
                                                             std::span<const int> chosen,
                                                             const PeriodContext& ctx) {
    const JointAllocation joint = to_joint_allocation(sets, chosen);
    std::vector<std::vector<UserSlotOutcome>> cells(sets.size());
    for (std::size_t j = 0; j < sets.size(); ++j) {
        cells[j] = evaluate_cell_with_joint(static_cast<int>(j), sets, chosen, joint, ctx);
    }
    return cells;
}

double sbs_utility(int sbs, const std::vector<ActionSet>& sets, std::span<const int> chosen,
                   const PeriodContext& ctx) {
    double total = 0.0;
    for (const auto& o : evaluate_cell(sbs, sets, chosen, ctx)) total += o.utility;
    return total;
}

std::vector<double> all_sbs_utilities(const std::vector<ActionSet>& sets,
                                      std::span<const int> chosen, const PeriodContext& ctx) {
    const JointAllocation joint = to_joint_allocation(sets, chosen);
    std::vector<double> utilities(sets.size(), 0.0);
    for (std::size_t j = 0; j < sets.size(); ++j) {
        double total = 0.0;
        for (const auto& o :
             evaluate_cell_with_joint(static_cast<int>(j), sets, chosen, joint, ctx)) {
            total += o.utility;
        }
        utilities[j] = total;
    }
    return utilities;
}

void MixedStrategy::validate() const {
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("strategy probability outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("strategy probabilities do not sum to 1");
    }
}

MixedStrategy uniform_strategy(int n) {
    MixedStrategy s;
    s.probs.assign(n, 1.0 / n);
    return s;
}

MixedStrategy degenerate_strategy(int n, int action) {
    MixedStrategy s;
    s.probs.assign(n, 0.0);
    s.probs[action] = 1.0;
    return s;
}

std::size_t GameSpec::joint_space_size() const {
    std::size_t total = 1;
    for (int c : action_counts) {
        if (c <= 0) throw std::invalid_argument("empty action set in game");
        total = sat_mul(total, static_cast<std::uint64_t>(c),
                        std::numeric_limits<std::size_t>::max());
    }
    return total;
}

GameSpec make_sbs_game(const std::vector<ActionSet>& sets, const PeriodContext& ctx,
                       std::vector<int>& player_sbs) {
    player_sbs.clear();
    for (std::size_t j = 0; j < sets.size(); ++j) {
        if (!sets[j].users.empty() && !sets[j].actions.empty()) {
            player_sbs.push_back(static_cast<int>(j));
        }
    }
    GameSpec game;
    for (int j : player_sbs) {
        game.action_counts.push_back(static_cast<int>(sets[j].actions.size()));
    }
    const std::vector<int> mapping = player_sbs;
    const auto* sets_ptr = &sets;
    const auto* ctx_ptr = &ctx;
    game.utility = [sets_ptr, ctx_ptr, mapping](int player, std::span<const int> joint) {
        std::vector<int> chosen(sets_ptr->size(), -1);
        for (std::size_t p = 0; p < mapping.size(); ++p) chosen[mapping[p]] = joint[p];
        return sbs_utility(mapping[player], *sets_ptr, chosen, *ctx_ptr);
    };
    return game;
}

namespace {

int sample_index(std::span<const double> probs, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = unit(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (r < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

}  // namespace

ExpectedUtilityResult expected_utility(const std::vector<MixedStrategy>& strategies,
                                       const GameSpec& game, std::size_t exact_limit,
                                       int mc_samples, std::uint64_t mc_seed) {
    const int players = game.players();
    if (static_cast<int>(strategies.size()) != players) {
        throw std::invalid_argument("one strategy per player required");
    }
    for (int p = 0; p < players; ++p) {
        if (static_cast<int>(strategies[p].probs.size()) != game.action_counts[p]) {
            throw std::invalid_argument("strategy length does not match the action set");
        }
        strategies[p].validate();
    }

    ExpectedUtilityResult result;
    result.value.assign(players, 0.0);
    result.std_error.assign(players, 0.0);

    if (game.joint_space_size() <= exact_limit) {
        result.exact = true;
        std::vector<int> joint(players, 0);
        while (true) {
            double w = 1.0;
            for (int p = 0; p < players; ++p) w *= strategies[p].probs[joint[p]];
            if (w > 0.0) {
                for (int p = 0; p < players; ++p) {
                    result.value[p] += w * game.utility(p, joint);
                }
            }
            int i = players - 1;
            while (i >= 0 && ++joint[i] == game.action_counts[i]) joint[i--] = 0;
            if (i < 0) break;
        }
        return result;
    }

    result.exact = false;
    auto rng = make_stream(mc_seed, Stream::Misc);
    std::vector<double> sum(players, 0.0), sumsq(players, 0.0);
    std::vector<int> joint(players, 0);
    for (int s = 0; s < mc_samples; ++s) {
        for (int p = 0; p < players; ++p) joint[p] = sample_index(strategies[p].probs, rng);
        for (int p = 0; p < players; ++p) {
            const double u = game.utility(p, joint);
            sum[p] += u;
            sumsq[p] += u * u;
        }
    }
    for (int p = 0; p < players; ++p) {
        const double mean = sum[p] / mc_samples;
        result.value[p] = mean;
        const double var = std::max(0.0, sumsq[p] / mc_samples - mean * mean);
        result.std_error[p] = std::sqrt(var / mc_samples);
    }
    return result;
}

NeCheckResult is_epsilon_ne(const std::vector<MixedStrategy>& strategies, const GameSpec& game,
                            double epsilon) {
    const int players = game.players();
    if (game.joint_space_size() > 1'000'000) {
        throw std::invalid_argument("is_epsilon_ne requires an exactly computable joint space");
    }
    NeCheckResult result;
    result.is_ne = true;

    std::vector<int> joint(players, 0);
    for (int p = 0; p < players; ++p) {
        strategies[p].validate();
        std::vector<double> deviation(game.action_counts[p], 0.0);

        // Enumerate the other players' joint actions once; accumulate the
        // payoff of every own pure action under that profile.
        std::fill(joint.begin(), joint.end(), 0);
        while (true) {
            double w = 1.0;
            for (int q = 0; q < players; ++q) {
                if (q != p) w *= strategies[q].probs[joint[q]];
            }
            if (w > 0.0) {
                for (int a = 0; a < game.action_counts[p]; ++a) {
                    joint[p] = a;
                    deviation[a] += w * game.utility(p, joint);
                }
                joint[p] = 0;
            }
            int i = players - 1;
            while (i >= 0) {
                if (i == p) { --i; continue; }
                if (++joint[i] < game.action_counts[i]) break;
                joint[i--] = 0;
            }
            if (i < 0) break;
        }

        double eq_value = 0.0;
        for (int a = 0; a < game.action_counts[p]; ++a) {
            eq_value += strategies[p].probs[a] * deviation[a];
        }
        const double best = *std::max_element(deviation.begin(), deviation.end());
        const double gain = best - eq_value;
        if (gain > result.worst_gain) {
            result.worst_gain = gain;
            result.worst_player = p;
        }
        if (gain > epsilon) result.is_ne = false;
    }
    return result;
}

namespace {

std::vector<std::vector<int>> all_supports(int n) {
    std::vector<std::vector<int>> supports;
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i) {
            if (mask & (1 << i)) s.push_back(i);
        }
        supports.push_back(std::move(s));
    }
    return supports;
}

// Solve the indifference system: find probs on `support` (columns of the
// opponent-payoff rows `rows`) making every row in `eq_rows` equal. Returns
// false when the system is inconsistent or the solution leaves the simplex.
bool solve_indifference(const Eigen::MatrixXd& payoff, const std::vector<int>& eq_rows,
                        const std::vector<int>& support, std::vector<double>& probs_out,
                        double& value_out, double tolerance) {
    const int rows = static_cast<int>(eq_rows.size());
    const int cols = static_cast<int>(support.size());
    Eigen::MatrixXd system(rows + 1, cols + 1);
    Eigen::VectorXd rhs(rows + 1);
    system.setZero();
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) system(r, c) = payoff(eq_rows[r], support[c]);
        system(r, cols) = -1.0;  // minus the common value v
        rhs(r) = 0.0;
    }
    for (int c = 0; c < cols; ++c) system(rows, c) = 1.0;
    system(rows, cols) = 0.0;
    rhs(rows) = 1.0;

    Eigen::VectorXd sol = system.colPivHouseholderQr().solve(rhs);
    if ((system * sol - rhs).cwiseAbs().maxCoeff() > tolerance) return false;

    probs_out.assign(cols, 0.0);
    double sum = 0.0;
    for (int c = 0; c < cols; ++c) {
        double p = sol(c);
        if (p < -tolerance) return false;
        p = std::max(p, 0.0);
        probs_out[c] = p;
        sum += p;
    }
    if (sum <= 0.0) return false;
    for (double& p : probs_out) p /= sum;
    value_out = sol(cols);
    return true;
}

}  // namespace

std::vector<MixedStrategy> brute_force_ne(const GameSpec& game) {
    const int players = game.players();
    if (players < 1 || players > 2) {
        throw std::invalid_argument("brute_force_ne handles 1 or 2 players");
    }
    for (int c : game.action_counts) {
        if (c < 1 || c > 4) throw std::invalid_argument("brute_force_ne handles <= 4 actions");
    }

    if (players == 1) {
        int best = 0;
        double best_u = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < game.action_counts[0]; ++a) {
            const int joint[1] = {a};
            const double u = game.utility(0, joint);
            if (u > best_u) {
                best_u = u;
                best = a;
            }
        }
        return {degenerate_strategy(game.action_counts[0], best)};
    }

    const int n0 = game.action_counts[0];
    const int n1 = game.action_counts[1];
    Eigen::MatrixXd a_payoff(n0, n1), b_payoff(n0, n1);
    double scale = 1.0;
    for (int a = 0; a < n0; ++a) {
        for (int b = 0; b < n1; ++b) {
            const int joint[2] = {a, b};
            a_payoff(a, b) = game.utility(0, joint);
            b_payoff(a, b) = game.utility(1, joint);
            scale = std::max({scale, std::abs(a_payoff(a, b)), std::abs(b_payoff(a, b))});
        }
    }
    const double tol = 1e-9 * scale;

    auto supports0 = all_supports(n0);
    auto supports1 = all_supports(n1);
    struct Pair {
        const std::vector<int>* s0;
        const std::vector<int>* s1;
    };
    std::vector<Pair> pairs;
    for (const auto& s0 : supports0) {
        for (const auto& s1 : supports1) pairs.push_back({&s0, &s1});
    }
    // Largest joint support first, then lexicographic; interior mixtures win
    // over pure equilibria when both exist.
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        const std::size_t sx = x.s0->size() + x.s1->size();
        const std::size_t sy = y.s0->size() + y.s1->size();
        if (sx != sy) return sx > sy;
        if (*x.s0 != *y.s0) return *x.s0 < *y.s0;
        return *x.s1 < *y.s1;
    });

    for (const Pair& pair : pairs) {
        const auto& s0 = *pair.s0;
        const auto& s1 = *pair.s1;
        std::vector<double> y_probs;
        double v0 = 0.0;
        if (!solve_indifference(a_payoff, s0, s1, y_probs, v0, tol)) continue;
        std::vector<double> x_probs;
        double v1 = 0.0;
        if (!solve_indifference(b_payoff.transpose(), s1, s0, x_probs, v1, tol)) continue;

        MixedStrategy pi0, pi1;
        pi0.probs.assign(n0, 0.0);
        pi1.probs.assign(n1, 0.0);
        for (std::size_t i = 0; i < s0.size(); ++i) pi0.probs[s0[i]] = x_probs[i];
        for (std::size_t i = 0; i < s1.size(); ++i) pi1.probs[s1[i]] = y_probs[i];

        std::vector<MixedStrategy> profile = {pi0, pi1};
        const auto check = is_epsilon_ne(profile, game, 1e-6 * scale);
        if (check.is_ne) return profile;
    }
    throw std::runtime_error("brute_force_ne: no support pair verified (solver bug)");
}

}  // namespace vralloc
