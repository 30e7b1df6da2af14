#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <random>

#include "vralloc/correlation.hpp"
#include "vralloc/qos.hpp"

using namespace vralloc;

TEST_SUITE_BEGIN("qos");

TEST_CASE("downlink delay sums air and backhaul terms") {
    CHECK(downlink_delay(0.0, 1e6, 4e9) == 0.0);
    // 10 Mbit over 10 Mbit/s plus 10 Mbit over V_F/U = 100 Gbit/s / 25.
    CHECK(downlink_delay(10e6, 10e6, 4e9) == doctest::Approx(1.0025).epsilon(1e-12));

    const DelayBreakdown once = downlink_delay_parts(10e6, 10e6, 4e9);
    const DelayBreakdown twice = downlink_delay_parts(10e6, 20e6, 4e9);
    CHECK(twice.dl_air_s == doctest::Approx(once.dl_air_s / 2.0));
    CHECK(twice.dl_backhaul_s == once.dl_backhaul_s);

    CHECK(downlink_delay(1.0, 0.0, 4e9) == std::numeric_limits<double>::infinity());
}

TEST_CASE("uplink delay sums air and compute terms") {
    CHECK(uplink_delay(0.0, 1e6, 1e6) == 0.0);
    CHECK(uplink_delay(1e6, 2e6, 1e6) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(uplink_delay(1e6, 2e6, 1e300) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(uplink_delay(1.0, 0.0, 1e6) == std::numeric_limits<double>::infinity());
}

TEST_CASE("normalized utility clamps outside the linear band") {
    CHECK(utility_dl(0.020, 0.120, 0.020) == doctest::Approx(1.0));
    CHECK(utility_dl(0.120, 0.120, 0.020) == doctest::Approx(0.0));
    CHECK(utility_dl(0.070, 0.120, 0.020) == doctest::Approx(0.5));
    CHECK(utility_dl(0.001, 0.120, 0.020) == 1.0);
    CHECK(utility_dl(std::numeric_limits<double>::infinity(), 0.120, 0.020) == 0.0);
    CHECK(utility_dl(10.0, 0.120, 0.020) == 0.0);
    CHECK_THROWS_AS(utility_dl(0.05, 0.020, 0.020), std::invalid_argument);
    CHECK_THROWS_AS(utility_ul(0.05, 0.010, 0.020), std::invalid_argument);

    // Monotone nonincreasing in delay.
    double prev = 1.0;
    for (double d = 0.0; d < 0.2; d += 0.005) {
        const double u = utility_dl(d, 0.120, 0.020);
        CHECK(u <= prev);
        CHECK(u >= 0.0);
        CHECK(u <= 1.0);
        prev = u;
    }
}

TEST_CASE("total utility is the product of the legs") {
    CHECK(utility_total(1.0, 1.0) == 1.0);
    CHECK(utility_total(0.7, 0.0) == 0.0);
    CHECK(utility_total(0.8, 0.5) == doctest::Approx(0.4));
}

namespace {

Topology cross_topology() {
    // Two cells, two users each, plus enough geometry for uplink worst cases.
    Topology topo;
    topo.sbs_positions = {{-25.0, 0.0}, {25.0, 0.0}};
    topo.user_positions = {{-30.0, 0.0}, {-18.0, 4.0}, {18.0, -4.0}, {30.0, 0.0}};
    topo.association = {0, 0, 1, 1};
    topo.content_id = {0, 0, 0, 0};
    topo.tracking_std.assign(4, 1.0);
    topo.cell_users = {{0, 1}, {2, 3}};
    return topo;
}

}  // namespace

TEST_CASE("single-RB single-user cell: worst-case delay equals the only delay") {
    NetworkConfig cfg;
    cfg.num_users = 1;
    cfg.num_sbs = 1;
    cfg.num_dl_rb = 1;
    cfg.num_ul_rb = 1;
    Topology topo;
    topo.sbs_positions = {{0.0, 0.0}};
    topo.user_positions = {{10.0, 0.0}};
    topo.association = {0};
    topo.content_id = {0};
    topo.tracking_std = {1.0};
    topo.cell_users = {{0}};
    const ChannelRealization ch = sample_channel(topo, cfg, 3);

    const double l0 = 2.532e6;
    const double dmax = max_delay_dl(0, 0, cfg, ch, l0);
    const double sinr = cfg.sbs_tx_power_w * ch.dl_gain(0, 0, 0) / cfg.noise_power_w;
    const double rate = cfg.subcarrier_bandwidth_hz * std::log2(1.0 + sinr);
    CHECK(dmax == doctest::Approx(downlink_delay(l0, rate, cfg.backhaul_share_bps())));

    // Worst-case delay scales linearly with the zero-correlation load.
    CHECK(max_delay_dl(0, 0, cfg, ch, 2.0 * l0) == doctest::Approx(2.0 * dmax).epsilon(1e-12));
}

TEST_CASE("worst-case delays dominate 1000 random feasible allocations") {
    NetworkConfig cfg;
    cfg.num_users = 4;
    cfg.num_sbs = 2;
    cfg.num_dl_rb = 3;
    cfg.num_ul_rb = 3;
    const Topology topo = cross_topology();
    const ChannelRealization ch = sample_channel(topo, cfg, 8);

    const double l0 = 2.532e6;
    const double k0 = 25320.0;
    const int quant = std::max(cfg.compute_levels, 2);
    const double min_share = cfg.compute_capacity / quant;

    const int user = 0, sbs = 0;
    const double dmax_dl = max_delay_dl(user, sbs, cfg, ch, l0);
    const double dmax_ul = max_delay_ul(user, sbs, topo, cfg, ch, k0, quant);

    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> cell0(0, 1), cell1(2, 3), units(1, quant - 1);
    for (int trial = 0; trial < 1000; ++trial) {
        JointAllocation joint(2);
        for (int j = 0; j < 2; ++j) {
            joint[j].dl_user.resize(3);
            joint[j].ul_user.resize(3);
            for (int k = 0; k < 3; ++k) {
                joint[j].dl_user[k] = j == 0 ? cell0(rng) : cell1(rng);
                joint[j].ul_user[k] = j == 0 ? cell0(rng) : cell1(rng);
            }
        }
        // Feasible for the probed user: at least one RB each way.
        joint[0].dl_user[0] = user;
        joint[0].ul_user[0] = user;

        const double dl_rate = user_dl_rate(user, sbs, joint, ch, cfg);
        const double dl = downlink_delay(l0, dl_rate, cfg.backhaul_share_bps());
        CHECK(dl <= dmax_dl * (1.0 + 1e-12));

        const double ul_rate = user_ul_rate(user, sbs, joint, ch, cfg);
        const double share = min_share * units(rng);
        const double ul = uplink_delay(k0, ul_rate, share);
        CHECK(ul <= dmax_ul * (1.0 + 1e-12));
    }
}

namespace {

GainContext sample_context(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GainContext ctx;
    ctx.gamma_dl_s = 0.020;
    ctx.dmax_dl_s = 0.500;
    ctx.gamma_ul_s = 0.010;
    ctx.dmax_ul_s = 0.300;
    ctx.backhaul_share_bps = 4e9;

    ctx.dl_load_bits = 1e5 + 9e5 * unit(rng);
    const double dl_target = 0.025 + 0.45 * unit(rng);
    ctx.dl_rate_bps = ctx.dl_load_bits /
                      (dl_target - ctx.dl_load_bits / ctx.backhaul_share_bps);

    ctx.ul_load_bits = 1e4 + 9e4 * unit(rng);
    const double ul_target = 0.015 + 0.25 * unit(rng);
    const double air_fraction = 0.1 + 0.8 * unit(rng);
    ctx.ul_rate_bps = ctx.ul_load_bits / (air_fraction * ul_target);
    ctx.compute_share = ctx.ul_load_bits / ((1.0 - air_fraction) * ul_target);
    return ctx;
}

}  // namespace

TEST_CASE("compute gain: zero delta gives zero gain") {
    std::mt19937_64 rng(1);
    const GainContext ctx = sample_context(rng);
    const UtilityGain g = gain_compute(ctx, 0.0);
    CHECK(g.exact == doctest::Approx(0.0));
    CHECK(g.formula == doctest::Approx(0.0));
}

TEST_CASE("compute gain closed form matches the exact difference to 1e-9") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int accepted = 0;
    while (accepted < 10000) {
        const GainContext ctx = sample_context(rng);
        const double delta = ctx.compute_share * (0.05 + 2.95 * unit(rng));
        const double after = uplink_delay(ctx.ul_load_bits, ctx.ul_rate_bps,
                                          ctx.compute_share + delta);
        if (after < ctx.gamma_ul_s) continue;  // stay in the linear region
        ++accepted;
        const UtilityGain g = gain_compute(ctx, delta);
        CHECK(g.exact >= 0.0);
        CHECK(std::abs(g.formula - g.exact) <=
              1e-9 * std::max(std::abs(g.exact), 1e-300));
    }
}

TEST_CASE("uplink RB gain: asymptotic and general branches") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        GainContext ctx = sample_context(rng);
        // Pin the compute term comfortably above gamma so the post-change
        // delay stays in the linear region even with a huge rate boost.
        ctx.compute_share = ctx.ul_load_bits / 0.05;
        ctx.ul_rate_bps = ctx.ul_load_bits / 0.05;

        {
            const UtilityGain g = gain_ul_rb(ctx, 1000.0 * ctx.ul_rate_bps);
            CHECK(g.regime == GainRegime::MuchGreater);
            CHECK(std::abs(g.formula - g.exact) <= 0.05 * std::abs(g.exact));
        }
        {
            const UtilityGain g = gain_ul_rb(ctx, 101.0 * ctx.ul_rate_bps);
            CHECK(g.regime == GainRegime::MuchGreater);
            CHECK(std::abs(g.formula - g.exact) <= 0.05 * std::abs(g.exact));
        }
        {
            const UtilityGain g = gain_ul_rb(ctx, 0.0099 * ctx.ul_rate_bps);
            CHECK(g.regime == GainRegime::MuchLess);
            CHECK(std::abs(g.formula - g.exact) <= 0.05 * std::abs(g.exact));
        }
        {
            const UtilityGain g = gain_ul_rb(ctx, 0.37 * ctx.ul_rate_bps);
            CHECK(g.regime == GainRegime::General);
            CHECK(std::abs(g.formula - g.exact) <= 1e-6 * std::abs(g.exact));
        }
    }
}

TEST_CASE("downlink RB gain mirrors the uplink structure") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        GainContext ctx = sample_context(rng);
        // Keep the backhaul term above gamma so even an enormous extra air
        // rate leaves the post-change delay in the linear region.
        ctx.backhaul_share_bps = ctx.dl_load_bits / 0.030;
        const double air_target = 0.020 + 0.40 * unit(rng);
        ctx.dl_rate_bps = ctx.dl_load_bits / air_target;
        {
            const UtilityGain g = gain_dl_rb(ctx, 500.0 * ctx.dl_rate_bps);
            CHECK(g.regime == GainRegime::MuchGreater);
            CHECK(std::abs(g.formula - g.exact) <= 0.05 * std::abs(g.exact));
        }
        {
            const UtilityGain g = gain_dl_rb(ctx, 0.005 * ctx.dl_rate_bps);
            CHECK(g.regime == GainRegime::MuchLess);
            CHECK(std::abs(g.formula - g.exact) <= 0.05 * std::abs(g.exact));
        }
        {
            const UtilityGain g = gain_dl_rb(ctx, 0.8 * ctx.dl_rate_bps);
            CHECK(g.regime == GainRegime::General);
            CHECK(std::abs(g.formula - g.exact) <= 1e-6 * std::abs(g.exact));
        }
    }
}

TEST_CASE("allocating more RBs never lowers a delay utility") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> g(0.0, 30.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> sinrs(5);
        for (auto& s : sinrs) s = g(rng);
        std::vector<int> small(5), big(5);
        for (int k = 0; k < 5; ++k) {
            small[k] = static_cast<int>(rng() % 2);
            big[k] = small[k] | static_cast<int>(rng() % 2);
        }
        const double load = 2.532e6;
        const double dmax = 2.0, gamma = 0.02, backhaul = 4e9;
        const double u_small = utility_dl(
            downlink_delay(load, rate_downlink(small, sinrs, 2e6), backhaul), dmax, gamma);
        const double u_big = utility_dl(
            downlink_delay(load, rate_downlink(big, sinrs, 2e6), backhaul), dmax, gamma);
        CHECK(u_big >= u_small);

        const double k_load = 25320.0;
        const double v_small = utility_ul(
            uplink_delay(k_load, rate_uplink(small, sinrs, 2e6), 5e5), 0.3, 0.01);
        const double v_big = utility_ul(
            uplink_delay(k_load, rate_uplink(big, sinrs, 2e6), 5e5), 0.3, 0.01);
        CHECK(v_big >= v_small);
    }
}

TEST_CASE("gain formulas reject the clamped region") {
    std::mt19937_64 rng(3);
    GainContext ctx = sample_context(rng);
    ctx.dl_rate_bps = 1e12;  // dl delay far below gamma -> clamped at 1
    CHECK_THROWS_AS(gain_ul_rb(ctx, ctx.ul_rate_bps), std::domain_error);

    ctx = sample_context(rng);
    ctx.ul_rate_bps = 1e12;
    ctx.compute_share = 1e12;  // ul delay below gamma
    CHECK_THROWS_AS(gain_compute(ctx, ctx.compute_share), std::domain_error);
}

TEST_SUITE_END();
