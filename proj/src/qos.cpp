#include "vralloc/qos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vralloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_div(double load_bits, double rate) {
    if (load_bits == 0.0) return 0.0;
    if (rate <= 0.0) return kInf;
    return load_bits / rate;
}

}  // namespace

DelayBreakdown downlink_delay_parts(double load_bits, double rate_bps,
                                    double backhaul_share_bps) {
    DelayBreakdown d;
    d.dl_air_s = safe_div(load_bits, rate_bps);
    d.dl_backhaul_s = safe_div(load_bits, backhaul_share_bps);
    return d;
}

double downlink_delay(double load_bits, double rate_bps, double backhaul_share_bps) {
    return downlink_delay_parts(load_bits, rate_bps, backhaul_share_bps).dl_total();
}

DelayBreakdown uplink_delay_parts(double load_bits, double rate_bps, double compute_share) {
    DelayBreakdown d;
    d.ul_air_s = safe_div(load_bits, rate_bps);
    d.ul_compute_s = safe_div(load_bits, compute_share);
    return d;
}

double uplink_delay(double load_bits, double rate_bps, double compute_share) {
    return uplink_delay_parts(load_bits, rate_bps, compute_share).ul_total();
}

double max_delay_dl(int user, int sbs, const NetworkConfig& config,
                    const ChannelRealization& channel, double base_dl_bits) {
    double worst_sinr = kInf;
    for (int k = 0; k < config.num_dl_rb; ++k) {
        const double signal = config.sbs_tx_power_w * channel.dl_gain(user, sbs, k);
        double interference = 0.0;
        for (int l = 0; l < channel.dl_gain.sbs(); ++l) {
            if (l == sbs) continue;
            interference += config.sbs_tx_power_w * channel.dl_gain(user, l, k);
        }
        worst_sinr = std::min(worst_sinr, signal / (config.noise_power_w + interference));
    }
    const double worst_rate = config.subcarrier_bandwidth_hz * std::log2(1.0 + worst_sinr);
    return downlink_delay(base_dl_bits, worst_rate, config.backhaul_share_bps());
}

double max_delay_ul(int user, int sbs, const Topology& topology, const NetworkConfig& config,
                    const ChannelRealization& channel, double base_ul_bits, int quant_levels) {
    double worst_sinr = kInf;
    for (int k = 0; k < config.num_ul_rb; ++k) {
        const double signal = config.user_tx_power_w * channel.ul_gain(user, sbs, k);
        double interference = 0.0;
        for (int l = 0; l < static_cast<int>(topology.cell_users.size()); ++l) {
            if (l == sbs) continue;
            double strongest = 0.0;
            for (int peer : topology.cell_users[l]) {
                strongest = std::max(strongest, channel.ul_gain(peer, sbs, k));
            }
            interference += config.user_tx_power_w * strongest;
        }
        worst_sinr = std::min(worst_sinr, signal / (config.noise_power_w + interference));
    }
    const double worst_rate = config.subcarrier_bandwidth_hz * std::log2(1.0 + worst_sinr);
    const double min_share = config.compute_capacity / quant_levels;
    return uplink_delay(base_ul_bits, worst_rate, min_share);
}

namespace {

double normalized_utility(double delay_s, double dmax_s, double gamma_s) {
    if (!(dmax_s > gamma_s)) {
        throw std::invalid_argument("delay utility requires dMax > tolerable delay");
    }
    if (delay_s < gamma_s) return 1.0;
    return std::clamp((dmax_s - delay_s) / (dmax_s - gamma_s), 0.0, 1.0);
}

}  // namespace

double utility_dl(double delay_s, double dmax_s, double gamma_s) {
    return normalized_utility(delay_s, dmax_s, gamma_s);
}

double utility_ul(double delay_s, double dmax_s, double gamma_s) {
    return normalized_utility(delay_s, dmax_s, gamma_s);
}

double utility_total(double u_dl, double u_ul) {
    return u_dl * u_ul;
}

namespace {

void require_linear(double delay_s, double dmax_s, double gamma_s, const char* what) {
    if (delay_s < gamma_s || delay_s > dmax_s) {
        throw std::domain_error(std::string("theorem out of domain: ") + what +
                                " delay outside the linear utility region");
    }
}

GainRegime classify(double ratio, const GainThresholds& thresholds) {
    if (ratio >= thresholds.much_greater) return GainRegime::MuchGreater;
    if (ratio <= thresholds.much_less) return GainRegime::MuchLess;
    return GainRegime::General;
}

}  // namespace

UtilityGain gain_ul_rb(const GainContext& ctx, double rate_delta_bps,
                       const GainThresholds& thresholds) {
    const double dl_delay = downlink_delay(ctx.dl_load_bits, ctx.dl_rate_bps,
                                           ctx.backhaul_share_bps);
    const double ul_before = uplink_delay(ctx.ul_load_bits, ctx.ul_rate_bps, ctx.compute_share);
    const double ul_after =
        uplink_delay(ctx.ul_load_bits, ctx.ul_rate_bps + rate_delta_bps, ctx.compute_share);
    require_linear(dl_delay, ctx.dmax_dl_s, ctx.gamma_dl_s, "downlink");
    require_linear(ul_before, ctx.dmax_ul_s, ctx.gamma_ul_s, "uplink (before)");
    require_linear(ul_after, ctx.dmax_ul_s, ctx.gamma_ul_s, "uplink (after)");

    const double u_dl = utility_dl(dl_delay, ctx.dmax_dl_s, ctx.gamma_dl_s);
    const double exact =
        utility_total(u_dl, utility_ul(ul_after, ctx.dmax_ul_s, ctx.gamma_ul_s)) -
        utility_total(u_dl, utility_ul(ul_before, ctx.dmax_ul_s, ctx.gamma_ul_s));

    const auto f = [&](double x) {
        return u_dl * ctx.ul_load_bits * x / (ctx.dmax_ul_s - ctx.gamma_ul_s);
    };
    const double c_v = ctx.ul_rate_bps;
    const double c_dv = rate_delta_bps;
    const GainRegime regime = classify(c_dv / c_v, thresholds);
    double formula = 0.0;
    switch (regime) {
        case GainRegime::MuchGreater: formula = f(1.0 / c_v); break;
        case GainRegime::MuchLess: formula = f(c_dv / (c_v * c_v)); break;
        case GainRegime::General: formula = f(c_dv / (c_v * c_v + c_v * c_dv)); break;
    }
    return {exact, formula, regime};
}

UtilityGain gain_dl_rb(const GainContext& ctx, double rate_delta_bps,
                       const GainThresholds& thresholds) {
    const double ul_delay = uplink_delay(ctx.ul_load_bits, ctx.ul_rate_bps, ctx.compute_share);
    const double dl_before = downlink_delay(ctx.dl_load_bits, ctx.dl_rate_bps,
                                            ctx.backhaul_share_bps);
    const double dl_after = downlink_delay(ctx.dl_load_bits, ctx.dl_rate_bps + rate_delta_bps,
                                           ctx.backhaul_share_bps);
    require_linear(ul_delay, ctx.dmax_ul_s, ctx.gamma_ul_s, "uplink");
    require_linear(dl_before, ctx.dmax_dl_s, ctx.gamma_dl_s, "downlink (before)");
    require_linear(dl_after, ctx.dmax_dl_s, ctx.gamma_dl_s, "downlink (after)");

    const double u_ul = utility_ul(ul_delay, ctx.dmax_ul_s, ctx.gamma_ul_s);
    const double exact =
        utility_total(utility_dl(dl_after, ctx.dmax_dl_s, ctx.gamma_dl_s), u_ul) -
        utility_total(utility_dl(dl_before, ctx.dmax_dl_s, ctx.gamma_dl_s), u_ul);

    const auto f = [&](double x) {
        return u_ul * ctx.dl_load_bits * x / (ctx.dmax_dl_s - ctx.gamma_dl_s);
    };
    const double c_s = ctx.dl_rate_bps;
    const double c_ds = rate_delta_bps;
    const GainRegime regime = classify(c_ds / c_s, thresholds);
    double formula = 0.0;
    switch (regime) {
        case GainRegime::MuchGreater: formula = f(1.0 / c_s); break;
        case GainRegime::MuchLess: formula = f(c_ds / (c_s * c_s)); break;
        case GainRegime::General: formula = f(c_ds / (c_s * c_s + c_s * c_ds)); break;
    }
    return {exact, formula, regime};
}

UtilityGain gain_compute(const GainContext& ctx, double compute_delta) {
    const double dl_delay = downlink_delay(ctx.dl_load_bits, ctx.dl_rate_bps,
                                           ctx.backhaul_share_bps);
    const double ul_before = uplink_delay(ctx.ul_load_bits, ctx.ul_rate_bps, ctx.compute_share);
    const double ul_after = uplink_delay(ctx.ul_load_bits, ctx.ul_rate_bps,
                                         ctx.compute_share + compute_delta);
    require_linear(dl_delay, ctx.dmax_dl_s, ctx.gamma_dl_s, "downlink");
    require_linear(ul_before, ctx.dmax_ul_s, ctx.gamma_ul_s, "uplink (before)");
    require_linear(ul_after, ctx.dmax_ul_s, ctx.gamma_ul_s, "uplink (after)");

    const double u_dl = utility_dl(dl_delay, ctx.dmax_dl_s, ctx.gamma_dl_s);
    const double exact =
        utility_total(u_dl, utility_ul(ul_after, ctx.dmax_ul_s, ctx.gamma_ul_s)) -
        utility_total(u_dl, utility_ul(ul_before, ctx.dmax_ul_s, ctx.gamma_ul_s));

    const double m = ctx.compute_share;
    const double formula = u_dl * ctx.ul_load_bits * compute_delta /
                           ((ctx.dmax_ul_s - ctx.gamma_ul_s) * (m * (m + compute_delta)));
    return {exact, formula, GainRegime::General};
}

}  // namespace vralloc
