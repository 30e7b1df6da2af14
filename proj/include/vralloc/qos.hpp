#pragma once

#include "vralloc/net_model.hpp"

namespace vralloc {

struct DelayBreakdown {
    double dl_air_s = 0.0;
    double dl_backhaul_s = 0.0;
    double ul_air_s = 0.0;
    double ul_compute_s = 0.0;

    double dl_total() const { return dl_air_s + dl_backhaul_s; }
    double ul_total() const { return ul_air_s + ul_compute_s; }
};

/// Air + backhaul transmission time for one VR image load. A zero rate with
/// a nonzero load yields +inf; the utility layer maps that to 0.
double downlink_delay(double load_bits, double rate_bps, double backhaul_share_bps);
DelayBreakdown downlink_delay_parts(double load_bits, double rate_bps,
                                    double backhaul_share_bps);

/// Air + compute time for a tracking payload.
double uplink_delay(double load_bits, double rate_bps, double compute_share);
DelayBreakdown uplink_delay_parts(double load_bits, double rate_bps, double compute_share);

/// Worst-case downlink delay for (user, sbs): zero-correlation load on the
/// single worst-SINR RB with every other SBS co-channel.
double max_delay_dl(int user, int sbs, const NetworkConfig& config,
                    const ChannelRealization& channel, double base_dl_bits);

/// Worst-case uplink delay: zero-correlation payload on the single worst RB,
/// each other SBS contributing its strongest possible interferer, and the
/// smallest feasible compute share. quant_levels is the cell's effective
/// number of compute quantization levels (max(M, cell size)).
double max_delay_ul(int user, int sbs, const Topology& topology, const NetworkConfig& config,
                    const ChannelRealization& channel, double base_ul_bits, int quant_levels);

/// Normalized delay utility: 1 below the tolerable delay, linear down to 0
/// at the worst-case delay, clamped to [0,1] beyond (infinite delay -> 0).
/// Requires dmax > gamma.
double utility_dl(double delay_s, double dmax_s, double gamma_s);
double utility_ul(double delay_s, double dmax_s, double gamma_s);

double utility_total(double u_dl, double u_ul);

/// Full before-state for the utility-gain formulas.
struct GainContext {
    double dl_load_bits;        // L_i(phi_max)
    double dl_rate_bps;         // c_ij(s)
    double backhaul_share_bps;  // V_F / U
    double dmax_dl_s;
    double gamma_dl_s;
    double ul_load_bits;        // K_i(sigma_max)
    double ul_rate_bps;         // c_ij(v)
    double compute_share;       // m_ij
    double dmax_ul_s;
    double gamma_ul_s;
};

enum class GainRegime { MuchGreater, MuchLess, General };

struct UtilityGain {
    double exact;    // utility_total(after) - utility_total(before)
    double formula;  // value of the regime's closed-form branch
    GainRegime regime;
};

/// Regime thresholds on the added-rate / current-rate ratio.
struct GainThresholds {
    double much_greater = 100.0;
    double much_less = 0.01;
};

/// Gain from adding uplink rate rate_delta_bps (extra RBs). Throws
/// std::domain_error when any leg's delay leaves [gamma, dmax] before or
/// after the change.
UtilityGain gain_ul_rb(const GainContext& ctx, double rate_delta_bps,
                       const GainThresholds& thresholds = {});

/// Gain from adding downlink rate rate_delta_bps.
UtilityGain gain_dl_rb(const GainContext& ctx, double rate_delta_bps,
                       const GainThresholds& thresholds = {});

/// Gain from adding compute compute_delta. The closed form is exact, so
/// formula == exact up to roundoff and regime is General.
UtilityGain gain_compute(const GainContext& ctx, double compute_delta);

}  // namespace vralloc
