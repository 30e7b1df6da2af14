#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vralloc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

/// Static network parameters. All values are SI units internally; dBm/MHz
/// style inputs are converted once at config load.
struct NetworkConfig {
    double area_radius_m = 100.0;        // deployment disk radius r
    double sbs_coverage_radius_m = 30.0; // per-SBS coverage radius r_B
    int num_users = 25;                  // U
    int num_sbs = 4;                     // B (number of SBSs)
    double subcarrier_bandwidth_hz = 2e6;
    int num_dl_rb = 5;                   // S
    int num_ul_rb = 5;                   // V
    double sbs_tx_power_w = 0.1;         // P_B, 20 dBm
    double user_tx_power_w = 0.1;        // P_U, 20 dBm
    double noise_power_w = 3.1622776601683794e-13;  // -95 dBm
    double path_loss_exponent = 3.0;     // beta
    double backhaul_total_bps = 100e9;   // V_F, shared equally by all users
    double compute_capacity = 1e6;       // c, compute units/s per SBS (bits/s equivalent)
    int compute_levels = 5;              // M, quantization levels of the compute split
    double corr_dist_exponent = 2.0;     // alpha
    double corr_dist_scale = 900.0;      // kappa, meters^alpha
    double max_delay_dl_s = 0.020;       // gamma_D
    double max_delay_ul_s = 0.010;       // gamma_D^u
    int period_length_slots = 150;       // T

    double backhaul_share_bps() const { return backhaul_total_bps / num_users; }

    /// Throws std::invalid_argument on the first violated invariant.
    void validate() const;
};

/// Sentinel for users outside every SBS's coverage disk. Uncovered users
/// take no part in the game and are reported separately in metrics.
inline constexpr int kUncovered = -1;

struct Topology {
    std::vector<Point> sbs_positions;
    std::vector<Point> user_positions;
    std::vector<int> association;       // user -> SBS index, or kUncovered
    std::vector<int> content_id;        // user -> content label
    std::vector<double> tracking_std;   // user -> sigma_i
    std::vector<std::vector<int>> cell_users;  // SBS -> sorted associated users

    double user_sbs_distance(int user, int sbs) const;
    int num_covered() const;
};

/// Per-period block-fading gains, gain = E * d^(-beta) with E unit-mean
/// exponential, independent across (user, SBS, RB, link direction).
class GainTensor {
public:
    GainTensor() = default;
    GainTensor(int users, int sbs, int rbs)
        : users_(users), sbs_(sbs), rbs_(rbs),
          data_(static_cast<std::size_t>(users) * sbs * rbs) {}

    double& operator()(int u, int s, int k) {
        return data_[(static_cast<std::size_t>(u) * sbs_ + s) * rbs_ + k];
    }
    double operator()(int u, int s, int k) const {
        return data_[(static_cast<std::size_t>(u) * sbs_ + s) * rbs_ + k];
    }
    int users() const { return users_; }
    int sbs() const { return sbs_; }
    int rbs() const { return rbs_; }

private:
    int users_ = 0, sbs_ = 0, rbs_ = 0;
    std::vector<double> data_;
};

struct ChannelRealization {
    GainTensor dl_gain;  // h_{ij}^k
    GainTensor ul_gain;  // uplink gains, same layout
};

/// Sentinel for a resource block an SBS leaves dark.
inline constexpr int kNoUser = -1;

/// One SBS's RB assignment: element k is the global user index the block is
/// assigned to. Realized actions always assign every block; exploratory or
/// test allocations may leave blocks dark.
struct SbsAllocation {
    std::vector<int> dl_user;  // size S
    std::vector<int> ul_user;  // size V
};

/// Index = SBS. An idle SBS (no associated users) has empty vectors and
/// neither transmits nor schedules uplink.
using JointAllocation = std::vector<SbsAllocation>;

/// Uniform placement of SBSs then users in the deployment disk, followed by
/// nearest-in-range association. Deterministic given seed. Content labels
/// and tracking stds are left at defaults (0 and 1) for the content stage.
Topology generate_topology(const NetworkConfig& config, std::uint64_t seed);

/// Nearest SBS within coverage_radius; exact distance ties go to the lower
/// SBS index; no SBS in range -> kUncovered.
std::vector<int> associate_users(const std::vector<Point>& user_positions,
                                 const std::vector<Point>& sbs_positions,
                                 double coverage_radius);

ChannelRealization sample_channel(const Topology& topology, const NetworkConfig& config,
                                  std::uint64_t seed);

bool sbs_transmits_dl(const SbsAllocation& alloc, int rb);

/// SINR of user i from SBS j on downlink RB k. Interferers are the SBSs
/// that assigned RB k to any of their users.
double sinr_downlink(int user, int sbs, int rb, const JointAllocation& joint,
                     const ChannelRealization& channel, const NetworkConfig& config);

/// Uplink SINR at SBS j for user i on RB k. Interferers are the other users
/// transmitting on RB k anywhere in the network; their gain is toward SBS j.
double sinr_uplink(int user, int sbs, int rb, const JointAllocation& joint,
                   const ChannelRealization& channel, const NetworkConfig& config);

/// Sum over allocated RBs of B*log2(1+sinr). alloc is the binary assignment
/// vector; zero vector -> 0.
double rate_downlink(std::span<const int> alloc, std::span<const double> sinrs,
                     double bandwidth_hz);
double rate_uplink(std::span<const int> alloc, std::span<const double> sinrs,
                   double bandwidth_hz);

/// Rate of `user` served by `sbs` under the joint allocation (derives the
/// binary vector and SINRs from `joint`).
double user_dl_rate(int user, int sbs, const JointAllocation& joint,
                    const ChannelRealization& channel, const NetworkConfig& config);
double user_ul_rate(int user, int sbs, const JointAllocation& joint,
                    const ChannelRealization& channel, const NetworkConfig& config);

}  // namespace vralloc
