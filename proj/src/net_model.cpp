#include "vralloc/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "vralloc/rng.hpp"

namespace vralloc {

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

void NetworkConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw std::invalid_argument(std::string(name) + " must be strictly positive");
        }
    };
    positive(area_radius_m, "areaRadius");
    positive(sbs_coverage_radius_m, "sbsCoverageRadius");
    positive(subcarrier_bandwidth_hz, "subcarrierBandwidth");
    positive(sbs_tx_power_w, "sbsTxPower");
    positive(user_tx_power_w, "userTxPower");
    positive(noise_power_w, "noisePower");
    positive(path_loss_exponent, "pathLossExponent");
    positive(backhaul_total_bps, "backhaulTotal");
    positive(compute_capacity, "computeCapacity");
    positive(corr_dist_exponent, "corrDistExponent");
    positive(corr_dist_scale, "corrDistScale");
    positive(max_delay_dl_s, "maxDelayDl");
    positive(max_delay_ul_s, "maxDelayUl");
    if (num_users < 1) throw std::invalid_argument("numUsers must be >= 1");
    if (num_sbs < 1) throw std::invalid_argument("numSbs must be >= 1");
    if (num_dl_rb < 1) throw std::invalid_argument("numDownlinkRb must be >= 1");
    if (num_ul_rb < 1) throw std::invalid_argument("numUplinkRb must be >= 1");
    if (compute_levels < 1) throw std::invalid_argument("computeLevels must be >= 1");
    if (period_length_slots < 1) throw std::invalid_argument("periodLength must be >= 1");
    if (sbs_coverage_radius_m > area_radius_m) {
        throw std::invalid_argument("sbsCoverageRadius must not exceed areaRadius");
    }
}

double Topology::user_sbs_distance(int user, int sbs) const {
    return distance(user_positions[user], sbs_positions[sbs]);
}

int Topology::num_covered() const {
    int n = 0;
    for (int a : association) {
        if (a != kUncovered) ++n;
    }
    return n;
}

namespace {

Point sample_in_disk(double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double theta = 2.0 * M_PI * unit(rng);
    return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace

std::vector<int> associate_users(const std::vector<Point>& user_positions,
                                 const std::vector<Point>& sbs_positions,
                                 double coverage_radius) {
    std::vector<int> association(user_positions.size(), kUncovered);
    const double cov2 = coverage_radius * coverage_radius;
    for (std::size_t u = 0; u < user_positions.size(); ++u) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < sbs_positions.size(); ++s) {
            const double dx = user_positions[u].x - sbs_positions[s].x;
            const double dy = user_positions[u].y - sbs_positions[s].y;
            const double d2 = dx * dx + dy * dy;
            // Strict < keeps the lower index on exact ties.
            if (d2 <= cov2 && d2 < best) {
                best = d2;
                association[u] = static_cast<int>(s);
            }
        }
    }
    return association;
}

Topology generate_topology(const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    auto rng = make_stream(seed, Stream::Topology);

    Topology topo;
    topo.sbs_positions.reserve(config.num_sbs);
    for (int s = 0; s < config.num_sbs; ++s) {
        topo.sbs_positions.push_back(sample_in_disk(config.area_radius_m, rng));
    }
    topo.user_positions.reserve(config.num_users);
    for (int u = 0; u < config.num_users; ++u) {
        topo.user_positions.push_back(sample_in_disk(config.area_radius_m, rng));
    }
    topo.association =
        associate_users(topo.user_positions, topo.sbs_positions, config.sbs_coverage_radius_m);
    topo.content_id.assign(config.num_users, 0);
    topo.tracking_std.assign(config.num_users, 1.0);

    topo.cell_users.assign(config.num_sbs, {});
    for (int u = 0; u < config.num_users; ++u) {
        if (topo.association[u] != kUncovered) {
            topo.cell_users[topo.association[u]].push_back(u);
        }
    }
    return topo;
}

ChannelRealization sample_channel(const Topology& topology, const NetworkConfig& config,
                                  std::uint64_t seed) {
    auto rng = make_stream(seed, Stream::Channel);
    std::exponential_distribution<double> rayleigh_power(1.0);  // unit mean

    const int users = static_cast<int>(topology.user_positions.size());
    const int sbs = static_cast<int>(topology.sbs_positions.size());
    ChannelRealization ch;
    ch.dl_gain = GainTensor(users, sbs, config.num_dl_rb);
    ch.ul_gain = GainTensor(users, sbs, config.num_ul_rb);

    for (int u = 0; u < users; ++u) {
        for (int s = 0; s < sbs; ++s) {
            // Clamp to 1 m so the path loss never blows up in the near field.
            const double d = std::max(1.0, topology.user_sbs_distance(u, s));
            const double path = std::pow(d, -config.path_loss_exponent);
            for (int k = 0; k < config.num_dl_rb; ++k) {
                ch.dl_gain(u, s, k) = rayleigh_power(rng) * path;
            }
            for (int k = 0; k < config.num_ul_rb; ++k) {
                ch.ul_gain(u, s, k) = rayleigh_power(rng) * path;
            }
        }
    }
    return ch;
}

bool sbs_transmits_dl(const SbsAllocation& alloc, int rb) {
    return rb < static_cast<int>(alloc.dl_user.size()) && alloc.dl_user[rb] != kNoUser;
}

double sinr_downlink(int user, int sbs, int rb, const JointAllocation& joint,
                     const ChannelRealization& channel, const NetworkConfig& config) {
    const double signal = config.sbs_tx_power_w * channel.dl_gain(user, sbs, rb);
    double interference = 0.0;
    for (std::size_t l = 0; l < joint.size(); ++l) {
        if (static_cast<int>(l) == sbs) continue;
        if (sbs_transmits_dl(joint[l], rb)) {
            interference += config.sbs_tx_power_w * channel.dl_gain(user, static_cast<int>(l), rb);
        }
    }
    return signal / (config.noise_power_w + interference);
}

double sinr_uplink(int user, int sbs, int rb, const JointAllocation& joint,
                   const ChannelRealization& channel, const NetworkConfig& config) {
    const double signal = config.user_tx_power_w * channel.ul_gain(user, sbs, rb);
    double interference = 0.0;
    for (const SbsAllocation& alloc : joint) {
        if (rb >= static_cast<int>(alloc.ul_user.size())) continue;
        const int tx = alloc.ul_user[rb];
        if (tx != kNoUser && tx != user) {
            interference += config.user_tx_power_w * channel.ul_gain(tx, sbs, rb);
        }
    }
    return signal / (config.noise_power_w + interference);
}

namespace {

double rate_sum(std::span<const int> alloc, std::span<const double> sinrs, double bandwidth_hz) {
    if (alloc.size() != sinrs.size()) {
        throw std::invalid_argument("allocation vector and SINR vector differ in length");
    }
    double rate = 0.0;
    for (std::size_t k = 0; k < alloc.size(); ++k) {
        if (alloc[k]) {
            rate += bandwidth_hz * std::log2(1.0 + sinrs[k]);
        }
    }
    return rate;
}

}  // namespace

double rate_downlink(std::span<const int> alloc, std::span<const double> sinrs,
                     double bandwidth_hz) {
    return rate_sum(alloc, sinrs, bandwidth_hz);
}

double rate_uplink(std::span<const int> alloc, std::span<const double> sinrs,
                   double bandwidth_hz) {
    return rate_sum(alloc, sinrs, bandwidth_hz);
}

double user_dl_rate(int user, int sbs, const JointAllocation& joint,
                    const ChannelRealization& channel, const NetworkConfig& config) {
    const SbsAllocation& own = joint[sbs];
    double rate = 0.0;
    for (int k = 0; k < static_cast<int>(own.dl_user.size()); ++k) {
        if (own.dl_user[k] == user) {
            rate += config.subcarrier_bandwidth_hz *
                    std::log2(1.0 + sinr_downlink(user, sbs, k, joint, channel, config));
        }
    }
    return rate;
}

double user_ul_rate(int user, int sbs, const JointAllocation& joint,
                    const ChannelRealization& channel, const NetworkConfig& config) {
    const SbsAllocation& own = joint[sbs];
    double rate = 0.0;
    for (int k = 0; k < static_cast<int>(own.ul_user.size()); ++k) {
        if (own.ul_user[k] == user) {
            rate += config.subcarrier_bandwidth_hz *
                    std::log2(1.0 + sinr_uplink(user, sbs, k, joint, channel, config));
        }
    }
    return rate;
}

}  // namespace vralloc
