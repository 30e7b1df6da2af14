#include "vralloc/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "vralloc/rng.hpp"

namespace vralloc {

double downlink_correlation(std::int64_t n_i, std::int64_t n_k, std::int64_t n_ik) {
    if (n_i + n_k == 0) {
        throw std::invalid_argument("downlink_correlation: degenerate content, N_i + N_k == 0");
    }
    return static_cast<double>(n_ik) / static_cast<double>(n_i + n_k);
}

void assign_content(Topology& topology, const ContentParams& params, std::uint64_t seed) {
    auto rng = make_stream(seed, Stream::Content);
    std::uniform_int_distribution<int> pick(0, std::max(0, params.num_contents - 1));
    const int users = static_cast<int>(topology.user_positions.size());
    topology.content_id.resize(users);
    topology.tracking_std.assign(users, params.tracking_std);
    for (int u = 0; u < users; ++u) {
        topology.content_id[u] = pick(rng);
    }
}

ContentModel synthesize_overlap(const Topology& topology, const ContentParams& params,
                                std::uint64_t seed) {
    auto rng = make_stream(seed, Stream::Overlap);
    std::uniform_real_distribution<double> omega(params.overlap_lo, params.overlap_hi);

    const int users = static_cast<int>(topology.user_positions.size());
    ContentModel model;
    model.base_dl_bits.assign(users, params.base_dl_bits);
    model.base_ul_bits.assign(users, params.base_ul_bits);
    model.pixel_count.assign(users, params.pixels_per_user);
    model.overlap.assign(users, std::vector<std::int64_t>(users, 0));

    for (int i = 0; i < users; ++i) {
        for (int k = i + 1; k < users; ++k) {
            if (topology.content_id[i] != topology.content_id[k]) continue;
            const auto shared = static_cast<std::int64_t>(std::llround(
                omega(rng) *
                static_cast<double>(std::min(model.pixel_count[i], model.pixel_count[k]))));
            model.overlap[i][k] = shared;
            model.overlap[k][i] = shared;
        }
    }
    return model;
}

double uplink_covariance(double sigma_i, double sigma_j, double dist_m, double alpha,
                         double kappa) {
    return sigma_i * sigma_j * std::exp(-std::pow(dist_m, alpha) / kappa);
}

CorrelationState max_correlations(const Topology& topology, const ContentModel& content,
                                  const NetworkConfig& config) {
    const int users = static_cast<int>(topology.user_positions.size());
    CorrelationState state;
    state.phi_max.assign(users, 0.0);
    state.rho_max.assign(users, 0.0);
    state.covariance.assign(users, std::vector<double>(users, 0.0));

    for (int i = 0; i < users; ++i) {
        for (int j = 0; j < users; ++j) {
            if (i == j) continue;
            const double d = distance(topology.user_positions[i], topology.user_positions[j]);
            state.covariance[i][j] =
                uplink_covariance(topology.tracking_std[i], topology.tracking_std[j], d,
                                  config.corr_dist_exponent, config.corr_dist_scale);
        }
    }

    for (int sbs = 0; sbs < static_cast<int>(topology.cell_users.size()); ++sbs) {
        const auto& cell = topology.cell_users[sbs];
        for (int i : cell) {
            for (int k : cell) {
                if (i == k) continue;
                const double phi = downlink_correlation(content.pixel_count[i],
                                                        content.pixel_count[k],
                                                        content.overlap[i][k]);
                state.phi_max[i] = std::max(state.phi_max[i], phi);
                const double d =
                    distance(topology.user_positions[i], topology.user_positions[k]);
                const double rho = std::exp(-std::pow(d, config.corr_dist_exponent) /
                                            config.corr_dist_scale);
                state.rho_max[i] = std::max(state.rho_max[i], rho);
            }
        }
    }
    return state;
}

double effective_dl_load(double base_bits, double phi_max) {
    return std::clamp(base_bits * (1.0 - phi_max), 0.0, base_bits);
}

double effective_ul_load(double base_bits, double rho_max) {
    return std::clamp(base_bits * (1.0 - rho_max), 0.0, base_bits);
}

}  // namespace vralloc
