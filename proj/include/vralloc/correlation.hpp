#pragma once

#include <cstdint>
#include <vector>

#include "vralloc/net_model.hpp"

namespace vralloc {

/// Synthetic content parameters. Pixel overlaps stand in for the image
/// diffing a real deployment would run in the cloud.
struct ContentParams {
    int num_contents = 3;
    std::int64_t pixels_per_user = 1'000'000;  // N_i
    double base_dl_bits = 2.532e6;             // L_i(0), bits per period
    double base_ul_bits = 25320.0;             // K_i(0), bits per period
    double overlap_lo = 0.3;                   // omega range for same-content pairs
    double overlap_hi = 0.9;
    double tracking_std = 1.0;                 // sigma_i, equal for all users
};

struct ContentModel {
    std::vector<double> base_dl_bits;               // L_i(0)
    std::vector<double> base_ul_bits;               // K_i(0)
    std::vector<std::int64_t> pixel_count;          // N_i
    std::vector<std::vector<std::int64_t>> overlap; // N_ik, symmetric, 0 across contents
};

struct CorrelationState {
    std::vector<double> phi_max;                // per user, over co-associated peers
    std::vector<double> rho_max;                // distance-only uplink factor, per user
    std::vector<std::vector<double>> covariance;// sigma_ij, symmetric
};

/// phi_ik = N_ik / (N_i + N_k). Throws std::invalid_argument when both pixel
/// counts are zero (degenerate content).
double downlink_correlation(std::int64_t n_i, std::int64_t n_k, std::int64_t n_ik);

/// Assigns uniform content labels and tracking stds in place.
void assign_content(Topology& topology, const ContentParams& params, std::uint64_t seed);

/// Same-content pairs share round(omega * min(N_i, N_k)) pixels with omega
/// uniform on [overlap_lo, overlap_hi]; cross-content pairs share none.
ContentModel synthesize_overlap(const Topology& topology, const ContentParams& params,
                                std::uint64_t seed);

/// Power-exponential covariance sigma_i*sigma_j*exp(-d^alpha/kappa).
double uplink_covariance(double sigma_i, double sigma_j, double dist_m, double alpha,
                         double kappa);

/// Per-user maxima over co-associated peers; singletons get (0, 0).
CorrelationState max_correlations(const Topology& topology, const ContentModel& content,
                                  const NetworkConfig& config);

/// Correlation shrinks the transmit load linearly; never below zero, never
/// above the base load.
double effective_dl_load(double base_bits, double phi_max);
double effective_ul_load(double base_bits, double rho_max);

}  // namespace vralloc
