#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vralloc/agents.hpp"
#include "vralloc/correlation.hpp"
#include "vralloc/net_model.hpp"

namespace vralloc {

inline constexpr const char* kToolVersion = "vralloc 0.1.0";

struct ExperimentConfig {
    NetworkConfig net;
    ContentParams content;
    EsnAgentConfig esn;
    double q_step_size = 0.2;
    LearnerKind learner = LearnerKind::EsnTransfer;
    int periods = 3;
    int slots_per_period = 150;
    int replications = 20;
    std::uint64_t seed = 1;
    int action_cap = 200;
    std::vector<int> change_schedule;  // 1-based period indices
    std::string output_dir = "out";

    void validate() const;
};

/// Flat key=value text; '#' starts a comment; dBm/MHz/Gbit style unit
/// suffixes accepted; unknown keys are errors; missing keys keep defaults.
/// See the README for the full key list.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in);

/// Number with optional unit suffix, converted to SI (dBm -> W).
double parse_quantity(const std::string& text);

/// Every field in a fixed order; hashing this detects any config change.
std::string canonical_string(const ExperimentConfig& config);

}  // namespace vralloc
