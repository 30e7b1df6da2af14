#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vralloc {

/// Per (slot, SBS) record. Delay averages run over the cell users whose
/// downlink and uplink delays are both finite; `feasible` counts those users
/// and `infeasible` the rest. Infinite delays never reach the CSV.
struct SlotRow {
    int replication = 0;
    int period = 0;
    int slot = 0;        // global slot index, 1-based
    int sbs = 0;
    double utility = 0.0;
    double avg_delay_dl_s = 0.0;
    double avg_delay_ul_s = 0.0;
    int feasible = 0;
    int infeasible = 0;
};

struct RunSummary {
    int replication = 0;
    int iterations_to_converge = 0;
    double final_utility = 0.0;
    double avg_user_delay_s = 0.0;
    int covered_users = 0;
    int uncovered_users = 0;
    long infeasible_count = 0;
};

struct MetricsRecord {
    std::vector<SlotRow> per_slot;
    /// Network utility per global slot: sum of SBS utilities / covered users.
    std::vector<double> utility_trace;
    RunSummary per_run;
};

/// Shortest-round-trip decimal form; throws std::invalid_argument on
/// non-finite values so they can never leak into a CSV.
std::string format_double(double v);

/// UTF-8, comma separated, '.' decimal, header row first.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::uint64_t fnv1a64(std::string_view data);

void write_slot_csv(const std::string& path, const std::vector<MetricsRecord>& records);
void write_run_csv(const std::string& path, const std::vector<MetricsRecord>& records);

/// manifest.txt: tool version, master seed, config hash.
void write_manifest(const std::string& path, std::string_view canonical_config,
                    std::uint64_t seed, std::string_view tool_version);

}  // namespace vralloc
