#include "vralloc/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace vralloc {

std::string format_double(double v) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument("refusing to write a non-finite value");
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out << ',';
        out << header[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << row[c];
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

void write_slot_csv(const std::string& path, const std::vector<MetricsRecord>& records) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& rec : records) {
        for (const auto& r : rec.per_slot) {
            rows.push_back({std::to_string(r.replication), std::to_string(r.period),
                            std::to_string(r.slot), std::to_string(r.sbs),
                            format_double(r.utility), format_double(r.avg_delay_dl_s),
                            format_double(r.avg_delay_ul_s), std::to_string(r.feasible),
                            std::to_string(r.infeasible)});
        }
    }
    write_csv(path,
              {"replication", "period", "slot", "sbs", "utility", "avgDelayDl_s",
               "avgDelayUl_s", "feasible", "infeasible"},
              rows);
}

void write_run_csv(const std::string& path, const std::vector<MetricsRecord>& records) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& rec : records) {
        const auto& r = rec.per_run;
        rows.push_back({std::to_string(r.replication), std::to_string(r.iterations_to_converge),
                        format_double(r.final_utility), format_double(r.avg_user_delay_s),
                        std::to_string(r.covered_users), std::to_string(r.uncovered_users),
                        std::to_string(r.infeasible_count)});
    }
    write_csv(path,
              {"replication", "iterationsToConverge", "finalUtility", "avgUserDelay_s",
               "coveredUsers", "uncoveredUsers", "infeasibleUserSlots"},
              rows);
}

void write_manifest(const std::string& path, std::string_view canonical_config,
                    std::uint64_t seed, std::string_view tool_version) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    char hash[20];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config)));
    out << "tool=" << tool_version << '\n';
    out << "seed=" << seed << '\n';
    out << "configHash=" << hash << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace vralloc
