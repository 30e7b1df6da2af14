#include "vralloc/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vralloc {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double unit_factor(const std::string& unit) {
    static const std::map<std::string, double> factors = {
        {"W", 1.0},       {"mW", 1e-3},
        {"Hz", 1.0},      {"kHz", 1e3},    {"MHz", 1e6},    {"GHz", 1e9},
        {"bit", 1.0},     {"kbit", 1e3},   {"Mbit", 1e6},   {"Gbit", 1e9},
        {"bit/s", 1.0},   {"kbit/s", 1e3}, {"Mbit/s", 1e6}, {"Gbit/s", 1e9},
        {"s", 1.0},       {"ms", 1e-3},    {"us", 1e-6},
        {"m", 1.0},
    };
    const auto it = factors.find(unit);
    if (it == factors.end()) throw std::invalid_argument("unknown unit: " + unit);
    return it->second;
}

}  // namespace

double parse_quantity(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty value");
    const char* begin = s.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) throw std::invalid_argument("not a number: " + s);
    const std::string unit = trim(std::string(end));
    if (unit.empty()) return value;
    if (unit == "dBm") return std::pow(10.0, (value - 30.0) / 10.0);
    return value * unit_factor(unit);
}

namespace {

std::int64_t parse_integer(const std::string& text) {
    const double v = parse_quantity(text);
    const auto r = static_cast<std::int64_t>(std::llround(v));
    if (std::abs(v - static_cast<double>(r)) > 1e-9) {
        throw std::invalid_argument("expected an integer, got: " + text);
    }
    return r;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(static_cast<int>(parse_integer(item)));
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"areaRadius", [](auto& c, const auto& v) { c.net.area_radius_m = parse_quantity(v); }},
        {"sbsCoverageRadius",
         [](auto& c, const auto& v) { c.net.sbs_coverage_radius_m = parse_quantity(v); }},
        {"numUsers", [](auto& c, const auto& v) { c.net.num_users = (int)parse_integer(v); }},
        {"numSbs", [](auto& c, const auto& v) { c.net.num_sbs = (int)parse_integer(v); }},
        {"subcarrierBandwidth",
         [](auto& c, const auto& v) { c.net.subcarrier_bandwidth_hz = parse_quantity(v); }},
        {"numDownlinkRb", [](auto& c, const auto& v) { c.net.num_dl_rb = (int)parse_integer(v); }},
        {"numUplinkRb", [](auto& c, const auto& v) { c.net.num_ul_rb = (int)parse_integer(v); }},
        {"sbsTxPower", [](auto& c, const auto& v) { c.net.sbs_tx_power_w = parse_quantity(v); }},
        {"userTxPower", [](auto& c, const auto& v) { c.net.user_tx_power_w = parse_quantity(v); }},
        {"noisePower", [](auto& c, const auto& v) { c.net.noise_power_w = parse_quantity(v); }},
        {"pathLossExponent",
         [](auto& c, const auto& v) { c.net.path_loss_exponent = parse_quantity(v); }},
        {"backhaulTotal",
         [](auto& c, const auto& v) { c.net.backhaul_total_bps = parse_quantity(v); }},
        {"computeCapacity",
         [](auto& c, const auto& v) { c.net.compute_capacity = parse_quantity(v); }},
        {"computeLevels",
         [](auto& c, const auto& v) { c.net.compute_levels = (int)parse_integer(v); }},
        {"corrDistExponent",
         [](auto& c, const auto& v) { c.net.corr_dist_exponent = parse_quantity(v); }},
        {"corrDistScale",
         [](auto& c, const auto& v) { c.net.corr_dist_scale = parse_quantity(v); }},
        {"maxDelayDl", [](auto& c, const auto& v) { c.net.max_delay_dl_s = parse_quantity(v); }},
        {"maxDelayUl", [](auto& c, const auto& v) { c.net.max_delay_ul_s = parse_quantity(v); }},
        {"numContents",
         [](auto& c, const auto& v) { c.content.num_contents = (int)parse_integer(v); }},
        {"pixelsPerUser",
         [](auto& c, const auto& v) { c.content.pixels_per_user = parse_integer(v); }},
        {"baseDlBits", [](auto& c, const auto& v) { c.content.base_dl_bits = parse_quantity(v); }},
        {"baseUlBits", [](auto& c, const auto& v) { c.content.base_ul_bits = parse_quantity(v); }},
        {"overlapLo", [](auto& c, const auto& v) { c.content.overlap_lo = parse_quantity(v); }},
        {"overlapHi", [](auto& c, const auto& v) { c.content.overlap_hi = parse_quantity(v); }},
        {"trackingStd",
         [](auto& c, const auto& v) { c.content.tracking_std = parse_quantity(v); }},
        {"reservoirUnits",
         [](auto& c, const auto& v) { c.esn.units = (int)parse_integer(v); }},
        {"spectralRadius",
         [](auto& c, const auto& v) { c.esn.spectral_radius = parse_quantity(v); }},
        {"lambda", [](auto& c, const auto& v) { c.esn.lambda = parse_quantity(v); }},
        {"lambdaPrime", [](auto& c, const auto& v) { c.esn.lambda_prime = parse_quantity(v); }},
        {"washout", [](auto& c, const auto& v) { c.esn.washout = (int)parse_integer(v); }},
        {"bootstrapPasses",
         [](auto& c, const auto& v) { c.esn.bootstrap_passes = (int)parse_integer(v); }},
        {"epsilonInit", [](auto& c, const auto& v) { c.esn.explore.init = parse_quantity(v); }},
        {"epsilonDecay", [](auto& c, const auto& v) { c.esn.explore.decay = parse_quantity(v); }},
        {"epsilonFloor", [](auto& c, const auto& v) { c.esn.explore.floor = parse_quantity(v); }},
        {"qStepSize", [](auto& c, const auto& v) { c.q_step_size = parse_quantity(v); }},
        {"learner", [](auto& c, const auto& v) { c.learner = learner_from_name(trim(v)); }},
        {"periods", [](auto& c, const auto& v) { c.periods = (int)parse_integer(v); }},
        {"slotsPerPeriod",
         [](auto& c, const auto& v) {
             c.slots_per_period = (int)parse_integer(v);
             c.net.period_length_slots = c.slots_per_period;
         }},
        {"replications",
         [](auto& c, const auto& v) { c.replications = (int)parse_integer(v); }},
        {"seed",
         [](auto& c, const auto& v) { c.seed = (std::uint64_t)parse_integer(v); }},
        {"actionCap", [](auto& c, const auto& v) { c.action_cap = (int)parse_integer(v); }},
        {"changeSchedule",
         [](auto& c, const auto& v) { c.change_schedule = parse_int_list(v); }},
        {"outputDir", [](auto& c, const auto& v) { c.output_dir = trim(v); }},
    };
    return table;
}

const std::map<std::string, std::string>& aliases() {
    static const std::map<std::string, std::string> table = {
        {"r", "areaRadius"},          {"r_B", "sbsCoverageRadius"},
        {"U", "numUsers"},            {"S", "numDownlinkRb"},
        {"V", "numUplinkRb"},         {"P_B", "sbsTxPower"},
        {"P_U", "userTxPower"},       {"N0", "noisePower"},
        {"beta", "pathLossExponent"}, {"V_F", "backhaulTotal"},
        {"c", "computeCapacity"},     {"M", "computeLevels"},
        {"alpha", "corrDistExponent"},{"kappa", "corrDistScale"},
        {"gamma_D", "maxDelayDl"},    {"gamma_D_u", "maxDelayUl"},
        {"L0", "baseDlBits"},         {"K0", "baseUlBits"},
        {"N_w", "reservoirUnits"},    {"lambda_prime", "lambdaPrime"},
        {"alpha_q", "qStepSize"},     {"T", "slotsPerPeriod"},
        {"bandwidth", "subcarrierBandwidth"},
    };
    return table;
}

}  // namespace

void ExperimentConfig::validate() const {
    net.validate();
    if (periods < 1) throw std::invalid_argument("periods must be >= 1");
    if (slots_per_period < 1) throw std::invalid_argument("slotsPerPeriod must be >= 1");
    if (replications < 1) throw std::invalid_argument("replications must be >= 1");
    if (action_cap < 1) throw std::invalid_argument("actionCap must be >= 1");
    for (int p : change_schedule) {
        if (p < 1 || p > periods) {
            throw std::invalid_argument("changeSchedule entries must lie in [1, periods]");
        }
    }
    if (content.num_contents < 1) throw std::invalid_argument("numContents must be >= 1");
    if (content.pixels_per_user < 1) throw std::invalid_argument("pixelsPerUser must be >= 1");
    if (!(content.base_dl_bits > 0) || !(content.base_ul_bits > 0)) {
        throw std::invalid_argument("base loads must be strictly positive");
    }
    if (content.overlap_lo < 0 || content.overlap_hi > 1 ||
        content.overlap_lo > content.overlap_hi) {
        throw std::invalid_argument("overlap range must satisfy 0 <= lo <= hi <= 1");
    }
    if (esn.units < 1) throw std::invalid_argument("reservoirUnits must be >= 1");
    if (!(esn.spectral_radius > 0) || esn.spectral_radius >= 1.0) {
        throw std::invalid_argument("spectralRadius must lie in (0,1)");
    }
    if (!(esn.lambda > 0) || !(esn.lambda_prime > 0)) {
        throw std::invalid_argument("learning rates must be strictly positive");
    }
    if (esn.washout < 0) throw std::invalid_argument("washout must be >= 0");
    if (esn.bootstrap_passes < 0) throw std::invalid_argument("bootstrapPasses must be >= 0");
    if (esn.explore.init < 0 || esn.explore.init > 1 || esn.explore.floor < 0 ||
        esn.explore.floor > 1 || esn.explore.decay <= 0 || esn.explore.decay > 1) {
        throw std::invalid_argument("exploration schedule outside valid ranges");
    }
    if (!(q_step_size > 0) || q_step_size > 1) {
        throw std::invalid_argument("qStepSize must lie in (0,1]");
    }
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (const auto alias = aliases().find(key); alias != aliases().end()) {
            key = alias->second;
        }
        const auto setter = setters().find(key);
        if (setter == setters().end()) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": unknown key: " + key);
        }
        try {
            setter->second(config, value);
        } catch (const std::exception& e) {
            throw std::invalid_argument("line " + std::to_string(line_no) + " (" + key +
                                        "): " + e.what());
        }
    }
    config.net.period_length_slots = config.slots_per_period;
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse_config(in);
}

std::string canonical_string(const ExperimentConfig& c) {
    std::ostringstream out;
    out.precision(17);
    out << "areaRadius=" << c.net.area_radius_m << '\n'
        << "sbsCoverageRadius=" << c.net.sbs_coverage_radius_m << '\n'
        << "numUsers=" << c.net.num_users << '\n'
        << "numSbs=" << c.net.num_sbs << '\n'
        << "subcarrierBandwidth=" << c.net.subcarrier_bandwidth_hz << '\n'
        << "numDownlinkRb=" << c.net.num_dl_rb << '\n'
        << "numUplinkRb=" << c.net.num_ul_rb << '\n'
        << "sbsTxPower=" << c.net.sbs_tx_power_w << '\n'
        << "userTxPower=" << c.net.user_tx_power_w << '\n'
        << "noisePower=" << c.net.noise_power_w << '\n'
        << "pathLossExponent=" << c.net.path_loss_exponent << '\n'
        << "backhaulTotal=" << c.net.backhaul_total_bps << '\n'
        << "computeCapacity=" << c.net.compute_capacity << '\n'
        << "computeLevels=" << c.net.compute_levels << '\n'
        << "corrDistExponent=" << c.net.corr_dist_exponent << '\n'
        << "corrDistScale=" << c.net.corr_dist_scale << '\n'
        << "maxDelayDl=" << c.net.max_delay_dl_s << '\n'
        << "maxDelayUl=" << c.net.max_delay_ul_s << '\n'
        << "numContents=" << c.content.num_contents << '\n'
        << "pixelsPerUser=" << c.content.pixels_per_user << '\n'
        << "baseDlBits=" << c.content.base_dl_bits << '\n'
        << "baseUlBits=" << c.content.base_ul_bits << '\n'
        << "overlapLo=" << c.content.overlap_lo << '\n'
        << "overlapHi=" << c.content.overlap_hi << '\n'
        << "trackingStd=" << c.content.tracking_std << '\n'
        << "reservoirUnits=" << c.esn.units << '\n'
        << "spectralRadius=" << c.esn.spectral_radius << '\n'
        << "lambda=" << c.esn.lambda << '\n'
        << "lambdaPrime=" << c.esn.lambda_prime << '\n'
        << "washout=" << c.esn.washout << '\n'
        << "bootstrapPasses=" << c.esn.bootstrap_passes << '\n'
        << "epsilonInit=" << c.esn.explore.init << '\n'
        << "epsilonDecay=" << c.esn.explore.decay << '\n'
        << "epsilonFloor=" << c.esn.explore.floor << '\n'
        << "qStepSize=" << c.q_step_size << '\n'
        << "learner=" << learner_name(c.learner) << '\n'
        << "periods=" << c.periods << '\n'
        << "slotsPerPeriod=" << c.slots_per_period << '\n'
        << "replications=" << c.replications << '\n'
        << "seed=" << c.seed << '\n'
        << "actionCap=" << c.action_cap << '\n';
    out << "changeSchedule=";
    for (std::size_t i = 0; i < c.change_schedule.size(); ++i) {
        if (i) out << ',';
        out << c.change_schedule[i];
    }
    out << '\n' << "outputDir=" << c.output_dir << '\n';
    return out.str();
}

}  // namespace vralloc
