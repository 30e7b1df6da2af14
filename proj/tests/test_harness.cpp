#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vralloc/config.hpp"
#include "vralloc/metrics.hpp"
#include "vralloc/rng.hpp"
#include "vralloc/sim.hpp"

using namespace vralloc;

TEST_SUITE_BEGIN("harness");

namespace {

ExperimentConfig parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::filesystem::path test_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "vralloc-tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("empty config yields the documented defaults") {
    const ExperimentConfig cfg = parse_text("");
    CHECK(cfg.net.num_users == 25);
    CHECK(cfg.net.num_sbs == 4);
    CHECK(cfg.net.subcarrier_bandwidth_hz == doctest::Approx(2e6));
    CHECK(cfg.net.num_dl_rb == 5);
    CHECK(cfg.net.num_ul_rb == 5);
    CHECK(cfg.net.sbs_tx_power_w == doctest::Approx(0.1));           // 20 dBm
    CHECK(cfg.net.noise_power_w == doctest::Approx(3.1622776601683794e-13));  // -95 dBm
    CHECK(cfg.net.backhaul_total_bps == doctest::Approx(100e9));
    CHECK(cfg.net.compute_levels == 5);
    CHECK(cfg.net.corr_dist_exponent == doctest::Approx(2.0));
    CHECK(cfg.net.sbs_coverage_radius_m == doctest::Approx(30.0));
    CHECK(cfg.net.area_radius_m == doctest::Approx(100.0));
    CHECK(cfg.esn.units == 1000);
    CHECK(cfg.esn.lambda == doctest::Approx(0.03));
    CHECK(cfg.esn.lambda_prime == doctest::Approx(0.3));
}

TEST_CASE("unit suffixes convert to SI once at load") {
    const ExperimentConfig cfg = parse_text(
        "P_B = 20 dBm\n"
        "subcarrierBandwidth = 2 MHz\n"
        "V_F = 100 Gbit/s\n"
        "maxDelayDl = 20 ms\n"
        "baseDlBits = 2.532 Mbit\n");
    CHECK(cfg.net.sbs_tx_power_w == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(cfg.net.subcarrier_bandwidth_hz == doctest::Approx(2e6));
    CHECK(cfg.net.backhaul_total_bps == doctest::Approx(1e11));
    CHECK(cfg.net.max_delay_dl_s == doctest::Approx(0.020));
    CHECK(cfg.content.base_dl_bits == doctest::Approx(2.532e6));
}

TEST_CASE("comments, aliases, and change schedules parse") {
    const ExperimentConfig cfg = parse_text(
        "# experiment profile\n"
        "N_w = 100   # test-scale reservoir\n"
        "T = 250\n"
        "periods = 5\n"
        "changeSchedule = 2, 4\n"
        "learner = q-nocorr\n");
    CHECK(cfg.esn.units == 100);
    CHECK(cfg.slots_per_period == 250);
    CHECK(cfg.net.period_length_slots == 250);
    CHECK(cfg.change_schedule == std::vector<int>{2, 4});
    CHECK(cfg.learner == LearnerKind::QNoCorr);
}

TEST_CASE("config errors carry a diagnostic") {
    CHECK_THROWS_AS(parse_text("numUsers = -1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("noSuchKey = 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("numUsers 25\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("P_B = fast\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("P_B = 3 parsec\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_text("periods = 2\nchangeSchedule = 5\n"), std::invalid_argument);
    CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), std::invalid_argument);
}

TEST_CASE("canonical string hash changes exactly when the config changes") {
    ExperimentConfig a = parse_text("");
    ExperimentConfig b = parse_text("");
    CHECK(fnv1a64(canonical_string(a)) == fnv1a64(canonical_string(b)));
    b.net.num_sbs = 5;
    CHECK(fnv1a64(canonical_string(a)) != fnv1a64(canonical_string(b)));
    b = a;
    b.seed = 2;
    CHECK(fnv1a64(canonical_string(a)) != fnv1a64(canonical_string(b)));
}

TEST_CASE("float formatting round-trips and refuses non-finite values") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 13) - 6);
        const double back = std::strtod(format_double(v).c_str(), nullptr);
        CHECK(std::abs(back - v) <= 1e-12 * std::abs(v));
    }
    CHECK_THROWS_AS(format_double(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(format_double(std::nan("")), std::invalid_argument);
}

TEST_CASE("empty record set produces a header-only CSV") {
    const auto dir = test_dir("empty-csv");
    write_slot_csv((dir / "slots.csv").string(), {});
    CHECK(slurp((dir / "slots.csv").string()) ==
          "replication,period,slot,sbs,utility,avgDelayDl_s,avgDelayUl_s,feasible,infeasible\n");
}

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg = parse_text(
        "numUsers = 8\n"
        "numSbs = 2\n"
        "N_w = 40\n"
        "actionCap = 12\n"
        "periods = 2\n"
        "T = 30\n"
        "replications = 3\n"
        "changeSchedule = 2\n"
        "seed = 11\n");
    return cfg;
}

}  // namespace

TEST_CASE("identical config and seed give byte-identical CSVs, serial or parallel") {
    const ExperimentConfig cfg = tiny_config();

    std::vector<MetricsRecord> serial;
    for (int r = 0; r < cfg.replications; ++r) serial.push_back(run_replication(cfg, r));
    const auto parallel = run_replications(cfg);

    const auto dir_a = test_dir("det-a");
    const auto dir_b = test_dir("det-b");
    export_metrics(serial, cfg, dir_a.string());
    export_metrics(parallel, cfg, dir_b.string());
    CHECK(slurp((dir_a / "slots.csv").string()) == slurp((dir_b / "slots.csv").string()));
    CHECK(slurp((dir_a / "runs.csv").string()) == slurp((dir_b / "runs.csv").string()));
    CHECK(slurp((dir_a / "manifest.txt").string()) == slurp((dir_b / "manifest.txt").string()));

    const auto again = run_replications(cfg);
    const auto dir_c = test_dir("det-c");
    export_metrics(again, cfg, dir_c.string());
    CHECK(slurp((dir_a / "slots.csv").string()) == slurp((dir_c / "slots.csv").string()));
}

TEST_CASE("single SBS, single user: the utility trace is constant") {
    ExperimentConfig cfg = parse_text(
        "numUsers = 1\n"
        "numSbs = 1\n"
        "sbsCoverageRadius = 100\n"
        "N_w = 30\n"
        "periods = 1\n"
        "T = 40\n"
        "replications = 1\n");
    const MetricsRecord rec = run_replication(cfg, 0);
    REQUIRE(rec.utility_trace.size() == 40);
    for (double u : rec.utility_trace) CHECK(u == rec.utility_trace.front());
}

TEST_CASE("uncovered users are counted and excluded from the game") {
    const ExperimentConfig cfg = tiny_config();
    const MetricsRecord rec = run_replication(cfg, 1);

    // Rebuild the topology through the documented stream-splitting contract.
    const std::uint64_t rep_seed = derive_seed(cfg.seed, Stream::Misc, {1});
    const Topology topo = generate_topology(cfg.net, rep_seed);
    int uncovered = 0;
    for (int a : topo.association) uncovered += a == kUncovered ? 1 : 0;
    CHECK(rec.per_run.uncovered_users == uncovered);
    CHECK(rec.per_run.covered_users == cfg.net.num_users - uncovered);

    // Per-slot rows only cover non-idle cells, and user counts match.
    for (const auto& row : rec.per_slot) {
        const int cell = static_cast<int>(topo.cell_users[row.sbs].size());
        CHECK(cell > 0);
        CHECK(row.feasible + row.infeasible == cell);
        CHECK(row.utility >= 0.0);
        CHECK(row.utility <= cell);
    }
}

TEST_CASE("per-run average delay is recomputable from the slot CSV") {
    const ExperimentConfig cfg = tiny_config();
    const auto records = run_replications(cfg);
    const auto dir = test_dir("conserve");
    export_metrics(records, cfg, dir.string());

    std::ifstream in((dir / "slots.csv").string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> weighted(records.size(), 0.0);
    std::vector<long> feasible(records.size(), 0);
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        REQUIRE(fields.size() == 9);
        const int rep = std::stoi(fields[0]);
        const int period = std::stoi(fields[1]);
        const int slot = std::stoi(fields[2]);
        const double dl = std::strtod(fields[5].c_str(), nullptr);
        const double ul = std::strtod(fields[6].c_str(), nullptr);
        const int feas = std::stoi(fields[7]);
        // The run metric is the steady-state window: the second half of
        // each period.
        if (slot - (period - 1) * cfg.slots_per_period <= cfg.slots_per_period / 2) continue;
        weighted[rep] += (dl + ul) * feas;
        feasible[rep] += feas;
    }
    for (std::size_t r = 0; r < records.size(); ++r) {
        const double expect = records[r].per_run.avg_user_delay_s;
        const double got = feasible[r] > 0 ? weighted[r] / feasible[r] : 0.0;
        CHECK(got == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("correlation-unaware contexts carry the full loads") {
    NetworkConfig net;
    net.num_users = 2;
    net.num_sbs = 1;
    Topology topo;
    topo.sbs_positions = {{0.0, 0.0}};
    topo.user_positions = {{1.0, 0.0}, {1.5, 0.0}};  // co-located, same content
    topo.association = {0, 0};
    topo.content_id = {0, 0};
    topo.tracking_std = {1.0, 1.0};
    topo.cell_users = {{0, 1}};
    ContentParams params;
    params.overlap_lo = 0.8;
    params.overlap_hi = 0.8;
    const ContentModel content = synthesize_overlap(topo, params, 3);
    const ChannelRealization ch = sample_channel(topo, net, 3);
    const CorrelationState corr = max_correlations(topo, content, net);
    REQUIRE(corr.phi_max[0] > 0.0);

    const PeriodContext aware = make_period_context(topo, net, ch, content, corr, true);
    const PeriodContext unaware = make_period_context(topo, net, ch, content, corr, false);
    for (int u = 0; u < 2; ++u) {
        CHECK(unaware.dl_load_bits[u] > aware.dl_load_bits[u]);
        CHECK(unaware.ul_load_bits[u] > aware.ul_load_bits[u]);
        CHECK(unaware.dl_load_bits[u] == doctest::Approx(params.base_dl_bits));
    }
}

TEST_CASE("convergence detector finds the rise point of a smooth trace") {
    std::vector<double> trace;
    for (int t = 0; t < 400; ++t) {
        trace.push_back(t < 150 ? 0.2 + 0.6 * t / 150.0 : 0.8);
    }
    const int it = iterations_to_converge(trace);
    CHECK(it > 50);
    CHECK(it <= 160);

    // Flat traces converge as soon as the smoothing window fills.
    const std::vector<double> flat(300, 0.5);
    CHECK(iterations_to_converge(flat) == 20);

    const std::vector<double> tiny(5, 0.5);
    CHECK(iterations_to_converge(tiny) == 5);
}

TEST_CASE("the toy-game equilibrium check is reproducible and oracle-tight") {
    ExperimentConfig cfg;
    cfg.esn.units = 60;
    cfg.esn.lambda_prime = 0.02;
    cfg.esn.explore.decay = 0.98;
    cfg.periods = 1;
    cfg.slots_per_period = 600;
    cfg.net.period_length_slots = 600;
    cfg.seed = 3;
    const NeCheckReport a = ne_check(cfg);
    const NeCheckReport b = ne_check(cfg);
    CHECK(a.players == 2);
    CHECK(a.oracle_worst_gain <= 1e-6);
    CHECK(a.empirical_worst_gain == b.empirical_worst_gain);
    for (int p = 0; p < a.players; ++p) {
        CHECK(a.empirical_profile[p].probs == b.empirical_profile[p].probs);
        CHECK_NOTHROW(a.oracle_profile[p].validate());
    }
}

TEST_CASE("manifest records tool version, seed, and config hash") {
    const ExperimentConfig cfg = tiny_config();
    const auto dir = test_dir("manifest");
    export_metrics({}, cfg, dir.string());
    const std::string manifest = slurp((dir / "manifest.txt").string());
    CHECK(manifest.find("tool=vralloc 0.1.0") != std::string::npos);
    CHECK(manifest.find("seed=11") != std::string::npos);
    char expect[20];
    std::snprintf(expect, sizeof(expect), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_string(cfg))));
    CHECK(manifest.find(std::string("configHash=") + expect) != std::string::npos);
}

TEST_SUITE_END();
