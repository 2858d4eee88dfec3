// End-to-end acceptance checks. Each check prints one PASS/FAIL line with
// the measured values; the exit status is nonzero when any check fails.
// Tolerances and runtime budgets are pinned here, next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cwfcm/bench.hpp"
#include "cwfcm/dataset.hpp"
#include "cwfcm/engine.hpp"
#include "cwfcm/evaluation.hpp"
#include "cwfcm/stats.hpp"
#include "cwfcm/weighting.hpp"
#include "oracles.hpp"

using namespace cwfcm;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

Dataset load_iris() {
    CsvOptions opts;  // comma separated, label in the last column, no header
    return load_csv(std::string(CWFCM_DATA_DIR) + "/iris.csv", opts);
}

FcmConfig preset_config(const std::string& name, int clusters) {
    FcmConfig cfg = builtin_preset(name).config;
    cfg.clusters = clusters;
    return cfg;
}

// 1. Dispersion weights on iris: (0.0728, 0, 1, 0.5534) within 0.005 each,
//    computed in under 0.1 s.
Outcome check_iris_vmr_weights(const Dataset& iris) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto w = feature_weights(iris, WeightScheme::vmr).values;
    const double elapsed = seconds_since(t0);

    const double expected[] = {0.0728, 0.0, 1.0, 0.5534};
    bool ok = w.size() == 4 && elapsed < 0.1;
    std::string got = "(";
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (std::abs(w[j] - expected[j]) > 0.005) ok = false;
        got += fixed(w[j], 4) + (j + 1 < w.size() ? ", " : ")");
    }
    return {ok, "weights " + got + " vs (0.0728, 0, 1, 0.5534) +/-0.005, " + fixed(elapsed, 3) + "s"};
}

// 2. The canberra/vmr/magnitude pipeline on raw iris: at most 7 errors
//    (<= 4.667%), aiming for exactly 4 (2.667%), in under 2 s. Also reports
//    what min-max normalization does to the same run.
Outcome check_cwfcm_iris_error(const Dataset& iris) {
    const auto t0 = std::chrono::steady_clock::now();
    FcmConfig cfg = preset_config("cwfcm", 3);
    const auto run = fit(iris, cfg);
    const auto raw = accuracy(run.crisp_labels, iris.labels);
    const double elapsed = seconds_since(t0);

    cfg.normalize = true;
    const auto norm = accuracy(fit(iris, cfg).crisp_labels, iris.labels);

    const bool ok = raw.misclassified <= 7 && elapsed < 2.0;
    const char* which = raw.misclassified == 4   ? "raw input hits the 4-error target"
                        : norm.misclassified == 4 ? "normalized input hits the 4-error target"
                                                  : "neither setting hits the 4-error target";
    return {ok, "raw " + std::to_string(raw.misclassified) + " errors (" + fixed(raw.error_rate, 3) +
                    "%), normalized " + std::to_string(norm.misclassified) + " errors (" +
                    fixed(norm.error_rate, 3) + "%); " + which + ", gate <=7, " + fixed(elapsed, 3) + "s"};
}

// 3. Euclidean baseline with random starts: the modal misclassification
//    count over seeds 1..10 lands in [14, 17], in under 5 s.
Outcome check_baseline_fcm_iris(const Dataset& iris) {
    const auto t0 = std::chrono::steady_clock::now();
    std::map<int, int> histogram;
    std::string all;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        FcmConfig cfg = preset_config("fcm", 3);
        cfg.seed = seed;
        const auto res = accuracy(fit(iris, cfg).crisp_labels, iris.labels);
        histogram[res.misclassified]++;
        all += (all.empty() ? "" : ",") + std::to_string(res.misclassified);
    }
    const double elapsed = seconds_since(t0);

    int modal = -1, votes = 0;
    for (const auto& [mc, count] : histogram) {
        if (count > votes) {
            modal = mc;
            votes = count;
        }
    }
    const bool ok = modal >= 14 && modal <= 17 && elapsed < 5.0;
    return {ok, "errors per seed {" + all + "}, modal " + std::to_string(modal) +
                    " in [14,17], " + fixed(elapsed, 3) + "s"};
}

// 4. Magnitude-based initialization converges in fewer iterations than the
//    mean over 10 random initializations for the canberra+vmr setup.
Outcome check_init_efficiency(const Dataset& iris) {
    FcmConfig cfg = preset_config("cwfcm", 3);
    const int deterministic = fit(iris, cfg).iterations;

    cfg.init = InitKind::random;
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        cfg.seed = seed;
        sum += fit(iris, cfg).iterations;
    }
    const double mean_random = sum / 10.0;
    return {deterministic < mean_random,
            "magnitude init " + std::to_string(deterministic) + " iterations vs random mean " +
                fixed(mean_random, 1)};
}

// 5. Pair-counting Rand index equals brute-force pair enumeration on 200
//    random label pairs with up to 100 points, in under 5 s.
Outcome check_rand_index_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2024);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 99);
        std::vector<int> a(n), b(n);
        const int ca = 1 + static_cast<int>(rng.uniform() * 6);
        const int cb = 1 + static_cast<int>(rng.uniform() * 6);
        for (auto& v : a) v = static_cast<int>(rng.uniform() * ca);
        for (auto& v : b) v = static_cast<int>(rng.uniform() * cb);
        if (rand_index(a, b) != oracle::rand_index_pairs(a, b)) ++mismatches;
    }
    const double elapsed = seconds_since(t0);
    return {mismatches == 0 && elapsed < 5.0,
            std::to_string(200 - mismatches) + "/200 pairs agree exactly, " + fixed(elapsed, 3) + "s"};
}

// 6. Assignment-based accuracy equals exhaustive permutation search on 100
//    random instances with n <= 30 points and at most 4 clusters/classes.
Outcome check_accuracy_oracle() {
    Rng rng(77);
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 29);
        std::vector<int> pred(n), actual(n);
        const int clusters = 1 + static_cast<int>(rng.uniform() * 4);
        const int classes = 1 + static_cast<int>(rng.uniform() * 4);
        for (auto& v : pred) v = static_cast<int>(rng.uniform() * clusters);
        for (auto& v : actual) v = static_cast<int>(rng.uniform() * classes);
        const int best = oracle::best_matching_bruteforce(pred, actual);
        if (accuracy(pred, actual).misclassified != static_cast<int>(n) - best) ++mismatches;
    }
    return {mismatches == 0, std::to_string(100 - mismatches) + "/100 instances match the brute force"};
}

// 7. Friedman statistic matches an independently coded squared-ranks
//    formulation to 1e-9 on 100 random tied score matrices, and the fixed
//    consistent-ranking table (k=3, N=4) gives Q = 8 exactly.
Outcome check_friedman_oracle() {
    Rng rng(505);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 11);
        const std::size_t k = 2 + static_cast<std::size_t>(rng.uniform() * 4);
        ScoreMatrix m;
        m.scores = Matrix(n, k);
        for (double& v : m.scores.data()) v = std::floor(rng.uniform() * 4.0);
        for (std::size_t i = 0; i < n; ++i) m.dataset_names.push_back("d" + std::to_string(i));
        for (std::size_t j = 0; j < k; ++j) m.method_names.push_back("m" + std::to_string(j));
        const double gap =
            std::abs(friedman(m).q_statistic - oracle::friedman_statistic_ranks(m.scores, true));
        worst = std::max(worst, gap);
    }

    ScoreMatrix hand;
    hand.scores = Matrix(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) hand.scores(i, j) = static_cast<double>(j + 1) * (i + 1);
    hand.dataset_names = {"a", "b", "c", "d"};
    hand.method_names = {"x", "y", "z"};
    const double q_hand = friedman(hand).q_statistic;

    return {worst <= 1e-9 && q_hand == 8.0,
            "max |Q - reference| " + fixed(worst, 12) + " over 100 matrices, hand case Q = " +
                fixed(q_hand, 6)};
}

// 8. Studentized-range tail probabilities reproduce three published
//    critical points within 0.005.
Outcome check_nemenyi_tables() {
    struct Case {
        double q;
        int k;
        double expected;
    };
    const Case cases[] = {{2.772, 2, 0.05}, {3.314, 3, 0.05}, {4.120, 3, 0.01}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const double p = studentized_range_sf(c.q, c.k);
        if (std::abs(p - c.expected) > 0.005) ok = false;
        detail += "sf(" + fixed(c.q, 3) + "," + std::to_string(c.k) + ")=" + fixed(p, 4) + " vs " +
                  fixed(c.expected, 2) + "; ";
    }
    return {ok, detail + "tolerance 0.005"};
}

// 9. Engine invariants on 50 random datasets: every iteration's partition
//    rows sum to 1 within 1e-9, the euclidean/unweighted objective never
//    increases, and every run stops within max_iter.
Outcome check_engine_invariants() {
    int failures = 0;
    std::string first;
    for (std::uint64_t ds_seed = 0; ds_seed < 50; ++ds_seed) {
        Rng rng(ds_seed * 31 + 7);
        const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform() * 50);
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 4);
        Dataset d;
        d.points = Matrix(n, m);
        for (double& v : d.points.data()) v = 20.0 * rng.uniform() - 5.0;
        d.labels.assign(n, 0);
        d.class_names = {"c0"};
        for (std::size_t j = 0; j < m; ++j) d.feature_names.push_back("f" + std::to_string(j));

        FcmConfig cfg;
        cfg.clusters = 2 + static_cast<int>(rng.uniform() * 4);
        cfg.seed = ds_seed;

        bool rows_ok = true;
        const auto res = fit(d, cfg, [&](int, const PartitionMatrix& p, double) {
            for (std::size_t i = 0; i < p.points(); ++i) {
                double sum = 0.0;
                for (std::size_t k = 0; k < p.clusters(); ++k) sum += p.mu(i, k);
                if (std::abs(sum - 1.0) > 1e-9) rows_ok = false;
            }
        });

        bool monotone = true;
        for (std::size_t t = 1; t < res.objective_trace.size(); ++t) {
            if (res.objective_trace[t] > res.objective_trace[t - 1] + 1e-9) monotone = false;
        }
        const bool terminated = res.iterations >= 1 && res.iterations <= cfg.max_iter;
        if (!(rows_ok && monotone && terminated)) {
            ++failures;
            if (first.empty()) {
                first = " first failure: dataset " + std::to_string(ds_seed) +
                        (rows_ok ? "" : " rows") + (monotone ? "" : " monotone") +
                        (terminated ? "" : " termination");
            }
        }
    }
    return {failures == 0,
            std::to_string(50 - failures) + "/50 random datasets hold all three invariants" + first};
}

// 10. Two benchmark executions with the same base seed and timing disabled
//     write byte-identical CSVs (single- and multi-threaded), and the
//     bundled sweep description parses.
Outcome check_bench_determinism() {
    namespace fs = std::filesystem;
    load_bench_config(std::string(CWFCM_CONFIG_DIR) + "/full_sweep.ini");

    const auto dir = fs::temp_directory_path();
    const auto config_path = dir / "cwfcm_accept_sweep.ini";
    {
        std::ofstream cfg(config_path);
        cfg << "[bench]\nseed = 42\ntrials = 10\nnoise_levels = 0, 10, 20, 30\n\n"
            << "[dataset]\nname = iris\npath = " << CWFCM_DATA_DIR << "/iris.csv\n\n"
            << "[dataset]\nname = wdbc\npath = " << CWFCM_DATA_DIR << "/wdbc.csv\nhas_header = true\n\n"
            << "[method]\npreset = fcm\n\n[method]\npreset = cwfcm\n";
    }

    auto run = [&](const fs::path& out, int threads) {
        std::ostringstream cmd;
        cmd << '"' << CWFCM_CLI_PATH << "\" bench --config \"" << config_path.string()
            << "\" --no-timing --threads " << threads << " --output \"" << out.string()
            << "\" > /dev/null 2>&1";
        return std::system(cmd.str().c_str());
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    const auto out1 = dir / "cwfcm_accept_run1.csv";
    const auto out2 = dir / "cwfcm_accept_run2.csv";
    const int rc1 = run(out1, 1);
    const int rc2 = run(out2, 4);
    const std::string a = slurp(out1), b = slurp(out2);
    const std::size_t lines = static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n'));

    const bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    return {ok, "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2) + ", " +
                    std::to_string(lines) + " CSV lines, byte-identical across runs and thread counts: " +
                    (a == b && !a.empty() ? "yes" : "no")};
}

}  // namespace

int main() {
    Dataset iris;
    try {
        iris = load_iris();
    } catch (const std::exception& e) {
        std::printf("FAIL  0. load bundled iris dataset: %s\n", e.what());
        return 1;
    }

    struct Entry {
        const char* name;
        std::function<Outcome()> check;
    };
    const Entry checks[] = {
        {"iris dispersion weights", [&] { return check_iris_vmr_weights(iris); }},
        {"canberra pipeline accuracy on iris", [&] { return check_cwfcm_iris_error(iris); }},
        {"euclidean baseline accuracy on iris", [&] { return check_baseline_fcm_iris(iris); }},
        {"deterministic init efficiency", [&] { return check_init_efficiency(iris); }},
        {"rand index vs pair enumeration", check_rand_index_oracle},
        {"accuracy vs permutation search", check_accuracy_oracle},
        {"friedman vs squared-ranks reference", check_friedman_oracle},
        {"studentized range table points", check_nemenyi_tables},
        {"engine invariants on random data", check_engine_invariants},
        {"benchmark reproducibility", check_bench_determinism},
    };

    int failed = 0;
    int index = 0;
    for (const auto& entry : checks) {
        ++index;
        Outcome outcome;
        try {
            outcome = entry.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.ok) ++failed;
        std::printf("%s %2d. %s: %s\n", outcome.ok ? "PASS" : "FAIL", index, entry.name,
                    outcome.detail.c_str());
    }

    std::printf("%d/10 checks passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
