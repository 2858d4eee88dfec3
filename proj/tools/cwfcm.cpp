#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cwfcm/bench.hpp"
#include "cwfcm/dataset.hpp"
#include "cwfcm/engine.hpp"
#include "cwfcm/evaluation.hpp"
#include "cwfcm/stats.hpp"

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct DatasetFlags {
    std::string path;
    std::string label_column = "last";
    std::string delimiter = ",";
    bool has_header = false;

    cwfcm::CsvOptions csv_options() const {
        cwfcm::CsvOptions opts;
        opts.label_column = label_column;
        if (delimiter == "tab") {
            opts.delimiter = '\t';
        } else if (delimiter.size() == 1) {
            opts.delimiter = delimiter[0];
        } else {
            throw std::invalid_argument("delimiter must be one character or \"tab\"");
        }
        opts.has_header = has_header;
        return opts;
    }
};

void add_dataset_flags(CLI::App* cmd, DatasetFlags& flags) {
    cmd->add_option("--dataset", flags.path, "Dataset CSV path")->required();
    cmd->add_option("--label-column", flags.label_column, "Label column: zero-based index or \"last\"");
    cmd->add_option("--delimiter", flags.delimiter, "Field separator (one character or \"tab\")");
    cmd->add_flag("--has-header", flags.has_header, "First row is a header");
}

struct ClusterArgs {
    DatasetFlags data;
    std::string preset;
    std::string distance = "euclidean";
    int minkowski_p = 3;
    std::string weights = "none";
    std::string init = "random";
    int clusters = 0;  // 0 = number of classes in the file
    double fuzziness = 2.0;
    double epsilon = 1e-5;
    int max_iter = 100;
    bool normalize = false;
    int distance_power = 2;
    std::uint64_t seed = 0;
    std::string output;

    CLI::Option* opt_distance = nullptr;
    CLI::Option* opt_minkowski_p = nullptr;
    CLI::Option* opt_weights = nullptr;
    CLI::Option* opt_init = nullptr;
    CLI::Option* opt_fuzziness = nullptr;
    CLI::Option* opt_epsilon = nullptr;
    CLI::Option* opt_max_iter = nullptr;
    CLI::Option* opt_normalize = nullptr;
    CLI::Option* opt_distance_power = nullptr;
};

int run_cluster(const ClusterArgs& a) {
    const cwfcm::Dataset data = cwfcm::load_csv(a.data.path, a.data.csv_options());
    cwfcm::validate(data);

    cwfcm::FcmConfig fc;
    if (!a.preset.empty()) fc = cwfcm::builtin_preset(a.preset).config;
    if (a.opt_distance->count()) fc.distance.kind = cwfcm::metric_from_name(a.distance);
    if (a.opt_minkowski_p->count()) fc.distance.minkowski_p = a.minkowski_p;
    if (a.opt_weights->count()) fc.weight_scheme = cwfcm::weight_scheme_from_name(a.weights);
    if (a.opt_init->count()) fc.init = cwfcm::init_kind_from_name(a.init);
    if (a.opt_fuzziness->count()) fc.fuzziness = a.fuzziness;
    if (a.opt_epsilon->count()) fc.epsilon = a.epsilon;
    if (a.opt_max_iter->count()) fc.max_iter = a.max_iter;
    if (a.opt_normalize->count()) fc.normalize = a.normalize;
    if (a.opt_distance_power->count()) fc.distance_power = a.distance_power;
    fc.seed = a.seed;
    fc.clusters = a.clusters > 0 ? a.clusters : static_cast<int>(data.num_classes());

    const cwfcm::RunResult res = cwfcm::fit(data, fc);
    const cwfcm::EvaluationReport rep = cwfcm::evaluate(res.crisp_labels, data.labels);

    std::cout << "dataset: " << a.data.path << " (" << data.n() << " points, " << data.m()
              << " features, " << data.num_classes() << " classes)\n";
    std::cout << "method: " << cwfcm::metric_name(fc.distance.kind) << " distance, "
              << cwfcm::weight_scheme_name(fc.weight_scheme) << " weights, "
              << cwfcm::init_kind_name(fc.init) << " init, dissimilarity power " << fc.distance_power
              << (fc.normalize ? ", normalized" : "") << "\n";
    std::cout << "clusters: " << fc.clusters << "\n";
    std::cout << "iterations: " << res.iterations << "\n";
    std::cout << "seconds: " << fixed(res.wall_time, 4) << "\n";
    std::cout << "objective: " << cwfcm::format_double(res.objective_trace.back()) << "\n";
    std::cout << "error_rate: " << fixed(rep.error_rate, 3) << "\n";
    std::cout << "accuracy_rate: " << fixed(rep.accuracy_rate, 3) << "\n";
    std::cout << "misclassified: " << rep.misclassified << "\n";
    std::cout << "rand_index: " << fixed(rep.rand_index, 4) << "\n";
    std::cout << "purity: " << fixed(rep.purity, 4) << "\n";

    if (!a.output.empty()) {
        std::ofstream out(a.output, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open \"" + a.output + "\" for writing");
        out << "point,cluster";
        for (std::size_t k = 0; k < res.partition.clusters(); ++k) out << ",mu_" << k + 1;
        out << '\n';
        for (std::size_t i = 0; i < res.partition.points(); ++i) {
            out << i + 1 << ',' << res.crisp_labels[i];
            for (std::size_t k = 0; k < res.partition.clusters(); ++k) {
                out << ',' << cwfcm::format_double(res.partition.mu(i, k));
            }
            out << '\n';
        }
        if (!out) throw std::runtime_error("write to \"" + a.output + "\" failed");
        std::cout << "assignments: " << a.output << "\n";
    }
    return 0;
}

struct BenchArgs {
    std::string config_path;
    std::string output = "results.csv";
    std::string summary_path;
    std::string format = "markdown";
    int threads = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    bool no_timing = false;
    CLI::Option* opt_seed = nullptr;
};

int run_bench_cmd(const BenchArgs& a) {
    cwfcm::BenchConfig cfg = cwfcm::load_bench_config(a.config_path);
    if (a.threads > 0) cfg.threads = a.threads;
    if (a.trials > 0) cfg.trials = a.trials;
    if (a.opt_seed->count()) cfg.seed = a.seed;
    if (a.no_timing) cfg.timing = false;

    const auto rows = cwfcm::run_bench(cfg);
    cwfcm::write_results_csv(rows, a.output);

    const std::string summary = cwfcm::markdown_summary(rows);
    if (!a.summary_path.empty()) {
        std::ofstream out(a.summary_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open \"" + a.summary_path + "\" for writing");
        out << summary;
    }
    if (a.format == "csv") {
        cwfcm::write_results_csv(rows, std::cout);
    } else {
        std::cout << summary;
    }

    std::size_t failures = 0;
    for (const auto& r : rows) {
        if (!r.failed) continue;
        ++failures;
        std::cerr << "failed: " << r.dataset << " / " << r.method << " / noise "
                  << cwfcm::format_double(r.noise_pct) << "% / trial " << r.trial << ": " << r.error << "\n";
    }
    std::cerr << "wrote " << rows.size() << " rows to " << a.output;
    if (failures > 0) std::cerr << " (" << failures << " failed)";
    std::cerr << "\n";
    return failures == 0 ? 0 : 1;
}

struct StatsArgs {
    std::string results_path;
    std::string metric = "error_rate";
    double alpha = 0.05;
};

int run_stats(const StatsArgs& a) {
    const auto rows = cwfcm::read_results_csv(a.results_path);
    const cwfcm::ScoreMatrix m = cwfcm::score_matrix_from_rows(rows, a.metric);
    const cwfcm::FriedmanResult fr = cwfcm::friedman(m, a.alpha);
    const cwfcm::Matrix nem = cwfcm::nemenyi(m);

    const std::size_t k = m.method_names.size();
    const double n = static_cast<double>(m.dataset_names.size());
    std::cout << "Friedman test on " << a.metric << " (" << (m.lower_is_better ? "lower" : "higher")
              << " is better), " << m.dataset_names.size() << " datasets x " << k << " methods\n\n";
    std::cout << "| method | rank sum | mean rank |\n|---|---|---|\n";
    for (std::size_t j = 0; j < k; ++j) {
        std::cout << "| " << m.method_names[j] << " | " << fixed(fr.rank_sums[j], 1) << " | "
                  << fixed(fr.rank_sums[j] / n, 3) << " |\n";
    }
    std::cout << "\nQ = " << fixed(fr.q_statistic, 4) << ", df = " << fr.degrees_of_freedom
              << ", critical value at alpha " << cwfcm::format_double(a.alpha) << " = "
              << fixed(fr.critical_value, 4) << ", p = " << fixed(fr.p_value, 4) << "\n";
    std::cout << (fr.p_value < a.alpha ? "Methods differ significantly.\n" : "No significant difference.\n");

    std::cout << "\nNemenyi pairwise p-values\n\n| |";
    for (const auto& name : m.method_names) std::cout << ' ' << name << " |";
    std::cout << "\n|---|";
    for (std::size_t j = 0; j < k; ++j) std::cout << "---|";
    std::cout << '\n';
    for (std::size_t i = 0; i < k; ++i) {
        std::cout << "| " << m.method_names[i] << " |";
        for (std::size_t j = 0; j < k; ++j) std::cout << ' ' << fixed(nem(i, j), 4) << " |";
        std::cout << '\n';
    }

    std::cout << "\nSignificant pairs (p < " << cwfcm::format_double(a.alpha) << "):";
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (nem(i, j) < a.alpha) {
                std::cout << (any ? ", " : " ") << m.method_names[i] << " vs " << m.method_names[j]
                          << " (p = " << fixed(nem(i, j), 4) << ")";
                any = true;
            }
        }
    }
    if (!any) std::cout << " none";
    std::cout << "\n";
    return 0;
}

struct NoiseArgs {
    DatasetFlags data;
    double level = 0.0;
    std::uint64_t seed = 0;
    std::string output;
};

int run_noise(const NoiseArgs& a) {
    const cwfcm::Dataset data = cwfcm::load_csv(a.data.path, a.data.csv_options());
    cwfcm::validate(data);
    cwfcm::NoiseSpec spec;
    spec.level = a.level;
    spec.seed = a.seed;
    const cwfcm::Dataset noisy = cwfcm::add_noise(data, spec);
    cwfcm::save_csv(noisy, a.output, a.data.csv_options());
    std::cout << "wrote " << noisy.n() << " points to " << a.output << " (noise "
              << cwfcm::format_double(a.level) << "%, seed " << a.seed << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuzzy c-means clustering with pluggable distance metrics, feature weighting, "
                 "deterministic initialization, and benchmark reports"};
    app.require_subcommand(1);

    ClusterArgs ca;
    auto* cluster = app.add_subcommand("cluster", "Run one clustering configuration on a dataset");
    add_dataset_flags(cluster, ca.data);
    cluster->add_option("--preset", ca.preset, "Start from a named preset (fcm or cwfcm); explicit flags override");
    ca.opt_distance = cluster->add_option("--distance", ca.distance,
                                          "Metric: euclidean, cityblock, minkowski, canberra, mahalanobis");
    ca.opt_minkowski_p = cluster->add_option("--minkowski-p", ca.minkowski_p, "Minkowski exponent");
    ca.opt_weights = cluster->add_option("--weights", ca.weights,
                                         "Feature weighting: none, vmr, entropy, variance, stddev, mean");
    ca.opt_init = cluster->add_option("--init", ca.init, "Initialization: random or magnitude");
    cluster->add_option("--clusters", ca.clusters, "Cluster count (default: classes in the file)");
    ca.opt_fuzziness = cluster->add_option("--fuzziness", ca.fuzziness, "Fuzziness exponent (> 1)");
    ca.opt_epsilon = cluster->add_option("--epsilon", ca.epsilon, "Convergence tolerance on the objective");
    ca.opt_max_iter = cluster->add_option("--max-iter", ca.max_iter, "Iteration cap");
    ca.opt_normalize = cluster->add_flag("--normalize", ca.normalize, "Min-max scale features before clustering");
    ca.opt_distance_power = cluster->add_option("--distance-power", ca.distance_power,
                                                "Dissimilarity exponent on the metric value (1 or 2)");
    cluster->add_option("--seed", ca.seed, "Seed for random initialization");
    cluster->add_option("--output", ca.output, "Write per-point clusters and memberships to this CSV");

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "Run a benchmark sweep from a config file");
    bench->add_option("--config", ba.config_path, "Sweep config file")->required();
    bench->add_option("--output", ba.output, "Results CSV path");
    bench->add_option("--summary", ba.summary_path, "Also write the markdown summary to this file");
    bench->add_option("--format", ba.format, "What to print on stdout: markdown (summary) or csv (rows)")
        ->check(CLI::IsMember({"markdown", "csv"}));
    bench->add_option("--threads", ba.threads, "Worker threads (overrides config)");
    bench->add_option("--trials", ba.trials, "Trials per stochastic cell (overrides config)");
    ba.opt_seed = bench->add_option("--seed", ba.seed, "Base seed (overrides config)");
    bench->add_flag("--no-timing", ba.no_timing, "Write 0 in the seconds column for reproducible output");

    StatsArgs sa;
    auto* stats = app.add_subcommand("stats", "Friedman and Nemenyi analysis of a results CSV");
    stats->add_option("results", sa.results_path, "Results CSV from the bench subcommand")->required();
    stats->add_option("--metric", sa.metric,
                      "Column to compare: error_rate, accuracy_rate, rand_index, purity, iterations, "
                      "seconds, objective");
    stats->add_option("--alpha", sa.alpha, "Significance level");

    NoiseArgs na;
    auto* noise = app.add_subcommand("noise", "Write a noise-perturbed copy of a dataset");
    add_dataset_flags(noise, na.data);
    noise->add_option("--noise", na.level, "Noise level as a percentage of each feature's stddev")->required();
    noise->add_option("--seed", na.seed, "Noise seed");
    noise->add_option("--output", na.output, "Output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cluster) return run_cluster(ca);
        if (*bench) return run_bench_cmd(ba);
        if (*stats) return run_stats(sa);
        if (*noise) return run_noise(na);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
