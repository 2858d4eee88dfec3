#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cwfcm/dataset.hpp"
#include "cwfcm/engine.hpp"
#include "cwfcm/stats.hpp"

namespace cwfcm {

/// One dataset in a sweep. clusters defaults to the number of classes found
/// in the file when unset.
struct DatasetEntry {
    std::string name;
    std::string path;
    CsvOptions csv;
    std::optional<int> clusters;
};

/// A named engine configuration included in a sweep.
struct MethodPreset {
    std::string name;
    FcmConfig config;
};

/// Built-in presets: "fcm" (euclidean, unweighted, random init, squared
/// dissimilarities) and "cwfcm" (canberra, vmr weights, magnitude init, raw
/// metric values as dissimilarities).
MethodPreset builtin_preset(const std::string& name);

struct BenchConfig {
    std::vector<DatasetEntry> datasets;
    std::vector<MethodPreset> methods;
    std::vector<double> noise_levels = {0.0, 10.0, 20.0, 30.0};
    int trials = 10;
    std::uint64_t seed = 0;
    // Methods with a deterministic initialization repeat identically, so
    // their trials collapse to a single run unless this is off.
    bool collapse_deterministic = true;
    // Off writes 0 in the seconds column so reruns are byte-identical.
    bool timing = true;
    int threads = 1;
};

/// One sweep cell, mirroring one results CSV row. `error` holds the failure
/// message of a failed cell and is not serialized.
struct BenchRow {
    std::string dataset;
    std::string method;
    double noise_pct = 0.0;
    int trial = 1;
    std::uint64_t seed = 0;
    int iterations = 0;
    double seconds = 0.0;
    double objective = 0.0;
    double error_rate = 0.0;
    double accuracy_rate = 0.0;
    double rand_index = 0.0;
    double purity = 0.0;
    bool failed = false;
    std::string error;
};

/// Parses the sectioned key=value sweep description documented in the
/// README ([bench] settings, one [dataset] / [method] section per entry).
BenchConfig parse_bench_config(std::istream& in);
BenchConfig load_bench_config(const std::string& path);

/// Runs every (dataset, method, noise level, trial) cell. Noise is seeded
/// per (dataset, level) so all methods see identical noisy data; the fit
/// seed additionally mixes in method and trial. Rows come back in
/// enumeration order regardless of thread count, and a cell failure is
/// recorded on its row rather than thrown.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

std::string results_csv_header();
void write_results_csv(const std::vector<BenchRow>& rows, std::ostream& out);
void write_results_csv(const std::vector<BenchRow>& rows, const std::string& path);
std::vector<BenchRow> read_results_csv(const std::string& path);

/// Mean-based summary tables (error rate per noise level, iterations and
/// seconds at the lowest noise level). Every number is recomputable from
/// the rows; failed rows are excluded from means.
std::string markdown_summary(const std::vector<BenchRow>& rows);

/// Per-(dataset, method) means of one metric column, shaped for friedman().
/// metric is one of: error_rate, accuracy_rate, rand_index, purity,
/// iterations, seconds, objective. The rank direction follows the metric.
ScoreMatrix score_matrix_from_rows(const std::vector<BenchRow>& rows, const std::string& metric);

}  // namespace cwfcm
