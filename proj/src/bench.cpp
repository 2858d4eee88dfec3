#include "cwfcm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cwfcm/evaluation.hpp"

namespace cwfcm {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void config_error(int line, const std::string& what) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

bool parse_bool(std::string_view v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    config_error(line, "expected true/false, got \"" + std::string(v) + "\"");
}

long long parse_int(std::string_view v, int line) {
    try {
        std::size_t pos = 0;
        const long long out = std::stoll(std::string(v), &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        config_error(line, "expected an integer, got \"" + std::string(v) + "\"");
    }
}

double parse_real(std::string_view v, int line) {
    try {
        std::size_t pos = 0;
        const double out = std::stod(std::string(v), &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        config_error(line, "expected a number, got \"" + std::string(v) + "\"");
    }
}

std::vector<double> parse_real_list(std::string_view v, int line) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const std::size_t comma = v.find(',', start);
        const auto piece = trim(v.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (piece.empty()) config_error(line, "empty entry in list");
        out.push_back(parse_real(piece, line));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string basename_stem(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base.resize(dot);
    return base;
}

void check_name(const std::string& name, const char* what) {
    if (name.empty()) throw std::invalid_argument(std::string(what) + " name is empty");
    if (name.find_first_of(",\n\r") != std::string::npos) {
        throw std::invalid_argument(std::string(what) + " name \"" + name + "\" contains a comma or newline");
    }
}

void check_config(const BenchConfig& cfg) {
    if (cfg.datasets.empty()) throw std::invalid_argument("no datasets configured");
    if (cfg.methods.empty()) throw std::invalid_argument("no methods configured");
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1, got " + std::to_string(cfg.trials));
    if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1, got " + std::to_string(cfg.threads));
    if (cfg.noise_levels.empty()) throw std::invalid_argument("no noise levels configured");
    for (double lvl : cfg.noise_levels) {
        if (!(lvl >= 0.0 && lvl <= 100.0)) {
            throw std::invalid_argument("noise level out of [0, 100]: " + format_double(lvl));
        }
    }
    for (std::size_t i = 0; i < cfg.datasets.size(); ++i) {
        check_name(cfg.datasets[i].name, "dataset");
        for (std::size_t j = i + 1; j < cfg.datasets.size(); ++j) {
            if (cfg.datasets[i].name == cfg.datasets[j].name) {
                throw std::invalid_argument("duplicate dataset name \"" + cfg.datasets[i].name + "\"");
            }
        }
    }
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
        check_name(cfg.methods[i].name, "method");
        for (std::size_t j = i + 1; j < cfg.methods.size(); ++j) {
            if (cfg.methods[i].name == cfg.methods[j].name) {
                throw std::invalid_argument("duplicate method name \"" + cfg.methods[i].name + "\"");
            }
        }
    }
}

std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

MethodPreset builtin_preset(const std::string& name) {
    MethodPreset p;
    p.name = name;
    if (name == "fcm") {
        p.config.distance.kind = Metric::euclidean;
        p.config.weight_scheme = WeightScheme::none;
        p.config.init = InitKind::random;
        p.config.distance_power = 2;
    } else if (name == "cwfcm") {
        p.config.distance.kind = Metric::canberra;
        p.config.weight_scheme = WeightScheme::vmr;
        p.config.init = InitKind::magnitude;
        p.config.distance_power = 1;
    } else {
        throw std::invalid_argument("unknown preset \"" + name + "\" (expected \"fcm\" or \"cwfcm\")");
    }
    return p;
}

BenchConfig parse_bench_config(std::istream& in) {
    BenchConfig cfg;
    enum class Section { none, bench, dataset, method };
    Section section = Section::none;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto s = trim(raw);
        if (s.empty() || s.front() == '#' || s.front() == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') config_error(line, "unterminated section header");
            const auto name = trim(s.substr(1, s.size() - 2));
            if (name == "bench") {
                section = Section::bench;
            } else if (name == "dataset") {
                section = Section::dataset;
                cfg.datasets.emplace_back();
            } else if (name == "method") {
                section = Section::method;
                cfg.methods.emplace_back();
            } else {
                config_error(line, "unknown section [" + std::string(name) + "]");
            }
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string_view::npos) config_error(line, "expected key = value");
        const std::string key(trim(s.substr(0, eq)));
        const std::string value(trim(s.substr(eq + 1)));
        if (value.empty()) config_error(line, "empty value for \"" + key + "\"");

        switch (section) {
            case Section::none:
                config_error(line, "key \"" + key + "\" outside any section");
            case Section::bench: {
                if (key == "seed") {
                    cfg.seed = static_cast<std::uint64_t>(parse_int(value, line));
                } else if (key == "trials") {
                    cfg.trials = static_cast<int>(parse_int(value, line));
                } else if (key == "noise_levels") {
                    cfg.noise_levels = parse_real_list(value, line);
                } else if (key == "collapse_deterministic") {
                    cfg.collapse_deterministic = parse_bool(value, line);
                } else if (key == "timing") {
                    cfg.timing = parse_bool(value, line);
                } else if (key == "threads") {
                    cfg.threads = static_cast<int>(parse_int(value, line));
                } else {
                    config_error(line, "unknown [bench] key \"" + key + "\"");
                }
                break;
            }
            case Section::dataset: {
                auto& ds = cfg.datasets.back();
                if (key == "name") {
                    ds.name = value;
                } else if (key == "path") {
                    ds.path = value;
                } else if (key == "label_column") {
                    ds.csv.label_column = value;
                } else if (key == "delimiter") {
                    if (value == "tab") {
                        ds.csv.delimiter = '\t';
                    } else if (value.size() == 1) {
                        ds.csv.delimiter = value[0];
                    } else {
                        config_error(line, "delimiter must be one character or \"tab\"");
                    }
                } else if (key == "has_header") {
                    ds.csv.has_header = parse_bool(value, line);
                } else if (key == "clusters") {
                    ds.clusters = static_cast<int>(parse_int(value, line));
                } else {
                    config_error(line, "unknown [dataset] key \"" + key + "\"");
                }
                break;
            }
            case Section::method: {
                auto& m = cfg.methods.back();
                auto& fc = m.config;
                if (key == "name") {
                    m.name = value;
                } else if (key == "preset") {
                    const std::string keep = m.name;
                    m = builtin_preset(value);
                    if (!keep.empty()) m.name = keep;
                } else if (key == "distance") {
                    fc.distance.kind = metric_from_name(value);
                } else if (key == "minkowski_p") {
                    fc.distance.minkowski_p = static_cast<int>(parse_int(value, line));
                } else if (key == "weights") {
                    fc.weight_scheme = weight_scheme_from_name(value);
                } else if (key == "init") {
                    fc.init = init_kind_from_name(value);
                } else if (key == "fuzziness") {
                    fc.fuzziness = parse_real(value, line);
                } else if (key == "epsilon") {
                    fc.epsilon = parse_real(value, line);
                } else if (key == "max_iter") {
                    fc.max_iter = static_cast<int>(parse_int(value, line));
                } else if (key == "normalize") {
                    fc.normalize = parse_bool(value, line);
                } else if (key == "distance_power") {
                    fc.distance_power = static_cast<int>(parse_int(value, line));
                } else {
                    config_error(line, "unknown [method] key \"" + key + "\"");
                }
                break;
            }
        }
    }

    for (auto& ds : cfg.datasets) {
        if (ds.path.empty()) throw std::invalid_argument("dataset \"" + ds.name + "\" has no path");
        if (ds.name.empty()) ds.name = basename_stem(ds.path);
    }
    check_config(cfg);
    return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file \"" + path + "\"");
    return parse_bench_config(in);
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
    check_config(cfg);

    // Load every dataset once; a load failure poisons all of that dataset's
    // cells but the sweep still runs the others.
    std::vector<Dataset> base(cfg.datasets.size());
    std::vector<std::string> load_errors(cfg.datasets.size());
    for (std::size_t d = 0; d < cfg.datasets.size(); ++d) {
        try {
            base[d] = load_csv(cfg.datasets[d].path, cfg.datasets[d].csv);
            validate(base[d]);
        } catch (const std::exception& e) {
            load_errors[d] = e.what();
        }
    }

    // Noisy variants depend only on (dataset, level): every method and trial
    // clusters the same perturbed values.
    std::vector<std::vector<Dataset>> noisy(cfg.datasets.size());
    for (std::size_t d = 0; d < cfg.datasets.size(); ++d) {
        if (!load_errors[d].empty()) continue;
        const std::uint64_t ds_seed = mix_seed(cfg.seed, fnv1a64(cfg.datasets[d].name));
        noisy[d].reserve(cfg.noise_levels.size());
        for (double level : cfg.noise_levels) {
            const auto level_key = static_cast<std::uint64_t>(std::llround(level * 100.0));
            NoiseSpec spec;
            spec.level = level;
            spec.seed = mix_seed(ds_seed, level_key + 1);
            noisy[d].push_back(add_noise(base[d], spec));
        }
    }

    struct Cell {
        std::size_t dataset, method, level;
        int trial;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t d = 0; d < cfg.datasets.size(); ++d) {
        const std::uint64_t ds_seed = mix_seed(cfg.seed, fnv1a64(cfg.datasets[d].name));
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            const bool deterministic = cfg.methods[m].config.init == InitKind::magnitude;
            const int trials = (deterministic && cfg.collapse_deterministic) ? 1 : cfg.trials;
            const std::uint64_t method_seed = mix_seed(ds_seed, fnv1a64(cfg.methods[m].name));
            for (std::size_t l = 0; l < cfg.noise_levels.size(); ++l) {
                const auto level_key = static_cast<std::uint64_t>(std::llround(cfg.noise_levels[l] * 100.0));
                const std::uint64_t level_seed = mix_seed(method_seed, level_key + 1);
                for (int t = 1; t <= trials; ++t) {
                    cells.push_back({d, m, l, t, mix_seed(level_seed, static_cast<std::uint64_t>(t))});
                }
            }
        }
    }

    std::vector<BenchRow> rows(cells.size());
    auto run_cell = [&](const Cell& cell, BenchRow& row) {
        const auto& entry = cfg.datasets[cell.dataset];
        const auto& preset = cfg.methods[cell.method];
        row.dataset = entry.name;
        row.method = preset.name;
        row.noise_pct = cfg.noise_levels[cell.level];
        row.trial = cell.trial;
        row.seed = cell.seed;
        if (!load_errors[cell.dataset].empty()) {
            row.failed = true;
            row.error = load_errors[cell.dataset];
            return;
        }
        try {
            const Dataset& data = noisy[cell.dataset][cell.level];
            FcmConfig fc = preset.config;
            fc.seed = cell.seed;
            fc.clusters = entry.clusters.value_or(static_cast<int>(data.num_classes()));
            const RunResult res = fit(data, fc);
            const EvaluationReport rep = evaluate(res.crisp_labels, data.labels);
            row.iterations = res.iterations;
            row.seconds = cfg.timing ? res.wall_time : 0.0;
            row.objective = res.objective_trace.back();
            row.error_rate = rep.error_rate;
            row.accuracy_rate = rep.accuracy_rate;
            row.rand_index = rep.rand_index;
            row.purity = rep.purity;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
    };

    const int workers = std::min<int>(cfg.threads, static_cast<int>(cells.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(cells[i], rows[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                    run_cell(cells[i], rows[i]);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::string results_csv_header() {
    return "dataset,method,noise_pct,trial,seed,iterations,seconds,objective,"
           "error_rate,accuracy_rate,rand_index,purity,failed";
}

void write_results_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << results_csv_header() << '\n';
    for (const auto& r : rows) {
        out << r.dataset << ',' << r.method << ',' << format_double(r.noise_pct) << ',' << r.trial << ','
            << r.seed << ',' << r.iterations << ',' << format_double(r.seconds) << ','
            << format_double(r.objective) << ',' << format_double(r.error_rate) << ','
            << format_double(r.accuracy_rate) << ',' << format_double(r.rand_index) << ','
            << format_double(r.purity) << ',' << (r.failed ? 1 : 0) << '\n';
    }
}

void write_results_csv(const std::vector<BenchRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open \"" + path + "\" for writing");
    write_results_csv(rows, out);
    if (!out) throw std::runtime_error("write to \"" + path + "\" failed");
}

std::vector<BenchRow> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file \"" + path + "\"");

    auto split = [](const std::string& line) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.emplace_back(trim(line.substr(start, comma == std::string::npos ? comma : comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return fields;
    };

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("results file \"" + path + "\" is empty");
    const auto header = split(line);
    const std::vector<std::string> expected = {"dataset",    "method",        "noise_pct",  "trial",
                                               "seed",       "iterations",    "seconds",    "objective",
                                               "error_rate", "accuracy_rate", "rand_index", "purity",
                                               "failed"};
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const auto& name : expected) {
        if (!col.count(name)) throw std::runtime_error("results file is missing column \"" + name + "\"");
    }

    std::vector<BenchRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line);
        if (fields.size() < expected.size()) {
            throw std::runtime_error("results line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(expected.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        try {
            BenchRow r;
            r.dataset = fields[col["dataset"]];
            r.method = fields[col["method"]];
            r.noise_pct = std::stod(fields[col["noise_pct"]]);
            r.trial = std::stoi(fields[col["trial"]]);
            r.seed = std::stoull(fields[col["seed"]]);
            r.iterations = std::stoi(fields[col["iterations"]]);
            r.seconds = std::stod(fields[col["seconds"]]);
            r.objective = std::stod(fields[col["objective"]]);
            r.error_rate = std::stod(fields[col["error_rate"]]);
            r.accuracy_rate = std::stod(fields[col["accuracy_rate"]]);
            r.rand_index = std::stod(fields[col["rand_index"]]);
            r.purity = std::stod(fields[col["purity"]]);
            r.failed = std::stoi(fields[col["failed"]]) != 0;
            rows.push_back(std::move(r));
        } catch (const std::exception&) {
            throw std::runtime_error("results line " + std::to_string(lineno) + ": malformed numeric field");
        }
    }
    return rows;
}

namespace {

template <typename Getter>
std::string summary_table(const std::vector<BenchRow>& rows, const std::vector<std::string>& datasets,
                          const std::vector<std::string>& methods, double level, Getter get, int digits) {
    std::ostringstream out;
    out << "| dataset |";
    for (const auto& m : methods) out << ' ' << m << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < methods.size(); ++i) out << "---|";
    out << '\n';
    for (const auto& ds : datasets) {
        out << "| " << ds << " |";
        for (const auto& m : methods) {
            double sum = 0.0;
            int count = 0;
            for (const auto& r : rows) {
                if (r.failed || r.dataset != ds || r.method != m || r.noise_pct != level) continue;
                sum += get(r);
                ++count;
            }
            if (count == 0) {
                out << " - |";
            } else {
                out << ' ' << format_fixed(sum / count, digits) << " |";
            }
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::string markdown_summary(const std::vector<BenchRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("no rows to summarize");

    std::vector<std::string> datasets, methods;
    std::vector<double> levels;
    std::size_t failures = 0;
    for (const auto& r : rows) {
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
        if (std::find(levels.begin(), levels.end(), r.noise_pct) == levels.end()) levels.push_back(r.noise_pct);
        if (r.failed) ++failures;
    }
    std::sort(levels.begin(), levels.end());

    std::ostringstream out;
    out << "# Benchmark summary\n\n";
    out << "## Mean error rate (%)\n";
    for (double level : levels) {
        out << "\n### Noise " << format_double(level) << "%\n\n";
        out << summary_table(rows, datasets, methods, level, [](const BenchRow& r) { return r.error_rate; }, 3);
    }
    out << "\n## Mean iterations (noise " << format_double(levels.front()) << "%)\n\n";
    out << summary_table(rows, datasets, methods, levels.front(),
                         [](const BenchRow& r) { return static_cast<double>(r.iterations); }, 1);
    out << "\n## Mean seconds (noise " << format_double(levels.front()) << "%)\n\n";
    out << summary_table(rows, datasets, methods, levels.front(), [](const BenchRow& r) { return r.seconds; }, 4);
    if (failures > 0) {
        out << '\n' << failures << " failed run" << (failures == 1 ? "" : "s") << " excluded from all means.\n";
    }
    return out.str();
}

ScoreMatrix score_matrix_from_rows(const std::vector<BenchRow>& rows, const std::string& metric) {
    double (*get)(const BenchRow&) = nullptr;
    bool lower = true;
    if (metric == "error_rate") {
        get = [](const BenchRow& r) { return r.error_rate; };
    } else if (metric == "accuracy_rate") {
        get = [](const BenchRow& r) { return r.accuracy_rate; };
        lower = false;
    } else if (metric == "rand_index") {
        get = [](const BenchRow& r) { return r.rand_index; };
        lower = false;
    } else if (metric == "purity") {
        get = [](const BenchRow& r) { return r.purity; };
        lower = false;
    } else if (metric == "iterations") {
        get = [](const BenchRow& r) { return static_cast<double>(r.iterations); };
    } else if (metric == "seconds") {
        get = [](const BenchRow& r) { return r.seconds; };
    } else if (metric == "objective") {
        get = [](const BenchRow& r) { return r.objective; };
    } else {
        throw std::invalid_argument("unknown metric \"" + metric +
                                    "\" (expected error_rate, accuracy_rate, rand_index, purity, "
                                    "iterations, seconds, or objective)");
    }

    std::vector<std::string> datasets, methods;
    for (const auto& r : rows) {
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    }
    if (datasets.empty()) throw std::invalid_argument("no rows to aggregate");

    ScoreMatrix m;
    m.scores = Matrix(datasets.size(), methods.size());
    m.dataset_names = datasets;
    m.method_names = methods;
    m.lower_is_better = lower;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        for (std::size_t j = 0; j < methods.size(); ++j) {
            double sum = 0.0;
            int count = 0;
            for (const auto& r : rows) {
                if (r.failed || r.dataset != datasets[d] || r.method != methods[j]) continue;
                sum += get(r);
                ++count;
            }
            if (count == 0) {
                throw std::invalid_argument("no successful runs for dataset \"" + datasets[d] +
                                            "\", method \"" + methods[j] + "\"");
            }
            m.scores(d, j) = sum / count;
        }
    }
    return m;
}

}  // namespace cwfcm
