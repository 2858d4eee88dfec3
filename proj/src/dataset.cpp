#include "cwfcm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cwfcm {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, delim)) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == delim) {
        fields.emplace_back();
    }
    return fields;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& token, double& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

std::size_t resolve_label_column(const std::string& spec, std::size_t num_columns) {
    if (spec == "last") return num_columns - 1;
    std::size_t idx = 0;
    auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), idx);
    if (ec != std::errc{} || ptr != spec.data() + spec.size()) {
        throw std::invalid_argument("label column must be a column index or \"last\", got \"" + spec + "\"");
    }
    if (idx >= num_columns) {
        throw std::invalid_argument("label column " + std::to_string(idx) + " out of range for " +
                                    std::to_string(num_columns) + " columns");
    }
    return idx;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Dataset load_csv(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open dataset file: " + path);
    }

    std::vector<std::string> raw_lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) raw_lines.push_back(line);
    }

    std::size_t first_data = opts.has_header ? 1 : 0;
    if (raw_lines.size() < first_data + 2) {
        throw std::runtime_error(path + ": need at least 2 data rows, found " +
                                 std::to_string(raw_lines.size() < first_data ? 0 : raw_lines.size() - first_data));
    }

    auto first_fields = split_line(raw_lines[first_data], opts.delimiter);
    const std::size_t num_columns = first_fields.size();
    if (num_columns < 2) {
        throw std::runtime_error(path + ": rows must have a label column and at least one feature column");
    }
    const std::size_t label_col = resolve_label_column(opts.label_column, num_columns);
    const std::size_t m = num_columns - 1;
    const std::size_t n = raw_lines.size() - first_data;

    Dataset d;
    d.points = Matrix(n, m);
    d.labels.resize(n);

    if (opts.has_header) {
        auto header = split_line(raw_lines[0], opts.delimiter);
        if (header.size() != num_columns) {
            throw std::runtime_error(path + ": header has " + std::to_string(header.size()) +
                                     " fields, data rows have " + std::to_string(num_columns));
        }
        for (std::size_t col = 0; col < num_columns; ++col) {
            if (col == label_col) {
                d.label_name = trim(header[col]);
            } else {
                d.feature_names.push_back(trim(header[col]));
            }
        }
    } else {
        for (std::size_t j = 0; j < m; ++j) {
            d.feature_names.push_back("f" + std::to_string(j));
        }
    }

    std::unordered_map<std::string, int> class_ids;
    for (std::size_t r = 0; r < n; ++r) {
        auto fields = split_line(raw_lines[first_data + r], opts.delimiter);
        const std::size_t file_row = first_data + r + 1;  // 1-based, as editors show it
        if (fields.size() != num_columns) {
            throw std::runtime_error(path + ": row " + std::to_string(file_row) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(num_columns));
        }
        std::size_t j = 0;
        for (std::size_t col = 0; col < num_columns; ++col) {
            std::string token = trim(fields[col]);
            if (col == label_col) {
                auto [it, inserted] = class_ids.try_emplace(token, static_cast<int>(d.class_names.size()));
                if (inserted) d.class_names.push_back(token);
                d.labels[r] = it->second;
            } else {
                double value = 0.0;
                if (!parse_number(token, value)) {
                    throw std::runtime_error(path + ": row " + std::to_string(file_row) + ", column " +
                                             std::to_string(col + 1) + ": cannot parse \"" + token +
                                             "\" as a number");
                }
                d.points(r, j++) = value;
            }
        }
    }

    validate(d);
    return d;
}

void save_csv(const Dataset& d, const std::string& path, const CsvOptions& opts) {
    const std::size_t num_columns = d.m() + 1;
    const std::size_t label_col = resolve_label_column(opts.label_column, num_columns);

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }

    auto write_row = [&](const std::vector<std::string>& fields) {
        for (std::size_t col = 0; col < fields.size(); ++col) {
            if (col) out << opts.delimiter;
            out << fields[col];
        }
        out << '\n';
    };

    std::vector<std::string> fields(num_columns);
    if (opts.has_header) {
        std::size_t j = 0;
        for (std::size_t col = 0; col < num_columns; ++col) {
            fields[col] = (col == label_col) ? d.label_name : d.feature_names[j++];
        }
        write_row(fields);
    }
    for (std::size_t i = 0; i < d.n(); ++i) {
        std::size_t j = 0;
        for (std::size_t col = 0; col < num_columns; ++col) {
            fields[col] = (col == label_col) ? d.class_names[d.labels[i]] : format_double(d.points(i, j++));
        }
        write_row(fields);
    }
    if (!out) {
        throw std::runtime_error("failed writing " + path);
    }
}

void validate(const Dataset& d) {
    if (d.n() < 2) throw std::invalid_argument("dataset needs at least 2 points");
    if (d.m() < 1) throw std::invalid_argument("dataset needs at least 1 feature");
    if (d.labels.size() != d.n()) throw std::invalid_argument("labels length does not match point count");
    if (d.feature_names.size() != d.m()) throw std::invalid_argument("feature name count does not match feature count");
    const int k = static_cast<int>(d.num_classes());
    if (k < 1) throw std::invalid_argument("dataset needs at least 1 class");
    for (std::size_t i = 0; i < d.n(); ++i) {
        if (d.labels[i] < 0 || d.labels[i] >= k) {
            throw std::invalid_argument("label out of range at point " + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < d.n(); ++i) {
        for (std::size_t j = 0; j < d.m(); ++j) {
            if (!std::isfinite(d.points(i, j))) {
                throw std::invalid_argument("non-finite value at point " + std::to_string(i) + ", feature " +
                                            std::to_string(j));
            }
        }
    }
}

std::vector<double> feature_stddevs(const Dataset& d) {
    const std::size_t n = d.n(), m = d.m();
    std::vector<double> mean(m, 0.0), sd(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) mean[j] += d.points(i, j);
    for (std::size_t j = 0; j < m; ++j) mean[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double dev = d.points(i, j) - mean[j];
            sd[j] += dev * dev;
        }
    for (std::size_t j = 0; j < m; ++j) sd[j] = std::sqrt(sd[j] / static_cast<double>(n - 1));
    return sd;
}

Dataset add_noise(const Dataset& d, const NoiseSpec& spec) {
    if (spec.level < 0.0 || spec.level > 100.0) {
        throw std::invalid_argument("noise level must be in [0, 100], got " + std::to_string(spec.level));
    }
    Dataset out = d;
    if (spec.level == 0.0) return out;

    const auto sd = feature_stddevs(d);
    Rng rng(spec.seed);
    const double scale = spec.level / 100.0;
    // Draw order is fixed (row-major) so the output is a pure function of seed.
    for (std::size_t i = 0; i < d.n(); ++i) {
        for (std::size_t j = 0; j < d.m(); ++j) {
            double g = rng.gaussian();
            if (sd[j] > 0.0) out.points(i, j) += g * scale * sd[j];
        }
    }
    return out;
}

Dataset minmax_normalize(const Dataset& d) {
    const std::size_t n = d.n(), m = d.m();
    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            lo[j] = std::min(lo[j], d.points(i, j));
            hi[j] = std::max(hi[j], d.points(i, j));
        }
    Dataset out = d;
    for (std::size_t j = 0; j < m; ++j) {
        const double range = hi[j] - lo[j];
        if (range <= 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            out.points(i, j) = (d.points(i, j) - lo[j]) / range;
        }
    }
    return out;
}

}  // namespace cwfcm
