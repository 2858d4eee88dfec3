#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwfcm/core.hpp"

namespace cwfcm {

/// Labeled numeric dataset: n points with m features each plus an integer
/// class label per point. Immutable after construction; operations that
/// change values return a new Dataset.
struct Dataset {
    Matrix points;                           // n x m feature values
    std::vector<int> labels;                 // class ids in 0..K-1
    std::vector<std::string> feature_names;  // m entries
    std::vector<std::string> class_names;    // original label tokens, first-appearance order
    std::string label_name = "class";

    std::size_t n() const { return points.rows(); }
    std::size_t m() const { return points.cols(); }
    std::size_t num_classes() const { return class_names.size(); }
};

/// Shape of a delimited text file: where the label column sits, whether the
/// first row is a header, and the field separator.
struct CsvOptions {
    std::string label_column = "last";  // zero-based column index or "last"
    char delimiter = ',';
    bool has_header = false;
};

/// Additive attribute noise: each value gets a zero-mean Gaussian bump with
/// standard deviation (level/100) times that feature's own sample stddev.
struct NoiseSpec {
    double level = 0.0;  // percentage in [0, 100]
    std::uint64_t seed = 0;
};

Dataset load_csv(const std::string& path, const CsvOptions& opts = {});
void save_csv(const Dataset& d, const std::string& path, const CsvOptions& opts = {});

Dataset add_noise(const Dataset& d, const NoiseSpec& spec);

/// Per-feature min-max scaling to [0,1]. Constant features are left as-is.
Dataset minmax_normalize(const Dataset& d);

/// Checks the Dataset invariants (shape agreement, finite values, labels in
/// range); throws std::invalid_argument naming the first violation.
void validate(const Dataset& d);

/// Sample standard deviation (n-1 denominator) of each feature.
std::vector<double> feature_stddevs(const Dataset& d);

/// Format a double with the shortest representation that parses back exactly.
std::string format_double(double v);

}  // namespace cwfcm
