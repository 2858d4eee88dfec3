#pragma once

#include <string_view>
#include <vector>

#include "cwfcm/dataset.hpp"

namespace cwfcm {

/// Per-feature relevance statistic used to derive weights. `none` keeps every
/// feature at weight 1; the others compute a statistic per feature and
/// min-max fuzzify it into [0,1].
enum class WeightScheme { none, vmr, entropy, variance, stddev, mean };

WeightScheme weight_scheme_from_name(std::string_view name);
std::string_view weight_scheme_name(WeightScheme scheme);

/// Fuzzified weight vector plus the raw statistics it came from. When the
/// raw statistics are not all equal, min(values) is exactly 0 and
/// max(values) is exactly 1.
struct WeightVector {
    std::vector<double> values;
    std::vector<double> raw_stats;
};

/// Variance-to-mean ratio (index of dispersion) of each feature, with
/// (n-1)-denominator sample variance. A feature with zero mean is an error:
/// the ratio is undefined there, so normalize or drop the feature first.
std::vector<double> vmr(const Dataset& d);

/// Min-max scaling of a statistic vector to [0,1]: the smallest statistic
/// maps to 0, the largest to 1. All-equal input degenerates to all ones,
/// which behaves like unweighted clustering.
WeightVector fuzzify(const std::vector<double>& stats);

WeightVector feature_weights(const Dataset& d, WeightScheme scheme);

/// L1 magnitude of each point (sum of absolute feature values). Drives the
/// deterministic initializer: it orders points along a single scalar axis.
std::vector<double> l1_magnitudes(const Dataset& d);

}  // namespace cwfcm
