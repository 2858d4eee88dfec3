#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cwfcm/core.hpp"
#include "cwfcm/dataset.hpp"

namespace cwfcm {

enum class Metric { euclidean, cityblock, minkowski, canberra, mahalanobis };

Metric metric_from_name(std::string_view name);
std::string_view metric_name(Metric kind);

/// Selects a metric plus its parameters. `weights` scales each feature's
/// contribution (see distance() for how that lands in each formula);
/// `mahalanobis_matrix` is the SPD matrix of the quadratic form, usually
/// produced by mahalanobis_matrix_from().
struct DistanceSpec {
    Metric kind = Metric::euclidean;
    int minkowski_p = 3;  // deliberately distinct from the p=1/p=2 special cases
    std::optional<std::vector<double>> weights;
    std::optional<Matrix> mahalanobis_matrix;
};

/// Distance between two m-vectors under the selected metric. Always the
/// unsquared value: euclidean is the root form, mahalanobis is the square
/// root of the quadratic form. Weighting multiplies each feature's term
/// inside the sum; for mahalanobis the difference vector is scaled by
/// sqrt(w_j) so that an identity matrix reduces to weighted euclidean.
///
/// Canberra terms with |x_j| + |v_j| = 0 contribute 0.
double distance(const DistanceSpec& spec, std::span<const double> x, std::span<const double> v);

/// Inverse of the ridge-stabilized sample covariance: (S + lambda*I)^-1 with
/// lambda = ridge * trace(S)/m. Throws if the result is not positive definite
/// (rank-deficient data with ridge = 0).
Matrix mahalanobis_matrix_from(const Dataset& d, double ridge = 1e-6);

}  // namespace cwfcm
