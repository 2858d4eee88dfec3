#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "cwfcm/core.hpp"
#include "cwfcm/dataset.hpp"
#include "cwfcm/distance.hpp"
#include "cwfcm/weighting.hpp"

namespace cwfcm {

enum class InitKind { random, magnitude };

InitKind init_kind_from_name(std::string_view name);
std::string_view init_kind_name(InitKind kind);

/// Everything a fit() run needs. `distance_power` is the exponent applied to
/// the metric value to form the dissimilarity entering the objective and
/// membership updates: 2 squares every metric; 1 uses the metric value
/// directly, which is how the canberra variant reproduces its reference
/// results (the membership ranking is the same either way, the converged
/// partition is not).
struct FcmConfig {
    int clusters = 2;
    double fuzziness = 2.0;  // > 1
    double epsilon = 1e-5;   // tolerance on |P(t) - P(t-1)|
    int max_iter = 100;
    InitKind init = InitKind::random;
    std::uint64_t seed = 0;  // consumed by random init only
    DistanceSpec distance;
    WeightScheme weight_scheme = WeightScheme::none;
    bool normalize = false;  // per-feature min-max before clustering
    int distance_power = 2;  // 1 or 2
};

/// n x c fuzzy membership matrix; every row sums to 1.
struct PartitionMatrix {
    Matrix mu;

    std::size_t points() const { return mu.rows(); }
    std::size_t clusters() const { return mu.cols(); }
};

struct RunResult {
    PartitionMatrix partition;
    Matrix centers;  // c x m
    std::vector<double> objective_trace;
    int iterations = 0;
    double wall_time = 0.0;  // seconds spent inside the optimization loop
    std::vector<int> crisp_labels;
};

/// Called after each iteration with the just-updated partition and the
/// objective value of that iteration. Used by diagnostics and invariant
/// checks; fit() ignores its cost otherwise.
using IterationObserver = std::function<void(int iteration, const PartitionMatrix& p, double objective)>;

/// Uniform random memberships, row-normalized. Deterministic given seed.
PartitionMatrix init_random(std::size_t n, int c, std::uint64_t seed);

/// Deterministic initialization: each point's L1 magnitude is min-max scaled
/// to f in [0,1], then spread over the c clusters with a triangular kernel
/// centered at (k + 0.5)/c with half-width 1/c, floored at 1e-6 and
/// row-normalized. Points with the smallest magnitude start in cluster 0,
/// the largest in cluster c-1.
PartitionMatrix init_magnitude(const Dataset& d, int c);

/// Fuzzy-weighted cluster means. Throws if a cluster's total fuzzy mass is
/// zero (empty fuzzy cluster).
Matrix update_centers(const Dataset& d, const PartitionMatrix& p, double fuzziness);

/// Membership update from the n x c dissimilarity matrix. Rows with one or
/// more zero entries get the crisp rule: membership split equally over the
/// zero-dissimilarity clusters.
PartitionMatrix update_memberships(const Matrix& distances_sq, double fuzziness);

/// Objective value: sum over points and clusters of mu^fuzziness times the
/// dissimilarity.
double objective(const PartitionMatrix& p, const Matrix& distances_sq, double fuzziness);

/// Run the alternating-optimization loop until |P(t) - P(t-1)| < epsilon or
/// the iteration cap. Feature weights (if any) are computed once from the
/// input data before the loop, as is the mahalanobis matrix when the spec
/// does not supply one.
RunResult fit(const Dataset& d, const FcmConfig& cfg, const IterationObserver& observer = {});

}  // namespace cwfcm
