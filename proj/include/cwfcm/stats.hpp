#pragma once

#include <span>
#include <string>
#include <vector>

#include "cwfcm/core.hpp"

namespace cwfcm {

// Scores for k methods measured on N datasets, one row per dataset.
// lower_is_better controls the rank direction (rank 1 = best).
struct ScoreMatrix {
    Matrix scores;
    std::vector<std::string> dataset_names;
    std::vector<std::string> method_names;
    bool lower_is_better = true;
};

struct FriedmanResult {
    double q_statistic = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
    std::vector<double> rank_sums;
    double critical_value = 0.0;
};

// Ranks values ascending (1 = smallest); tied values share the average of
// the ranks they occupy.
std::vector<double> average_ranks(std::span<const double> values);

// Friedman omnibus test on the score matrix, with average ranks and the
// standard tie-corrected denominator. A matrix where every row is fully
// tied carries no evidence of differences and yields Q = 0, p = 1.
FriedmanResult friedman(const ScoreMatrix& m, double alpha = 0.05);

// Pairwise Nemenyi p-values: z = |mean rank difference| / sqrt(k(k+1)/(6N)),
// referred to the studentized range distribution with k groups and infinite
// degrees of freedom at q = z * sqrt(2). Symmetric with unit diagonal.
Matrix nemenyi(const ScoreMatrix& m);

// Upper tail P(X > x) of the chi-squared distribution.
double chi_squared_sf(double x, int dof);

// Inverse CDF: the x with P(X <= x) = p, for p in [0, 1).
double chi_squared_quantile(double p, int dof);

// Upper tail of the studentized range distribution with k groups and
// infinite degrees of freedom, by numerical integration.
double studentized_range_sf(double q, int k);

}  // namespace cwfcm
