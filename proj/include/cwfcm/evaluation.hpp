#pragma once

#include <span>
#include <vector>

namespace cwfcm {

/// External validation of a clustering against ground-truth class labels.
struct EvaluationReport {
    double rand_index = 0.0;     // in [0,1]
    double purity = 0.0;         // in (0,1]
    double accuracy_rate = 0.0;  // percent
    double error_rate = 0.0;     // percent
    int misclassified = 0;
    std::vector<int> mapping;    // cluster index -> class id, -1 for unmatched clusters
};

/// Fraction of point pairs on which the two partitions agree: co-clustered
/// in both or separated in both. Computed from the contingency table, so it
/// is O(n + C*K) rather than O(n^2).
double rand_index(std::span<const int> predicted, std::span<const int> actual);

/// Average fraction of each cluster occupied by its majority true class
/// (many-to-one mapping).
double purity(std::span<const int> predicted, std::span<const int> actual);

struct AccuracyResult {
    double accuracy_rate = 0.0;  // percent
    double error_rate = 0.0;     // percent
    int misclassified = 0;
    std::vector<int> mapping;    // cluster index -> class id, -1 for unmatched clusters
};

/// Accuracy under the best one-to-one cluster-to-class assignment, found
/// with the Hungarian algorithm on the confusion matrix. One-to-one (rather
/// than majority voting) keeps the rate well-defined when two clusters share
/// a majority class.
AccuracyResult accuracy(std::span<const int> predicted, std::span<const int> actual);

EvaluationReport evaluate(std::span<const int> predicted, std::span<const int> actual);

/// Minimum-cost assignment of rows to columns for a rectangular cost matrix;
/// returns per-row column indices (-1 when rows exceed columns and the row
/// is left unmatched). Exposed for reuse; accuracy() is its only client here.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace cwfcm
