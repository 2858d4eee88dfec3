#pragma once

// Reference implementations used to cross-check the library. Each one takes
// a deliberately different route than the production code: direct pair
// enumeration instead of contingency counting, exhaustive permutations
// instead of assignment optimization, the squared-individual-ranks form of
// the Friedman statistic instead of the tie-corrected chi-square form.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "cwfcm/core.hpp"

namespace oracle {

// Rand index by brute-force enumeration of all point pairs.
inline double rand_index_pairs(std::span<const int> a, std::span<const int> b) {
    const std::size_t n = a.size();
    long long agree = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same_a = a[i] == a[j];
            const bool same_b = b[i] == b[j];
            if (same_a == same_b) ++agree;
            ++total;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(total);
}

// Maximum correctly-mapped count over every one-to-one cluster-to-class
// assignment, by exhaustive permutation search. Factorial cost; keep
// max(clusters, classes) small.
inline int best_matching_bruteforce(std::span<const int> predicted, std::span<const int> actual) {
    int nc = 0, nk = 0;
    for (int v : predicted) nc = std::max(nc, v + 1);
    for (int v : actual) nk = std::max(nk, v + 1);
    const int dim = std::max(nc, nk);
    std::vector<std::vector<int>> counts(dim, std::vector<int>(dim, 0));
    for (std::size_t i = 0; i < predicted.size(); ++i) counts[predicted[i]][actual[i]]++;

    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    int best = 0;
    do {
        int correct = 0;
        for (int c = 0; c < dim; ++c) correct += counts[c][perm[c]];
        best = std::max(best, correct);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Average rank of each value by counting: rank = (#smaller) + (#equal+1)/2,
// where #equal includes the value itself.
inline std::vector<double> counting_ranks(std::span<const double> row) {
    const std::size_t k = row.size();
    std::vector<double> ranks(k);
    for (std::size_t j = 0; j < k; ++j) {
        int smaller = 0, equal = 0;
        for (std::size_t l = 0; l < k; ++l) {
            if (row[l] < row[j]) ++smaller;
            if (row[l] == row[j]) ++equal;
        }
        ranks[j] = smaller + 0.5 * (equal + 1);
    }
    return ranks;
}

// Friedman statistic in the squared-individual-ranks formulation:
//   T = (k-1) * sum_j (R_j - N(k+1)/2)^2 / (A - C)
// with A the sum of squared individual ranks and C = N k (k+1)^2 / 4.
// Algebraically equal to the tie-corrected chi-square form. A fully tied
// matrix has A == C; report 0 for it.
inline double friedman_statistic_ranks(const cwfcm::Matrix& scores, bool lower_is_better) {
    const std::size_t n = scores.rows(), k = scores.cols();
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);

    double a = 0.0;
    std::vector<double> rank_sums(k, 0.0);
    std::vector<double> row(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) row[j] = lower_is_better ? scores(i, j) : -scores(i, j);
        const auto ranks = counting_ranks(row);
        for (std::size_t j = 0; j < k; ++j) {
            a += ranks[j] * ranks[j];
            rank_sums[j] += ranks[j];
        }
    }

    const double c = nd * kd * (kd + 1.0) * (kd + 1.0) / 4.0;
    double dev = 0.0;
    for (double r : rank_sums) {
        const double d = r - nd * (kd + 1.0) / 2.0;
        dev += d * d;
    }
    if (a == c) return 0.0;
    return (kd - 1.0) * dev / (a - c);
}

}  // namespace oracle
