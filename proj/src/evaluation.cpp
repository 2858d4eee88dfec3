#include "cwfcm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwfcm {

namespace {

int max_label(std::span<const int> labels) {
    int mx = -1;
    for (int v : labels) {
        if (v < 0) throw std::invalid_argument("labels must be non-negative");
        mx = std::max(mx, v);
    }
    return mx;
}

// Contingency table: counts[c][k] = points in predicted cluster c with
// actual class k.
std::vector<std::vector<long long>> contingency(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size()) {
        throw std::invalid_argument("label vectors differ in length (" + std::to_string(predicted.size()) +
                                    " vs " + std::to_string(actual.size()) + ")");
    }
    if (predicted.empty()) throw std::invalid_argument("label vectors are empty");
    const int nc = max_label(predicted) + 1;
    const int nk = max_label(actual) + 1;
    std::vector<std::vector<long long>> counts(nc, std::vector<long long>(nk, 0));
    for (std::size_t i = 0; i < predicted.size(); ++i) counts[predicted[i]][actual[i]]++;
    return counts;
}

long long pairs(long long x) { return x * (x - 1) / 2; }

}  // namespace

double rand_index(std::span<const int> predicted, std::span<const int> actual) {
    const auto counts = contingency(predicted, actual);
    const long long n = static_cast<long long>(predicted.size());
    if (n < 2) throw std::invalid_argument("rand_index needs at least 2 points");

    long long both_same = 0;       // co-clustered in both partitions
    long long same_pred = 0;       // co-clustered in the prediction
    long long same_actual = 0;     // co-clustered in the ground truth
    std::vector<long long> col_sums(counts[0].size(), 0);
    for (const auto& row : counts) {
        long long row_sum = 0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            both_same += pairs(row[k]);
            row_sum += row[k];
            col_sums[k] += row[k];
        }
        same_pred += pairs(row_sum);
    }
    for (long long s : col_sums) same_actual += pairs(s);

    const long long total = pairs(n);
    // separated in both = total - (same in either), by inclusion-exclusion
    const long long both_diff = total - same_pred - same_actual + both_same;
    return static_cast<double>(both_same + both_diff) / static_cast<double>(total);
}

double purity(std::span<const int> predicted, std::span<const int> actual) {
    const auto counts = contingency(predicted, actual);
    long long majority_total = 0;
    for (const auto& row : counts) {
        majority_total += *std::max_element(row.begin(), row.end());
    }
    return static_cast<double>(majority_total) / static_cast<double>(predicted.size());
}

std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int n_rows = static_cast<int>(cost.size());
    const int n_cols = n_rows ? static_cast<int>(cost[0].size()) : 0;
    const int dim = std::max(n_rows, n_cols);
    constexpr double kInf = std::numeric_limits<double>::max();

    // Jonker-Volgenant style shortest augmenting paths on a square matrix
    // padded with zeros; 1-based internal indexing with a dummy row/column 0.
    std::vector<std::vector<double>> a(dim + 1, std::vector<double>(dim + 1, 0.0));
    for (int i = 0; i < n_rows; ++i)
        for (int j = 0; j < n_cols; ++j) a[i + 1][j + 1] = cost[i][j];

    std::vector<double> u(dim + 1, 0.0), v(dim + 1, 0.0);
    std::vector<int> match(dim + 1, 0), way(dim + 1, 0);
    for (int i = 1; i <= dim; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(dim + 1, kInf);
        std::vector<char> used(dim + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= dim; ++j) {
                if (used[j]) continue;
                const double cur = a[i0][j] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= dim; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> assignment(n_rows, -1);
    for (int j = 1; j <= dim; ++j) {
        const int i = match[j] - 1;
        if (i >= 0 && i < n_rows && j - 1 < n_cols) assignment[i] = j - 1;
    }
    return assignment;
}

AccuracyResult accuracy(std::span<const int> predicted, std::span<const int> actual) {
    const auto counts = contingency(predicted, actual);
    const std::size_t nc = counts.size(), nk = counts[0].size();

    // Maximize matched counts == minimize (row_max - count).
    std::vector<std::vector<double>> cost(nc, std::vector<double>(nk));
    for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t k = 0; k < nk; ++k) cost[c][k] = -static_cast<double>(counts[c][k]);
    const auto mapping = min_cost_assignment(cost);

    long long correct = 0;
    for (std::size_t c = 0; c < nc; ++c) {
        if (mapping[c] >= 0) correct += counts[c][mapping[c]];
    }
    const auto n = static_cast<double>(predicted.size());

    AccuracyResult r;
    r.mapping = mapping;
    r.accuracy_rate = 100.0 * static_cast<double>(correct) / n;
    r.error_rate = 100.0 - r.accuracy_rate;
    r.misclassified = static_cast<int>(predicted.size()) - static_cast<int>(correct);
    return r;
}

EvaluationReport evaluate(std::span<const int> predicted, std::span<const int> actual) {
    EvaluationReport rep;
    rep.rand_index = rand_index(predicted, actual);
    rep.purity = purity(predicted, actual);
    auto acc = accuracy(predicted, actual);
    rep.accuracy_rate = acc.accuracy_rate;
    rep.error_rate = acc.error_rate;
    rep.misclassified = acc.misclassified;
    rep.mapping = std::move(acc.mapping);
    return rep;
}

}  // namespace cwfcm
