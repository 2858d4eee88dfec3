#include "cwfcm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cwfcm {

namespace {

void check_scores(const ScoreMatrix& m) {
    const std::size_t n = m.scores.rows(), k = m.scores.cols();
    if (n < 2) throw std::invalid_argument("need at least 2 datasets, got " + std::to_string(n));
    if (k < 2) throw std::invalid_argument("need at least 2 methods, got " + std::to_string(k));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (!std::isfinite(m.scores(i, j))) {
                throw std::invalid_argument("non-finite score at row " + std::to_string(i + 1) +
                                            ", column " + std::to_string(j + 1));
            }
        }
    }
}

// Rank sums per method plus, when tie_sum is non-null, the accumulated
// sum(t^3 - t) over tied groups needed by the Friedman correction.
std::vector<double> rank_sums_of(const ScoreMatrix& m, double* tie_sum) {
    const std::size_t n = m.scores.rows(), k = m.scores.cols();
    std::vector<double> sums(k, 0.0);
    std::vector<double> row(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            row[j] = m.lower_is_better ? m.scores(i, j) : -m.scores(i, j);
        }
        const auto ranks = average_ranks(row);
        for (std::size_t j = 0; j < k; ++j) sums[j] += ranks[j];
        if (tie_sum) {
            std::vector<double> sorted(row);
            std::sort(sorted.begin(), sorted.end());
            std::size_t a = 0;
            while (a < k) {
                std::size_t b = a;
                while (b + 1 < k && sorted[b + 1] == sorted[a]) ++b;
                const double t = static_cast<double>(b - a + 1);
                *tie_sum += t * t * t - t;
                a = b + 1;
            }
        }
    }
    return sums;
}

// Regularized lower incomplete gamma P(s, x), series form; for x < s + 1.
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int i = 1; i < 500; ++i) {
        term *= x / (s + i);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Regularized upper incomplete gamma Q(s, x), continued fraction; for
// x >= s + 1 (modified Lentz evaluation).
double gamma_q_cf(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
    constexpr double inv_sqrt_2pi = std::numbers::inv_sqrtpi / std::numbers::sqrt2;
    return std::exp(-0.5 * z * z) * inv_sqrt_2pi;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

FriedmanResult friedman(const ScoreMatrix& m, double alpha) {
    check_scores(m);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must be in (0, 1), got " + std::to_string(alpha));
    }
    const double n = static_cast<double>(m.scores.rows());
    const double k = static_cast<double>(m.scores.cols());

    double tie_sum = 0.0;
    auto rank_sums = rank_sums_of(m, &tie_sum);

    double ssbn = 0.0;
    for (double r : rank_sums) ssbn += r * r;
    const double q_raw = 12.0 / (n * k * (k + 1.0)) * ssbn - 3.0 * n * (k + 1.0);
    const double correction = 1.0 - tie_sum / (n * k * (k * k - 1.0));

    FriedmanResult res;
    res.degrees_of_freedom = static_cast<int>(m.scores.cols()) - 1;
    res.rank_sums = std::move(rank_sums);
    res.critical_value = chi_squared_quantile(1.0 - alpha, res.degrees_of_freedom);
    if (correction <= 0.0) {
        res.q_statistic = 0.0;
        res.p_value = 1.0;
    } else {
        res.q_statistic = q_raw / correction;
        res.p_value = chi_squared_sf(res.q_statistic, res.degrees_of_freedom);
    }
    return res;
}

Matrix nemenyi(const ScoreMatrix& m) {
    check_scores(m);
    const std::size_t k = m.scores.cols();
    const double n = static_cast<double>(m.scores.rows());
    const double kd = static_cast<double>(k);

    const auto rank_sums = rank_sums_of(m, nullptr);
    const double se = std::sqrt(kd * (kd + 1.0) / (6.0 * n));

    Matrix p(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        p(i, i) = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            const double z = std::abs(rank_sums[i] - rank_sums[j]) / n / se;
            const double val = studentized_range_sf(z * std::numbers::sqrt2, static_cast<int>(k));
            p(i, j) = val;
            p(j, i) = val;
        }
    }
    return p;
}

double chi_squared_sf(double x, int dof) {
    if (dof < 1) throw std::invalid_argument("degrees of freedom must be positive, got " + std::to_string(dof));
    if (!std::isfinite(x)) throw std::invalid_argument("chi-squared statistic must be finite");
    if (x <= 0.0) return 1.0;
    const double s = 0.5 * dof, half_x = 0.5 * x;
    return half_x < s + 1.0 ? 1.0 - gamma_p_series(s, half_x) : gamma_q_cf(s, half_x);
}

double chi_squared_quantile(double p, int dof) {
    if (dof < 1) throw std::invalid_argument("degrees of freedom must be positive, got " + std::to_string(dof));
    if (!(p >= 0.0 && p < 1.0)) {
        throw std::invalid_argument("probability must be in [0, 1), got " + std::to_string(p));
    }
    if (p == 0.0) return 0.0;
    const double target = 1.0 - p;
    double lo = 0.0, hi = 1.0;
    while (chi_squared_sf(hi, dof) > target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chi_squared_sf(mid, dof) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double studentized_range_sf(double q, int k) {
    if (k < 2) throw std::invalid_argument("studentized range needs at least 2 groups, got " + std::to_string(k));
    if (!(q > 0.0)) return 1.0;
    // CDF(q) = k * integral of phi(z) * (Phi(z) - Phi(z - q))^(k-1) over z;
    // past |z| = 9 the integrand is below double-precision noise. Simpson's
    // rule on 8000 intervals keeps the error well under the 5e-3 tolerance
    // used against published tables.
    constexpr int intervals = 8000;
    constexpr double lo = -9.0, hi = 9.0;
    const double h = (hi - lo) / intervals;
    double sum = 0.0;
    for (int i = 0; i <= intervals; ++i) {
        const double z = lo + h * i;
        const double f = normal_pdf(z) * std::pow(normal_cdf(z) - normal_cdf(z - q), k - 1);
        const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * f;
    }
    const double cdf = static_cast<double>(k) * sum * h / 3.0;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
}

}  // namespace cwfcm
