#include "cwfcm/distance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cwfcm {

Metric metric_from_name(std::string_view name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "cityblock") return Metric::cityblock;
    if (name == "minkowski") return Metric::minkowski;
    if (name == "canberra") return Metric::canberra;
    if (name == "mahalanobis") return Metric::mahalanobis;
    throw std::invalid_argument("unknown distance metric: " + std::string(name));
}

std::string_view metric_name(Metric kind) {
    switch (kind) {
        case Metric::euclidean: return "euclidean";
        case Metric::cityblock: return "cityblock";
        case Metric::minkowski: return "minkowski";
        case Metric::canberra: return "canberra";
        case Metric::mahalanobis: return "mahalanobis";
    }
    return "?";
}

namespace {

void check_inputs(const DistanceSpec& spec, std::span<const double> x, std::span<const double> v) {
    if (x.size() != v.size()) {
        throw std::invalid_argument("distance: vector lengths differ (" + std::to_string(x.size()) + " vs " +
                                    std::to_string(v.size()) + ")");
    }
    if (spec.weights && spec.weights->size() != x.size()) {
        throw std::invalid_argument("distance: weight vector length does not match feature count");
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!std::isfinite(x[j]) || !std::isfinite(v[j])) {
            throw std::invalid_argument("distance: non-finite input at feature " + std::to_string(j));
        }
    }
}

double weight_at(const DistanceSpec& spec, std::size_t j) {
    return spec.weights ? (*spec.weights)[j] : 1.0;
}

double mahalanobis(const DistanceSpec& spec, std::span<const double> x, std::span<const double> v) {
    const std::size_t m = x.size();
    if (!spec.mahalanobis_matrix || spec.mahalanobis_matrix->rows() != m ||
        spec.mahalanobis_matrix->cols() != m) {
        throw std::invalid_argument("mahalanobis distance needs an m x m matrix matching the feature count");
    }
    const Matrix& a = *spec.mahalanobis_matrix;
    std::vector<double> diff(m);
    for (std::size_t j = 0; j < m; ++j) {
        diff[j] = (x[j] - v[j]) * std::sqrt(weight_at(spec, j));
    }
    double quad = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < m; ++c) s += a(r, c) * diff[c];
        quad += diff[r] * s;
    }
    return std::sqrt(std::max(quad, 0.0));
}

}  // namespace

double distance(const DistanceSpec& spec, std::span<const double> x, std::span<const double> v) {
    check_inputs(spec, x, v);
    const std::size_t m = x.size();

    switch (spec.kind) {
        case Metric::euclidean: {
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                double t = x[j] - v[j];
                sum += weight_at(spec, j) * t * t;
            }
            return std::sqrt(sum);
        }
        case Metric::cityblock: {
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                sum += weight_at(spec, j) * std::abs(x[j] - v[j]);
            }
            return sum;
        }
        case Metric::minkowski: {
            if (spec.minkowski_p < 1) {
                throw std::invalid_argument("minkowski p must be a positive integer");
            }
            const double p = static_cast<double>(spec.minkowski_p);
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                sum += weight_at(spec, j) * std::pow(std::abs(x[j] - v[j]), p);
            }
            return std::pow(sum, 1.0 / p);
        }
        case Metric::canberra: {
            double sum = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double den = std::abs(x[j]) + std::abs(v[j]);
                if (den > 0.0) {
                    sum += weight_at(spec, j) * std::abs(x[j] - v[j]) / den;
                }
            }
            return sum;
        }
        case Metric::mahalanobis:
            return mahalanobis(spec, x, v);
    }
    throw std::logic_error("unreachable metric kind");
}

namespace {

// In-place Cholesky factorization; returns false if the matrix is not
// positive definite.
bool cholesky(Matrix& a) {
    const std::size_t m = a.rows();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= a(i, k) * a(j, k);
            if (i == j) {
                if (sum <= 0.0) return false;
                a(i, i) = std::sqrt(sum);
            } else {
                a(i, j) = sum / a(j, j);
            }
        }
    }
    return true;
}

}  // namespace

Matrix mahalanobis_matrix_from(const Dataset& d, double ridge) {
    if (ridge < 0.0) throw std::invalid_argument("ridge must be non-negative");
    const std::size_t n = d.n(), m = d.m();

    std::vector<double> mean(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) mean[j] += d.points(i, j);
    for (std::size_t j = 0; j < m; ++j) mean[j] /= static_cast<double>(n);

    Matrix cov(m, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < m; ++r) {
            const double dr = d.points(i, r) - mean[r];
            for (std::size_t c = r; c < m; ++c) {
                cov(r, c) += dr * (d.points(i, c) - mean[c]);
            }
        }
    }
    double trace = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = r; c < m; ++c) {
            cov(r, c) /= static_cast<double>(n - 1);
            cov(c, r) = cov(r, c);
        }
        trace += cov(r, r);
    }
    const double lambda = ridge * trace / static_cast<double>(m);
    for (std::size_t r = 0; r < m; ++r) cov(r, r) += lambda;

    Matrix chol = cov;
    if (!cholesky(chol)) {
        throw std::runtime_error("covariance matrix is singular; increase the ridge parameter");
    }

    // Invert via the factor: solve L L^T X = I column by column.
    Matrix inv(m, m);
    std::vector<double> y(m);
    for (std::size_t col = 0; col < m; ++col) {
        for (std::size_t i = 0; i < m; ++i) {
            double sum = (i == col) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) sum -= chol(i, k) * y[k];
            y[i] = sum / chol(i, i);
        }
        for (std::size_t i = m; i-- > 0;) {
            double sum = y[i];
            for (std::size_t k = i + 1; k < m; ++k) sum -= chol(k, i) * inv(k, col);
            inv(i, col) = sum / chol(i, i);
        }
    }
    // Force exact symmetry; the solve leaves eps-level asymmetry.
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = r + 1; c < m; ++c) {
            const double s = 0.5 * (inv(r, c) + inv(c, r));
            inv(r, c) = s;
            inv(c, r) = s;
        }
    return inv;
}

}  // namespace cwfcm
