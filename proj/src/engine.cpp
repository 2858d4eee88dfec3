#include "cwfcm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cwfcm {

InitKind init_kind_from_name(std::string_view name) {
    if (name == "random") return InitKind::random;
    if (name == "magnitude") return InitKind::magnitude;
    throw std::invalid_argument("unknown init kind: " + std::string(name));
}

std::string_view init_kind_name(InitKind kind) {
    return kind == InitKind::random ? "random" : "magnitude";
}

PartitionMatrix init_random(std::size_t n, int c, std::uint64_t seed) {
    if (c < 2 || static_cast<std::size_t>(c) > n) {
        throw std::invalid_argument("init_random: need 2 <= c <= n");
    }
    Rng rng(seed);
    Matrix mu(n, static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t k = 0; k < mu.cols(); ++k) {
            mu(i, k) = rng.uniform();
            sum += mu(i, k);
        }
        for (std::size_t k = 0; k < mu.cols(); ++k) mu(i, k) /= sum;
    }
    return PartitionMatrix{std::move(mu)};
}

PartitionMatrix init_magnitude(const Dataset& d, int c) {
    const std::size_t n = d.n();
    if (c < 2 || static_cast<std::size_t>(c) > n) {
        throw std::invalid_argument("init_magnitude: need 2 <= c <= n");
    }
    const auto sf = l1_magnitudes(d);
    const auto [lo_it, hi_it] = std::minmax_element(sf.begin(), sf.end());
    const double a = *lo_it, b = *hi_it;
    if (a == b) {
        throw std::invalid_argument("init_magnitude: all points have equal L1 magnitude");
    }

    constexpr double kFloor = 1e-6;
    const double cc = static_cast<double>(c);
    Matrix mu(n, static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < n; ++i) {
        const double f = (sf[i] - a) / (b - a);
        double sum = 0.0;
        for (int k = 0; k < c; ++k) {
            const double center = (static_cast<double>(k) + 0.5) / cc;
            const double tri = 1.0 - std::abs(f - center) * cc;
            const double v = std::max(tri, kFloor);
            mu(i, static_cast<std::size_t>(k)) = v;
            sum += v;
        }
        for (int k = 0; k < c; ++k) mu(i, static_cast<std::size_t>(k)) /= sum;
    }
    return PartitionMatrix{std::move(mu)};
}

Matrix update_centers(const Dataset& d, const PartitionMatrix& p, double fuzziness) {
    const std::size_t n = d.n(), m = d.m(), c = p.clusters();
    if (p.points() != n) throw std::invalid_argument("update_centers: partition rows do not match point count");

    Matrix centers(c, m);
    std::vector<double> mass(c, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < c; ++k) {
            const double um = std::pow(p.mu(i, k), fuzziness);
            mass[k] += um;
            for (std::size_t j = 0; j < m; ++j) centers(k, j) += um * d.points(i, j);
        }
    }
    for (std::size_t k = 0; k < c; ++k) {
        if (mass[k] <= 0.0) {
            throw std::runtime_error("empty fuzzy cluster " + std::to_string(k) +
                                     ": total membership mass is zero");
        }
        for (std::size_t j = 0; j < m; ++j) centers(k, j) /= mass[k];
    }
    return centers;
}

PartitionMatrix update_memberships(const Matrix& distances_sq, double fuzziness) {
    const std::size_t n = distances_sq.rows(), c = distances_sq.cols();
    const double expo = 1.0 / (fuzziness - 1.0);
    Matrix mu(n, c);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t zeros = 0;
        for (std::size_t k = 0; k < c; ++k) {
            if (distances_sq(i, k) < 0.0) {
                throw std::invalid_argument("update_memberships: negative dissimilarity");
            }
            if (distances_sq(i, k) == 0.0) ++zeros;
        }
        if (zeros > 0) {
            // Point coincides with one or more centers: crisp split.
            for (std::size_t k = 0; k < c; ++k) {
                mu(i, k) = distances_sq(i, k) == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
            }
            continue;
        }
        // mu_ik = 1 / sum_l (d_ik / d_il)^(1/(z-1)); the ratio form avoids
        // overflow when dissimilarities are very small or very large.
        for (std::size_t k = 0; k < c; ++k) {
            double denom = 0.0;
            for (std::size_t l = 0; l < c; ++l) {
                denom += std::pow(distances_sq(i, k) / distances_sq(i, l), expo);
            }
            mu(i, k) = 1.0 / denom;
        }
    }
    return PartitionMatrix{std::move(mu)};
}

double objective(const PartitionMatrix& p, const Matrix& distances_sq, double fuzziness) {
    if (p.points() != distances_sq.rows() || p.clusters() != distances_sq.cols()) {
        throw std::invalid_argument("objective: shape mismatch between partition and dissimilarities");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < p.points(); ++i)
        for (std::size_t k = 0; k < p.clusters(); ++k)
            total += std::pow(p.mu(i, k), fuzziness) * distances_sq(i, k);
    return total;
}

namespace {

void check_config(const Dataset& d, const FcmConfig& cfg) {
    if (cfg.clusters < 2) throw std::invalid_argument("fit: need at least 2 clusters");
    if (static_cast<std::size_t>(cfg.clusters) > d.n()) {
        throw std::invalid_argument("fit: more clusters than points");
    }
    if (cfg.fuzziness <= 1.0) throw std::invalid_argument("fit: fuzziness must be > 1");
    if (cfg.epsilon <= 0.0) throw std::invalid_argument("fit: epsilon must be positive");
    if (cfg.max_iter < 1) throw std::invalid_argument("fit: max_iter must be at least 1");
    if (cfg.distance_power != 1 && cfg.distance_power != 2) {
        throw std::invalid_argument("fit: distance_power must be 1 or 2");
    }
}

}  // namespace

RunResult fit(const Dataset& d, const FcmConfig& cfg, const IterationObserver& observer) {
    check_config(d, cfg);
    const auto t0 = std::chrono::steady_clock::now();

    const Dataset data = cfg.normalize ? minmax_normalize(d) : d;
    const std::size_t n = data.n(), m = data.m();
    const std::size_t c = static_cast<std::size_t>(cfg.clusters);

    // Filter-style weighting: computed once from the data being clustered,
    // never re-estimated inside the loop.
    DistanceSpec spec = cfg.distance;
    if (cfg.weight_scheme != WeightScheme::none) {
        spec.weights = feature_weights(data, cfg.weight_scheme).values;
    }
    if (spec.kind == Metric::mahalanobis && !spec.mahalanobis_matrix) {
        spec.mahalanobis_matrix = mahalanobis_matrix_from(data);
    }

    PartitionMatrix p = cfg.init == InitKind::random ? init_random(n, cfg.clusters, cfg.seed)
                                                     : init_magnitude(data, cfg.clusters);

    RunResult result;
    Matrix dissim(n, c);
    double prev = 0.0;
    for (int t = 1; t <= cfg.max_iter; ++t) {
        Matrix centers = update_centers(data, p, cfg.fuzziness);

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < c; ++k) {
                const double dist = distance(spec, data.points.row(i), centers.row(k));
                dissim(i, k) = cfg.distance_power == 2 ? dist * dist : dist;
            }
        }

        const double obj = objective(p, dissim, cfg.fuzziness);
        if (!std::isfinite(obj)) {
            throw std::runtime_error("objective became non-finite at iteration " + std::to_string(t));
        }
        result.objective_trace.push_back(obj);

        p = update_memberships(dissim, cfg.fuzziness);
        result.centers = std::move(centers);
        if (observer) observer(t, p, obj);

        if (t > 1 && std::abs(obj - prev) < cfg.epsilon) break;
        prev = obj;
    }

    const auto t1 = std::chrono::steady_clock::now();
    result.wall_time = std::chrono::duration<double>(t1 - t0).count();
    result.iterations = static_cast<int>(result.objective_trace.size());

    result.crisp_labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < c; ++k) {
            if (p.mu(i, k) > p.mu(i, best)) best = k;
        }
        result.crisp_labels[i] = static_cast<int>(best);
    }
    result.partition = std::move(p);
    return result;
}

}  // namespace cwfcm
