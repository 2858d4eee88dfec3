#include "cwfcm/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cwfcm {

WeightScheme weight_scheme_from_name(std::string_view name) {
    if (name == "none") return WeightScheme::none;
    if (name == "vmr") return WeightScheme::vmr;
    if (name == "entropy") return WeightScheme::entropy;
    if (name == "variance") return WeightScheme::variance;
    if (name == "stddev") return WeightScheme::stddev;
    if (name == "mean") return WeightScheme::mean;
    throw std::invalid_argument("unknown weight scheme: " + std::string(name));
}

std::string_view weight_scheme_name(WeightScheme scheme) {
    switch (scheme) {
        case WeightScheme::none: return "none";
        case WeightScheme::vmr: return "vmr";
        case WeightScheme::entropy: return "entropy";
        case WeightScheme::variance: return "variance";
        case WeightScheme::stddev: return "stddev";
        case WeightScheme::mean: return "mean";
    }
    return "?";
}

namespace {

struct FeatureMoments {
    std::vector<double> mean;
    std::vector<double> variance;  // n-1 denominator
};

FeatureMoments moments(const Dataset& d) {
    const std::size_t n = d.n(), m = d.m();
    FeatureMoments fm{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) fm.mean[j] += d.points(i, j);
    for (std::size_t j = 0; j < m; ++j) fm.mean[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double dev = d.points(i, j) - fm.mean[j];
            fm.variance[j] += dev * dev;
        }
    for (std::size_t j = 0; j < m; ++j) fm.variance[j] /= static_cast<double>(n - 1);
    return fm;
}

// Shannon entropy of the feature's 10-bin equal-width histogram (natural
// log). A constant feature occupies one bin: entropy 0.
std::vector<double> bin_entropies(const Dataset& d) {
    constexpr int kBins = 10;
    const std::size_t n = d.n(), m = d.m();
    std::vector<double> out(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double lo = d.points(0, j), hi = lo;
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, d.points(i, j));
            hi = std::max(hi, d.points(i, j));
        }
        if (hi <= lo) continue;
        int counts[kBins] = {};
        for (std::size_t i = 0; i < n; ++i) {
            int b = static_cast<int>((d.points(i, j) - lo) / (hi - lo) * kBins);
            counts[std::min(b, kBins - 1)]++;
        }
        double h = 0.0;
        for (int c : counts) {
            if (c > 0) {
                const double p = static_cast<double>(c) / static_cast<double>(n);
                h -= p * std::log(p);
            }
        }
        out[j] = h;
    }
    return out;
}

}  // namespace

std::vector<double> vmr(const Dataset& d) {
    const auto fm = moments(d);
    std::vector<double> out(d.m());
    for (std::size_t j = 0; j < d.m(); ++j) {
        if (fm.mean[j] == 0.0) {
            throw std::domain_error("vmr undefined: feature " + std::to_string(j) + " has zero mean");
        }
        out[j] = fm.variance[j] / fm.mean[j];
    }
    return out;
}

WeightVector fuzzify(const std::vector<double>& stats) {
    if (stats.empty()) throw std::invalid_argument("fuzzify: empty statistic vector");
    for (double s : stats) {
        if (!std::isfinite(s)) throw std::invalid_argument("fuzzify: non-finite statistic");
    }
    const auto [lo_it, hi_it] = std::minmax_element(stats.begin(), stats.end());
    const double a = *lo_it, b = *hi_it;

    WeightVector w;
    w.raw_stats = stats;
    w.values.resize(stats.size());
    if (a == b) {
        // min-max undefined; all ones preserves unweighted behavior
        std::fill(w.values.begin(), w.values.end(), 1.0);
        return w;
    }
    for (std::size_t j = 0; j < stats.size(); ++j) {
        w.values[j] = (stats[j] - a) / (b - a);
    }
    return w;
}

WeightVector feature_weights(const Dataset& d, WeightScheme scheme) {
    if (scheme == WeightScheme::none) {
        WeightVector w;
        w.values.assign(d.m(), 1.0);
        w.raw_stats.assign(d.m(), 1.0);
        return w;
    }

    std::vector<double> stats;
    switch (scheme) {
        case WeightScheme::vmr:
            stats = vmr(d);
            break;
        case WeightScheme::entropy:
            stats = bin_entropies(d);
            break;
        case WeightScheme::variance:
            stats = moments(d).variance;
            break;
        case WeightScheme::stddev: {
            stats = moments(d).variance;
            for (double& s : stats) s = std::sqrt(s);
            break;
        }
        case WeightScheme::mean: {
            stats = moments(d).mean;
            for (double& s : stats) s = std::abs(s);
            break;
        }
        case WeightScheme::none:
            break;  // handled above
    }
    return fuzzify(stats);
}

std::vector<double> l1_magnitudes(const Dataset& d) {
    std::vector<double> out(d.n(), 0.0);
    for (std::size_t i = 0; i < d.n(); ++i)
        for (std::size_t j = 0; j < d.m(); ++j) out[i] += std::abs(d.points(i, j));
    return out;
}

}  // namespace cwfcm
