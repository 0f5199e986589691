#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bitsurf::stats {

// Linear-interpolation quantile over an already sorted sample (the "type 7"
// definition used by R and NumPy).
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

template <typename T>
std::vector<double> sorted_copy(std::span<const T> values) {
    std::vector<double> out(values.begin(), values.end());
    std::sort(out.begin(), out.end());
    return out;
}

template <typename T>
double mean(std::span<const T> values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& v : values) sum += static_cast<double>(v);
    return sum / static_cast<double>(values.size());
}

/// Population variance.
template <typename T>
double variance(std::span<const T> values) {
    if (values.empty()) return 0.0;
    const double m = mean(values);
    double acc = 0.0;
    for (const auto& v : values) {
        const double d = static_cast<double>(v) - m;
        acc += d * d;
    }
    return acc / static_cast<double>(values.size());
}

/// Fraction of samples <= threshold.
template <typename T>
double fraction_at_most(std::span<const T> values, double threshold) {
    if (values.empty()) return 0.0;
    std::size_t n = 0;
    for (const auto& v : values) n += static_cast<double>(v) <= threshold ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(values.size());
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman needs paired samples");
    auto ranks = [](std::span<const double> v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double mx = mean(std::span<const double>(rx));
    const double my = mean(std::span<const double>(ry));
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace bitsurf::stats
