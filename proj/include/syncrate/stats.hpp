#ifndef SYNCRATE_STATS_HPP
#define SYNCRATE_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace syncrate {

struct SampleStats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n-1)
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

inline SampleStats summarize(std::span<const double> values) {
    SampleStats s;
    s.n = values.size();
    if (s.n == 0) return s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

// Standard error of the difference of two independent sample means.
inline double pooled_standard_error(const SampleStats& a, const SampleStats& b) {
    if (a.n == 0 || b.n == 0) throw std::invalid_argument("pooled_standard_error: empty sample");
    const double va = a.stddev * a.stddev / static_cast<double>(a.n);
    const double vb = b.stddev * b.stddev / static_cast<double>(b.n);
    return std::sqrt(va + vb);
}

// Ranks with ties resolved by average rank.
inline std::vector<double> fractional_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

inline double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman_rho: need two equally sized samples");
    const auto rx = fractional_ranks(x);
    const auto ry = fractional_ranks(y);
    // Pearson correlation of the ranks (exact under ties as well).
    const auto sx = summarize(rx);
    const auto sy = summarize(ry);
    double cov = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i)
        cov += (rx[i] - sx.mean) * (ry[i] - sy.mean);
    const double denom = sx.stddev * sy.stddev * static_cast<double>(rx.size() - 1);
    if (denom == 0.0) return 0.0;
    return cov / denom;
}

}  // namespace syncrate

#endif
