#include "usage_synth/distribution.hpp"

#include <algorithm>
#include <cmath>

namespace usage_synth {

std::optional<std::int64_t> Histogram::high_edge(std::size_t bin) {
    if (bin + 1 < kLowEdges.size()) {
        return kLowEdges[bin + 1];
    }
    return std::nullopt;
}

std::size_t Histogram::bin_of(std::int64_t value) {
    const auto it = std::upper_bound(kLowEdges.begin(), kLowEdges.end(), value);
    return static_cast<std::size_t>(it - kLowEdges.begin()) - 1;
}

Histogram build_histogram(std::span<const std::int64_t> values_s) {
    Histogram h;
    for (auto v : values_s) {
        if (v < 0) {
            throw std::invalid_argument("histogram values must be non-negative");
        }
        ++h.counts[Histogram::bin_of(v)];
        ++h.total;
    }
    return h;
}

DistributionDistance compare_distributions(std::span<const std::int64_t> sample_a,
                                           std::span<const std::int64_t> sample_b) {
    if (sample_a.empty() || sample_b.empty()) {
        throw EmptySampleError("distribution comparison needs two non-empty samples");
    }
    std::vector<std::int64_t> a(sample_a.begin(), sample_a.end());
    std::vector<std::int64_t> b(sample_b.begin(), sample_b.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto n = static_cast<double>(a.size());
    const auto m = static_cast<double>(b.size());

    auto transformed = [](std::int64_t v) { return std::log10(1.0 + static_cast<double>(v)); };

    DistributionDistance out;
    std::size_t i = 0;
    std::size_t j = 0;
    double prev_cdf_gap = 0.0;
    double prev_point = 0.0;
    bool first = true;
    // Walk distinct points of the pooled sample; both ECDFs are constant
    // between consecutive points.
    while (i < a.size() || j < b.size()) {
        std::int64_t v;
        if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
            v = a[i];
        } else {
            v = b[j];
        }
        while (i < a.size() && a[i] == v) {
            ++i;
        }
        while (j < b.size() && b[j] == v) {
            ++j;
        }
        const double point = transformed(v);
        if (!first) {
            out.wasserstein_log10 += prev_cdf_gap * (point - prev_point);
        }
        const double gap = std::fabs(static_cast<double>(i) / n - static_cast<double>(j) / m);
        out.ks_stat = std::max(out.ks_stat, gap);
        prev_cdf_gap = gap;
        prev_point = point;
        first = false;
    }
    return out;
}

}  // namespace usage_synth
