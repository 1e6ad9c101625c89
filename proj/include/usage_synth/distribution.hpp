#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace usage_synth {

// Log-spaced bins over seconds: [0,1) [1,10) [10,100) [100,1000) [1000,3600)
// [3600,inf). For integer input the first bin holds exactly the zeros.
struct Histogram {
    static constexpr std::array<std::int64_t, 6> kLowEdges = {0, 1, 10, 100, 1000, 3600};

    std::vector<std::int64_t> counts = std::vector<std::int64_t>(kLowEdges.size(), 0);
    std::int64_t total = 0;

    // Upper edge of bin i, nullopt for the unbounded last bin.
    static std::optional<std::int64_t> high_edge(std::size_t bin);
    static std::size_t bin_of(std::int64_t value);

    bool operator==(const Histogram&) const = default;
};

// Throws std::invalid_argument on negative values.
Histogram build_histogram(std::span<const std::int64_t> values_s);

struct DistributionDistance {
    double ks_stat = 0.0;            // two-sample Kolmogorov-Smirnov D on raw values
    double wasserstein_log10 = 0.0;  // W1 between samples of log10(1 + value)
};

class EmptySampleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Throws EmptySampleError if either sample is empty.
DistributionDistance compare_distributions(std::span<const std::int64_t> sample_a,
                                           std::span<const std::int64_t> sample_b);

}  // namespace usage_synth
