#pragma once

#include "usage_synth/io.hpp"
#include "usage_synth/model.hpp"
#include "usage_synth/sessionizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace test_support {

using namespace usage_synth;

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path{USAGE_SYNTH_TEST_DIR} / "fixtures" / name;
}

inline std::filesystem::path golden(const std::string& name) {
    return std::filesystem::path{USAGE_SYNTH_TEST_DIR} / "golden" / name;
}

inline UsageDataset load_fixture(const std::string& name) {
    Provenance p;
    p.source = name;
    return parse_dataset(read_file(fixture(name)), p);
}

inline const UsageDataset& seed_fixture() {
    static const UsageDataset seed = load_fixture("seed_2025-04-17.csv");
    return seed;
}

inline Timestamp at(int y, int mo, int d, int h, int mi, int s) {
    using namespace std::chrono;
    return local_days{year{y} / mo / d} + hours{h} + minutes{mi} + seconds{s};
}

inline UsageLog make_log(std::string id, Timestamp start, std::string app, std::int64_t duration) {
    UsageLog l;
    l.id = std::move(id);
    l.start = start;
    l.app_id = std::move(app);
    l.duration_s = duration;
    return l;
}

inline UsageDataset dataset_of(std::vector<UsageLog> logs) {
    UsageDataset d;
    d.logs = std::move(logs);
    return d;
}

// Fresh temp directory per call, removed by the caller if needed.
inline std::filesystem::path temp_dir(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("usage_synth_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// ---- generators

inline const std::vector<std::string>& app_pool() {
    static const std::vector<std::string> pool = {"WhatsApp", "Google Chrome", "Instagram", "Lichess",
                                                  "Google Maps", "YouTube", "Spotify", "Gmail",
                                                  "Camera", "Notes, Personal", "Télégram", "Ünïcode \"app\""};
    return pool;
}

// Sorted, full-timestamp dataset. Gaps between consecutive logs are drawn
// around the 60 s boundary, with occasional overlaps and long pauses.
inline UsageDataset random_dataset(std::mt19937_64& rng, std::size_t n, bool allow_overlap = true) {
    std::uniform_int_distribution<int> kind(0, 9);
    std::uniform_int_distribution<std::int64_t> near(55, 65);
    std::uniform_int_distribution<std::int64_t> small(0, 59);
    std::uniform_int_distribution<std::int64_t> big(61, 20000);
    std::uniform_int_distribution<std::int64_t> dur(0, 900);
    std::uniform_int_distribution<std::size_t> app(0, app_pool().size() - 1);

    std::vector<UsageLog> logs;
    auto t = at(2025, 4, 18, 0, 0, 0);
    std::int64_t prev_dur = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            std::int64_t gap = 0;
            switch (kind(rng)) {
                case 0: case 1: case 2: gap = near(rng); break;
                case 3: case 4: gap = small(rng); break;
                case 5: gap = 60; break;
                case 6: gap = big(rng); break;
                case 7: gap = allow_overlap ? -std::uniform_int_distribution<std::int64_t>(0, prev_dur)(rng) : 0; break;
                default: gap = std::uniform_int_distribution<std::int64_t>(0, 300)(rng); break;
            }
            t += std::chrono::seconds{prev_dur + gap};
        }
        prev_dur = dur(rng);
        logs.push_back(make_log(std::to_string(i + 1), t, app_pool()[app(rng)], prev_dur));
    }
    return dataset_of(std::move(logs));
}

inline std::vector<std::int64_t> random_sample(std::mt19937_64& rng, std::size_t n, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> v(0, hi);
    std::vector<std::int64_t> out(n);
    for (auto& x : out) {
        x = v(rng);
    }
    return out;
}

// ---- oracles

// Partition by chain connectivity: logs i < j are linked when j starts less
// than the threshold after i ends. Union-find over all pairs.
inline std::vector<std::size_t> brute_force_session_ids(const UsageDataset& d, std::int64_t threshold) {
    const auto n = d.logs.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto gap = std::max<std::int64_t>(0, (d.logs[j].start - d.logs[i].end()).count());
            if (gap < threshold) {
                parent[find(j)] = find(i);
            }
        }
    }
    // Relabel components by first appearance.
    std::vector<std::size_t> label(n, SIZE_MAX), out(n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = find(i);
        if (label[r] == SIZE_MAX) {
            label[r] = next++;
        }
        out[i] = label[r];
    }
    return out;
}

inline std::vector<std::size_t> session_ids(const std::vector<Session>& sessions) {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < sessions.size(); ++s) {
        out.insert(out.end(), sessions[s].logs.size(), s);
    }
    return out;
}

// max over every sample point of |F_a(x) - F_b(x)|, counting directly.
inline double ks_oracle(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    auto ecdf = [](const std::vector<std::int64_t>& s, std::int64_t x) {
        return static_cast<double>(std::count_if(s.begin(), s.end(), [x](std::int64_t v) { return v <= x; })) /
               static_cast<double>(s.size());
    };
    double best = 0.0;
    for (const auto* s : {&a, &b}) {
        for (const auto x : *s) {
            best = std::max(best, std::abs(ecdf(a, x) - ecdf(b, x)));
        }
    }
    return best;
}

// For equal sizes W1 is the mean distance between matched order statistics.
inline double wasserstein_equal_size_oracle(std::vector<std::int64_t> a, std::vector<std::int64_t> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::abs(std::log10(1.0 + static_cast<double>(a[i])) - std::log10(1.0 + static_cast<double>(b[i])));
    }
    return sum / static_cast<double>(a.size());
}

}  // namespace test_support
