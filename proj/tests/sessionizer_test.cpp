#include "doctest.h"
#include "support.hpp"

#include "usage_synth/sessionizer.hpp"

using namespace usage_synth;
using namespace test_support;
using std::chrono::seconds;

namespace {

UsageDataset two_logs(std::int64_t gap) {
    const auto t = at(2025, 4, 18, 8, 0, 0);
    return dataset_of({make_log("1", t, "A", 20), make_log("2", t + seconds{20 + gap}, "B", 5)});
}

}  // namespace

TEST_CASE("threshold boundary") {
    CHECK(sessionize(two_logs(59)).size() == 1);
    CHECK(sessionize(two_logs(60)).size() == 2);
    CHECK(sessionize(two_logs(61)).size() == 2);
    CHECK(sessionize(two_logs(0)).size() == 1);
    CHECK(sessionize(two_logs(119), 120).size() == 1);
}

TEST_CASE("single log is its own session") {
    const auto d = dataset_of({make_log("1", at(2025, 4, 18, 8, 0, 0), "A", 42)});
    const auto s = sessionize(d);
    REQUIRE(s.size() == 1);
    CHECK(s[0].start == d.logs[0].start);
    CHECK(s[0].end == d.logs[0].end());
    CHECK(s[0].span_s() == 42);
    CHECK(s[0].active_s() == 42);
    CHECK(session_gaps(s).gaps_s.empty());
    CHECK(log_level_units(d).gaps.gaps_s.empty());
}

TEST_CASE("session end is the latest member end") {
    const auto t = at(2025, 4, 18, 8, 0, 0);
    // Second log sits entirely inside the first.
    const auto d = dataset_of({make_log("1", t, "A", 600), make_log("2", t + seconds{10}, "B", 5),
                               make_log("3", t + seconds{630}, "C", 10)});
    const auto s = sessionize(d);
    REQUIRE(s.size() == 1);
    CHECK(s[0].end == t + seconds{640});
    CHECK(s[0].active_s() == 615);
}

TEST_CASE("log-level gaps") {
    const auto d = dataset_of({make_log("1", at(2025, 4, 18, 8, 0, 0), "A", 20),
                               make_log("2", at(2025, 4, 18, 8, 5, 0), "B", 400),
                               make_log("3", at(2025, 4, 18, 8, 10, 0), "C", 1)});
    const auto u = log_level_units(d);
    CHECK(u.durations_s == std::vector<std::int64_t>{20, 400, 1});
    CHECK(u.gaps.gaps_s == std::vector<std::int64_t>{280, 0});
    CHECK(u.gaps.clamped == 1);
}

TEST_CASE("session gaps between sessions") {
    const auto d = dataset_of({make_log("1", at(2025, 4, 18, 8, 0, 0), "A", 3600),
                               make_log("2", at(2025, 4, 18, 10, 0, 0), "B", 60)});
    const auto s = sessionize(d);
    CHECK(session_gaps(s).gaps_s == std::vector<std::int64_t>{3600});
    CHECK(session_durations(s) == std::vector<std::int64_t>{3600, 60});
}

TEST_CASE("date-only data cannot be sessionized") {
    const auto d = parse_dataset("id,timestamp,app,duration\n1,2025-04-18,A,20\n2,2025-04-18,B,30\n");
    CHECK_THROWS_AS(sessionize(d), SessionizeError);
    CHECK_THROWS_AS(log_level_units(d), SessionizeError);
}

TEST_CASE("property: sessions partition the logs contiguously and respect the threshold") {
    std::mt19937_64 rng(201);
    for (int round = 0; round < 300; ++round) {
        const auto d = random_dataset(rng, std::uniform_int_distribution<std::size_t>(1, 200)(rng));
        const std::int64_t threshold = std::uniform_int_distribution<std::int64_t>(0, 300)(rng);
        const auto s = sessionize(d, threshold);

        std::vector<UsageLog> flat;
        for (const auto& session : s) {
            REQUIRE_FALSE(session.logs.empty());
            CHECK(session.start == session.logs.front().start);
            auto end = session.logs.front().end();
            for (const auto& l : session.logs) {
                end = std::max(end, l.end());
            }
            CHECK(session.end == end);
            flat.insert(flat.end(), session.logs.begin(), session.logs.end());
        }
        CHECK(flat == d.logs);
        for (const auto g : session_gaps(s).gaps_s) {
            CHECK(g >= threshold);
        }
        CHECK(session_gaps(s).gaps_s.size() + 1 == s.size());
    }
}

TEST_CASE("property: raising the threshold never adds sessions") {
    std::mt19937_64 rng(202);
    for (int round = 0; round < 200; ++round) {
        const auto d = random_dataset(rng, 100);
        std::size_t previous = SIZE_MAX;
        for (std::int64_t threshold : {0, 1, 30, 59, 60, 61, 120, 600, 3600}) {
            const auto n = sessionize(d, threshold).size();
            CHECK(n <= previous);
            previous = n;
        }
        CHECK(sessionize(d, kUnboundedGap).size() == 1);
    }
}

TEST_CASE("threshold 0 with strictly positive gaps gives one session per log") {
    const auto t = at(2025, 4, 18, 8, 0, 0);
    std::vector<UsageLog> logs;
    for (int i = 0; i < 20; ++i) {
        logs.push_back(make_log(std::to_string(i + 1), t + seconds{i * 100}, "A", 50));
    }
    CHECK(sessionize(dataset_of(logs), 0).size() == 20);
}

TEST_CASE("property: agrees with the all-pairs chain oracle") {
    std::mt19937_64 rng(203);
    for (int round = 0; round < 200; ++round) {
        const auto d = random_dataset(rng, std::uniform_int_distribution<std::size_t>(1, 120)(rng));
        CHECK(session_ids(sessionize(d, 60)) == brute_force_session_ids(d, 60));
    }
}
