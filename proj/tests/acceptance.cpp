// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance [path/to/unit_tests]

#include "support.hpp"

#include "usage_synth/baseline.hpp"
#include "usage_synth/cli.hpp"
#include "usage_synth/distribution.hpp"
#include "usage_synth/prompts.hpp"
#include "usage_synth/realism.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

using namespace usage_synth;
using namespace test_support;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects the reasons a criterion failed.
struct Verdict {
    std::vector<std::string> problems;
    std::string note;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            problems.push_back(what);
        }
    }
};

struct Row {
    const char* file;
    double total_h;
    std::optional<std::int64_t> longest_gap_s;
    bool b1_pass;
    CheckStatus b2;
    double overlap_pct;
};

const std::vector<Row> kRows = {
    {"p1_1.csv", 6.7, 7 * 3600 + 33 * 60 + 17, true, CheckStatus::pass, 0},
    {"p1_2.csv", 2.0, 8 * 3600 + 30 * 60, true, CheckStatus::pass, 20},
    {"p2_1.csv", 42.3, 5 * 3600 + 41 * 60, false, CheckStatus::pass, 100},
    {"p2_2.csv", 1.6, std::nullopt, true, CheckStatus::not_assessable, 100},
    {"p3_1.csv", 6.3, 7 * 3600 + 52 * 60, true, CheckStatus::pass, 20},
    {"p3_2.csv", 5.8, 7 * 3600 + 40 * 60, true, CheckStatus::pass, 60},
    {"p4_1.csv", 15.9, 0, true, CheckStatus::fail, 100},
    {"p4_2.csv", 8.9, 0, true, CheckStatus::fail, 100},
};

Verdict ac1() {
    Verdict v;
    int b2_passes = 0;
    for (const auto& row : kRows) {
        const auto d = load_fixture(row.file);
        const auto r = evaluate_realism(d, &seed_fixture());
        const std::string name = row.file;
        v.expect(std::abs(total_usage(d) - row.total_h) <= 0.05, name + " total usage");
        v.expect((r.b1.status == CheckStatus::pass) == row.b1_pass, name + " B1 status");
        v.expect(r.b1.status == (row.b1_pass ? CheckStatus::pass : CheckStatus::fail), name + " B1 assessable");
        v.expect(r.b2.status == row.b2, name + " B2 status");
        v.expect(r.b2.longest_gap_s == row.longest_gap_s, name + " longest gap");
        b2_passes += r.b2.status == CheckStatus::pass;
    }
    v.expect(b2_passes == 5, "B2 pass count");
    v.note = "B2 passes " + std::to_string(b2_passes) + "/8";
    return v;
}

Verdict ac2() {
    Verdict v;
    const auto seed_top = app_stats(seed_fixture()).top_k(5);
    v.expect(app_stats(seed_fixture()).app_count == 33, "seed app count");
    v.expect(seed_top == std::vector<std::string>{"Google Chrome", "Google Maps", "Lichess", "WhatsApp", "Instagram"},
             "seed top-5");
    std::ostringstream got;
    for (const auto& row : kRows) {
        const auto pct = top_k_overlap(load_fixture(row.file), seed_fixture(), 5);
        v.expect(pct == row.overlap_pct, std::string{row.file} + " overlap");
        got << pct << " ";
    }
    v.note = "overlaps " + got.str();
    return v;
}

Verdict ac3() {
    Verdict v;
    std::mt19937_64 rng(20250418);
    std::size_t total_logs = 0;
    for (int round = 0; round < 1000; ++round) {
        // Mostly modest sizes keep the all-pairs oracle affordable; some reach the cap.
        const std::size_t n = round % 50 == 0 ? 1000 : std::uniform_int_distribution<std::size_t>(1, 300)(rng);
        const auto d = random_dataset(rng, n);
        total_logs += n;
        if (session_ids(sessionize(d, 60)) != brute_force_session_ids(d, 60)) {
            v.expect(false, "partition mismatch in round " + std::to_string(round));
        }
    }
    for (std::int64_t gap : {59, 60, 61}) {
        const auto t = at(2025, 4, 18, 8, 0, 0);
        const auto d = dataset_of({make_log("1", t, "A", 10), make_log("2", t + std::chrono::seconds{10 + gap}, "B", 5)});
        v.expect(sessionize(d, 60).size() == (gap < 60 ? 1u : 2u), "boundary gap " + std::to_string(gap));
    }
    v.note = std::to_string(total_logs) + " logs";
    return v;
}

Verdict ac4() {
    Verdict v;
    std::mt19937_64 rng(4242);
    for (int round = 0; round < 200; ++round) {
        const auto a = random_sample(rng, std::uniform_int_distribution<std::size_t>(1, 500)(rng), 5000);
        v.expect(compare_distributions(a, a).ks_stat == 0.0, "self distance");
        std::vector<std::int64_t> shifted(a.size());
        std::transform(a.begin(), a.end(), shifted.begin(), [](auto x) { return x + 5001; });
        v.expect(compare_distributions(a, shifted).ks_stat == 1.0, "separated samples");
    }
    for (int round = 0; round < 500; ++round) {
        const auto a = random_sample(rng, std::uniform_int_distribution<std::size_t>(1, 50)(rng), 300);
        const auto b = random_sample(rng, std::uniform_int_distribution<std::size_t>(1, 50)(rng), 300);
        v.expect(std::abs(compare_distributions(a, b).ks_stat - ks_oracle(a, b)) <= 1e-12, "ECDF oracle");
    }
    for (int round = 0; round < 200; ++round) {
        const auto a = random_sample(rng, std::uniform_int_distribution<std::size_t>(1, 400)(rng), 4000);
        const auto b = random_sample(rng, std::uniform_int_distribution<std::size_t>(1, 400)(rng), 4000);
        v.expect(compare_distributions(a, b).ks_stat == compare_distributions(b, a).ks_stat, "symmetry");
    }
    return v;
}

Verdict ac5() {
    Verdict v;
    const auto profile = profile_seed(seed_fixture());
    std::set<std::string> seed_apps;
    for (const auto& l : seed_fixture().logs) {
        seed_apps.insert(l.app_id);
    }
    std::vector<CivilDay> days;
    for (int i = 0; i < 100; ++i) {
        days.push_back(CivilDay{std::chrono::year{2025} / 6 / 1} + std::chrono::days{i});
    }
    GenConfig cfg;
    cfg.seed_value = 2025;

    auto write_batch = [&](const fs::path& dir) {
        std::vector<std::size_t> hashes;
        for (const auto& d : generate_batch(profile, days, cfg)) {
            const auto path = dir / ("baseline_" + format_date(day_of(d.logs.front().start)) + ".csv");
            write_file_atomic(path, write_dataset(d));
            hashes.push_back(std::hash<std::string>{}(read_file(path)));
        }
        return hashes;
    };

    int b1 = 0;
    int b2 = 0;
    double overlap_sum = 0.0;
    const auto batch = generate_batch(profile, days, cfg);
    for (const auto& d : batch) {
        const auto r = evaluate_realism(d, &seed_fixture());
        b1 += r.b1.status == CheckStatus::pass;
        b2 += r.b2.status == CheckStatus::pass;
        overlap_sum += top_k_overlap(d, seed_fixture(), 5);
        for (const auto& l : d.logs) {
            v.expect(seed_apps.count(l.app_id) == 1, "app outside the seed: " + l.app_id);
        }
    }
    const double mean_overlap = overlap_sum / static_cast<double>(batch.size());
    v.expect(b1 >= 95, "B1 passes");
    v.expect(b2 >= 95, "B2 passes");
    v.expect(mean_overlap >= 80.0, "mean top-5 overlap");

    const auto dir_a = temp_dir("acc_a");
    const auto dir_b = temp_dir("acc_b");
    v.expect(write_batch(dir_a) == write_batch(dir_b), "rerun hashes");
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    std::ostringstream note;
    note << "B1 " << b1 << "/100, B2 " << b2 << "/100, mean top-5 overlap " << std::fixed << std::setprecision(1)
         << mean_overlap << " %";
    v.note = note.str();
    return v;
}

Verdict ac6() {
    Verdict v;
    const auto seed = read_file(golden("seed_snippet.csv"));
    v.expect(render_prompt_file(build_prompt(PromptLabel::P1)) == read_file(golden("p1.txt")), "P1 golden");
    v.expect(render_prompt_file(build_prompt(PromptLabel::P2, seed)) == read_file(golden("p2.txt")), "P2 golden");
    v.expect(render_prompt_file(build_prompt(PromptLabel::P3)) == read_file(golden("p3.txt")), "P3 golden");
    v.expect(render_prompt_file(build_prompt(PromptLabel::P4, seed)) == read_file(golden("p4.txt")), "P4 golden");
    for (auto label : {PromptLabel::P2, PromptLabel::P4}) {
        std::string all;
        for (const auto& m : build_prompt(label, seed).messages) {
            all += m.text;
        }
        std::istringstream rows(seed);
        std::string row;
        while (std::getline(rows, row)) {
            v.expect(all.find(row + "\n") != std::string::npos, std::string{to_string(label)} + " seed row");
        }
    }
    return v;
}

Verdict ac7() {
    Verdict v;
    const auto dir = temp_dir("acc_run");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(std::vector<std::string>{"run", "P1", "--mock", "--attempts", "2", "--mock-reply",
                                                      fixture("mock/prose_summary.txt").string(), "--mock-reply",
                                                      fixture("mock/date_only.txt").string(), "--reference",
                                                      fixture("seed_2025-04-17.csv").string(), "--out-dir",
                                                      dir.string()},
                             out, err);
    v.expect(code == kExitOk, "exit code " + std::to_string(code));
    std::vector<nlohmann::ordered_json> reports;
    for (int i = 1; i <= 2; ++i) {
        const auto path = dir / ("P1_attempt_" + std::to_string(i)) / "report.json";
        if (!fs::exists(path)) {
            v.expect(false, "missing " + path.string());
            continue;
        }
        reports.push_back(nlohmann::ordered_json::parse(read_file(path)));
    }
    if (reports.size() == 2) {
        v.expect(reports[0]["compliance"]["S2"]["status"] == "fail", "prose reply S2");
        v.expect(reports[1]["compliance"]["S1"]["status"] == "fail", "date-only reply S1");
    }
    v.expect(fs::exists(dir / "summary.json"), "summary.json");
    fs::remove_all(dir);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const auto suite_start = Clock::now();
    bool all_ok = true;

    auto report = [&](const char* id, const Verdict& v, double elapsed, std::optional<double> limit_s) {
        const bool in_time = !limit_s || elapsed < *limit_s;
        const bool ok = v.problems.empty() && in_time;
        all_ok = all_ok && ok;
        std::cout << id << " " << (ok ? "PASS" : "FAIL") << "  " << std::fixed << std::setprecision(2) << elapsed
                  << " s";
        if (limit_s) {
            std::cout << " (limit " << std::setprecision(0) << *limit_s << " s)";
        }
        if (!v.note.empty()) {
            std::cout << "  " << v.note;
        }
        for (std::size_t i = 0; i < v.problems.size() && i < 5; ++i) {
            std::cout << "\n    - " << v.problems[i];
        }
        if (v.problems.size() > 5) {
            std::cout << "\n    - ... " << v.problems.size() - 5 << " more";
        }
        std::cout << std::endl;
    };

    auto run = [&](const char* id, const std::function<Verdict()>& fn, std::optional<double> limit_s) {
        const auto t0 = Clock::now();
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v.expect(false, std::string{"exception: "} + e.what());
        }
        report(id, v, seconds_since(t0), limit_s);
    };

    run("AC1", ac1, 5.0);
    run("AC2", ac2, std::nullopt);
    run("AC3", ac3, 10.0);
    run("AC4", ac4, std::nullopt);
    run("AC5", ac5, 30.0);
    run("AC6", ac6, std::nullopt);
    run("AC7", ac7, std::nullopt);

    // Whole suite: this binary plus the unit tests, when their path is given.
    Verdict suite;
    double unit_s = 0.0;
    if (argc > 1) {
        const auto t0 = Clock::now();
        const std::string cmd = std::string{"\""} + argv[1] + "\" > /dev/null 2>&1";
        suite.expect(std::system(cmd.c_str()) == 0, "unit tests failed");
        unit_s = seconds_since(t0);
        std::ostringstream note;
        note << "unit tests " << std::fixed << std::setprecision(2) << unit_s << " s";
        suite.note = note.str();
    } else {
        suite.note = "unit test binary not given; acceptance only";
    }
    report("AC8", suite, seconds_since(suite_start), 60.0);

    return all_ok ? 0 : 1;
}
