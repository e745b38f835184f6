// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "skt/common/errors.hpp"
#include "skt/harness/harness.hpp"

using namespace skt;
using namespace skt::harness;

namespace {

// The default training recipe (which reliably clears the base-accuracy
// gate) with smaller eval sets and a short adaptation phase.
ForgettingBenchmark quick_bench() {
    ForgettingBenchmark bench;
    bench.g_eval = 96;
    bench.e_eval = 96;
    bench.adapt_epochs = 3;
    return bench;
}

const MethodRow& find_row(const ForgettingReport& report, std::string_view method,
                          uint64_t seed) {
    for (const auto& r : report.rows)
        if (r.method == method && r.seed == seed) return r;
    REQUIRE(false);
    return report.rows.front();  // unreachable
}

}  // namespace

TEST_CASE("method names round trip") {
    const auto methods = all_methods();
    CHECK(methods.size() == 6);
    for (Method m : methods) CHECK(method_from_string(to_string(m)) == m);
    CHECK(method_from_string("sparse_apriori") == Method::SparseApriori);
    CHECK_THROWS_AS(method_from_string("dpo"), DomainError);
}

TEST_CASE("the substitution task is a seeded transposition") {
    std::set<std::vector<int>> distinct;
    for (uint64_t seed = 1; seed <= 12; ++seed) {
        const std::vector<int> perm = substitution_permutation(seed);
        REQUIRE(perm.size() == kETokens);

        // A permutation of 0..7.
        std::vector<int> sorted = perm;
        std::sort(sorted.begin(), sorted.end());
        for (size_t t = 0; t < kETokens; ++t) CHECK(sorted[t] == static_cast<int>(t));

        // Exactly two tokens trade places.
        size_t moved = 0;
        for (size_t t = 0; t < kETokens; ++t) moved += perm[t] != static_cast<int>(t);
        CHECK(moved == 2);

        CHECK(substitution_permutation(seed) == perm);
        distinct.insert(perm);
    }
    CHECK(distinct.size() >= 3);  // the seed actually matters
}

TEST_CASE("task G samples carry the parity label on the first dims only") {
    ForgettingBenchmark bench;
    const Dataset data = make_task_g(bench, 200, 42);
    REQUIRE(data.size() == 200);
    for (size_t i = 0; i < data.size(); ++i) {
        REQUIRE(data.xs[i].size() == kInputDim);
        int parity = 0;
        for (size_t d = 0; d < kGDims; ++d) {
            const int bit = data.xs[i][d] > 0.5f ? 1 : 0;
            parity ^= bit;
            // Noise keeps each dim near its bit.
            CHECK(std::abs(data.xs[i][d] - bit) <= bench.noise + 1e-6);
        }
        CHECK(data.ys[i] == parity);
        // The token region is untouched by task G.
        for (size_t d = kGDims; d < kInputDim; ++d) CHECK(data.xs[i][d] == 0.0f);
        CHECK(data.masks[i] == 1);
    }

    // Deterministic per seed, different across seeds.
    CHECK(make_task_g(bench, 16, 42).xs == make_task_g(bench, 16, 42).xs);
    CHECK(make_task_g(bench, 16, 42).xs != make_task_g(bench, 16, 43).xs);
}

TEST_CASE("task E samples substitute the argmax token and bleed noise") {
    ForgettingBenchmark bench;
    const uint64_t seed = 9;
    const std::vector<int> perm = substitution_permutation(seed);
    const Dataset data = make_task_e(bench, 300, seed);
    REQUIRE(data.size() == 300);

    bool parity_dims_touched = false;
    for (size_t i = 0; i < data.size(); ++i) {
        const auto& x = data.xs[i];
        const auto token_begin = x.begin() + kGDims;
        const size_t token = static_cast<size_t>(
            std::max_element(token_begin, x.end()) - token_begin);
        CHECK(data.ys[i] == perm[token]);
        for (size_t d = 0; d < kGDims; ++d) {
            CHECK(std::abs(x[d]) <= bench.e_cross_noise + 1e-6);
            parity_dims_touched |= x[d] != 0.0f;
        }
    }
    // The default benchmark bleeds noise onto the parity dims.
    CHECK(parity_dims_touched);

    // With the bleed turned off the parity dims stay exactly zero.
    ForgettingBenchmark clean = bench;
    clean.e_cross_noise = 0.0;
    const Dataset quiet = make_task_e(clean, 50, seed);
    for (const auto& x : quiet.xs)
        for (size_t d = 0; d < kGDims; ++d) CHECK(x[d] == 0.0f);
}

TEST_CASE("accuracy evaluation") {
    ModelSpec spec;
    spec.layer_sizes = {kInputDim, 4, kVocab};
    NamedParamSet zeros = init_model(spec);
    for (size_t e = 0; e < zeros.size(); ++e)
        std::fill(zeros.entry(e).values.begin(), zeros.entry(e).values.end(), 0.0f);

    // All-zero weights produce uniform logits; argmax ties resolve to class
    // zero, so accuracy equals the share of zero labels.
    Dataset data;
    data.append(std::vector<float>(kInputDim, 0.5f), 0, 1);
    data.append(std::vector<float>(kInputDim, -0.25f), 0, 1);
    data.append(std::vector<float>(kInputDim, 1.0f), 3, 1);
    data.append(std::vector<float>(kInputDim, 0.0f), 7, 1);
    CHECK(evaluate_accuracy(spec, zeros, data) == doctest::Approx(50.0));

    CHECK_THROWS_AS(evaluate_accuracy(spec, zeros, Dataset{}), DomainError);
}

TEST_CASE("report means") {
    ForgettingReport report;
    report.rows.push_back({"sft", 1, 80.0, 90.0, 10});
    report.rows.push_back({"sft", 2, 60.0, 70.0, 12});
    report.rows.push_back({"selekt", 1, 95.0, 88.0, 3});
    CHECK(report.mean_g("sft") == doctest::Approx(70.0));
    CHECK(report.mean_e("sft") == doctest::Approx(80.0));
    CHECK(report.mean_g("selekt") == doctest::Approx(95.0));
    CHECK_THROWS_AS(report.mean_g("lora"), DomainError);
    CHECK_THROWS_AS(report.mean_e("lora"), DomainError);
}

TEST_CASE("paper fixtures are frozen") {
    const auto& rows = paper_fixture_rows();
    REQUIRE(rows.size() == 9);

    auto expect = [&rows](size_t i, const char* dim, const char* setting, double h,
                          double c, double a) {
        CHECK(rows[i].dimension == dim);
        CHECK(rows[i].setting == setting);
        CHECK(rows[i].humanevalfix == doctest::Approx(h));
        CHECK(rows[i].canitedit == doctest::Approx(c));
        CHECK(rows[i].aider == doctest::Approx(a));
    };
    expect(0, "alpha", "0.05", 81.1, 50.5, 65.7);
    expect(1, "alpha", "0.2", 76.8, 45.7, 53.4);
    expect(2, "alpha", "0.5", 81.7, 43.3, 54.9);
    expect(3, "period", "0.1epoch", 80.5, 37.1, 51.1);
    expect(4, "period", "0.5epoch", 83.5, 50.4, 59.4);
    expect(5, "period", "1epoch", 81.1, 50.5, 65.7);
    expect(6, "period", "at-end", 84.2, 50.0, 53.2);
    expect(7, "base-mode", "update", 79.5, 48.0, 55.6);
    expect(8, "base-mode", "fix", 81.1, 50.5, 65.7);
}

TEST_CASE("ablation reports render and round trip") {
    AblationReport report;
    report.rows.push_back({"selekt", 0.05, "1epoch", 1, 98.25, 97.5, 123});
    report.rows.push_back({"sft", 1.0, "at-end", 2, 72.75, 94.25, 4096});

    const std::string json = render_report(report, ReportFormat::Json);
    const AblationReport back = ablation_report_from_json(json);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0].method == "selekt");
    CHECK(back.rows[0].alpha == 0.05);
    CHECK(back.rows[0].period == "1epoch");
    CHECK(back.rows[0].seed == 1);
    CHECK(back.rows[0].g_retention == 98.25);
    CHECK(back.rows[0].e_accuracy == 97.5);
    CHECK(back.rows[0].l0_to_base == 123);
    CHECK(back.rows[1].method == "sft");
    CHECK(back.rows[1].l0_to_base == 4096);

    const std::string md = render_report(report, ReportFormat::Markdown);
    CHECK(md.find("| method | alpha | period | seed |") != std::string::npos);
    CHECK(md.find("| selekt | 0.05 | 1epoch | 1 | 98.25 | 97.50 | 123 |") !=
          std::string::npos);
    // The paper-scale table rides along, clearly labeled as context.
    CHECK(md.find("Paper-scale reference") != std::string::npos);
    CHECK(md.find("not desk-scale targets") != std::string::npos);
    CHECK(md.find("| 0.05 | 81.1 | 50.5 | 65.7 |") != std::string::npos);
    CHECK(md.find("| at-end | 84.2 | 50.0 | 53.2 |") != std::string::npos);

    CHECK_THROWS_AS(ablation_report_from_json("{"), ParseError);
    CHECK_THROWS_AS(ablation_report_from_json("{\"norows\": 1}"), ParseError);

    CHECK(report_format_from_string("md") == ReportFormat::Markdown);
    CHECK(report_format_from_string("markdown") == ReportFormat::Markdown);
    CHECK(report_format_from_string("markdown-table") == ReportFormat::Markdown);
    CHECK(report_format_from_string("json") == ReportFormat::Json);
    CHECK_THROWS_AS(report_format_from_string("csv"), DomainError);
}

TEST_CASE("forgetting reports render and round trip") {
    ForgettingReport report;
    report.bases.push_back({1, 99.5, 97.25});
    report.bases.push_back({2, 98.0, 96.5});
    report.rows.push_back({"sft", 1, 70.5, 95.0, 800});
    report.rows.push_back({"sft", 2, 74.0, 93.5, 812});
    report.rows.push_back({"selekt", 1, 98.5, 96.0, 120});

    const std::string json = render_forgetting(report, ReportFormat::Json);
    const ForgettingReport back = forgetting_report_from_json(json);
    REQUIRE(back.bases.size() == 2);
    REQUIRE(back.rows.size() == 3);
    CHECK(back.bases[0].seed == 1);
    CHECK(back.bases[0].g_accuracy == 99.5);
    CHECK(back.bases[1].e_accuracy == 96.5);
    CHECK(back.rows[2].method == "selekt");
    CHECK(back.rows[2].g_retention == 98.5);
    CHECK(back.mean_g("sft") == doctest::Approx(72.25));

    const std::string md = render_forgetting(report, ReportFormat::Markdown);
    CHECK(md.find("| seed | base task-G | base task-E |") != std::string::npos);
    CHECK(md.find("| 1 | 99.50 | 97.25 |") != std::string::npos);
    CHECK(md.find("| sft | 1 | 70.50 | 95.00 | 800 |") != std::string::npos);
    // Per-method means are summarized.
    CHECK(md.find("| sft | 72.25 | 94.25 |") != std::string::npos);
    CHECK(md.find("| selekt | 98.50 | 96.00 |") != std::string::npos);

    CHECK_THROWS_AS(forgetting_report_from_json("nope"), ParseError);
}

TEST_CASE("forgetting run wires every method through shared bases") {
    ForgettingBenchmark bench = quick_bench();
    bench.alpha = 1.0;  // full budget: the projection keeps everything

    const std::vector<uint64_t> seeds = {3};
    const ForgettingReport report =
        run_forgetting(bench, {Method::Sft, Method::Selekt, Method::Posthoc}, seeds);

    REQUIRE(report.bases.size() == 1);
    CHECK(report.bases[0].seed == 3);
    CHECK(report.bases[0].g_accuracy >= bench.min_base_accuracy);

    // Row order: methods within seed, in request order.
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].method == "sft");
    CHECK(report.rows[1].method == "selekt");
    CHECK(report.rows[2].method == "posthoc");

    // At alpha = 1 every projection is the identity, so all three methods
    // collapse onto plain dense training: same batches, same result.
    const MethodRow& sft = find_row(report, "sft", 3);
    const MethodRow& selekt = find_row(report, "selekt", 3);
    const MethodRow& posthoc = find_row(report, "posthoc", 3);
    CHECK(selekt.g_retention == sft.g_retention);
    CHECK(selekt.e_accuracy == sft.e_accuracy);
    CHECK(selekt.l0_to_base == sft.l0_to_base);
    CHECK(posthoc.g_retention == sft.g_retention);
    CHECK(posthoc.l0_to_base == sft.l0_to_base);
    CHECK(sft.l0_to_base > 0);

    for (const auto& r : report.rows) {
        CHECK(r.g_retention >= 0.0);
        CHECK(r.g_retention <= 100.0);
        CHECK(r.e_accuracy >= 0.0);
        CHECK(r.e_accuracy <= 100.0);
    }
}

TEST_CASE("zero budget pins every projected method to the base") {
    ForgettingBenchmark bench = quick_bench();
    bench.alpha = 0.0;

    const ForgettingReport report = run_forgetting(
        bench, {Method::Selekt, Method::Posthoc, Method::SparseApriori}, {5});
    REQUIRE(report.rows.size() == 3);
    for (const auto& r : report.rows) {
        CAPTURE(r.method);
        CHECK(r.l0_to_base == 0);
        // Untouched parameters score exactly what the base scored.
        CHECK(r.g_retention == report.bases[0].g_accuracy);
        CHECK(r.e_accuracy == report.bases[0].e_accuracy);
    }
}

TEST_CASE("forgetting run validates its inputs") {
    const ForgettingBenchmark bench = quick_bench();
    CHECK_THROWS_AS(run_forgetting(bench, {}, {1}), DomainError);
    CHECK_THROWS_AS(run_forgetting(bench, {Method::Sft}, {}), DomainError);

    // An undertrained base fails the accuracy gate loudly.
    ForgettingBenchmark weak = quick_bench();
    weak.base_epochs = 1;
    CHECK_THROWS_AS(run_forgetting(weak, {Method::Sft}, {1}), DomainError);
}

TEST_CASE("ablation grid geometry and validation") {
    AblationGrid grid;  // defaults
    CHECK(grid.cells() == 1 * 3 * 4 * 3);
    CHECK_NOTHROW(grid.validate());

    AblationGrid bad = grid;
    bad.methods.clear();
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = grid;
    bad.alphas.clear();
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = grid;
    bad.periods.clear();
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = grid;
    bad.seeds.clear();
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = grid;
    bad.workers = 0;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = grid;
    bad.alphas = {0.05, 1.5};
    CHECK_THROWS_AS(run_ablation(quick_bench(), bad), DomainError);
}

TEST_CASE("ablation rows come back in grid order regardless of workers") {
    const ForgettingBenchmark bench = quick_bench();

    AblationGrid grid;
    grid.methods = {Method::Selekt};
    grid.alphas = {0.0, 1.0};
    grid.periods = {Periodicity::epoch_fraction(1.0), Periodicity::at_end()};
    grid.seeds = {7};
    grid.workers = 3;

    const AblationReport report = run_ablation(bench, grid);
    REQUIRE(report.rows.size() == grid.cells());

    // methods > alphas > periods > seeds, innermost last.
    CHECK(report.rows[0].alpha == 0.0);
    CHECK(report.rows[0].period == "1epoch");
    CHECK(report.rows[1].alpha == 0.0);
    CHECK(report.rows[1].period == "at-end");
    CHECK(report.rows[2].alpha == 1.0);
    CHECK(report.rows[2].period == "1epoch");
    CHECK(report.rows[3].alpha == 1.0);
    CHECK(report.rows[3].period == "at-end");
    for (const auto& r : report.rows) {
        CHECK(r.method == "selekt");
        CHECK(r.seed == 7);
    }

    // Zero budget rows never leave the base.
    CHECK(report.rows[0].l0_to_base == 0);
    CHECK(report.rows[1].l0_to_base == 0);
    CHECK(report.rows[2].l0_to_base > 0);

    // Scheduling does not change results: a single-worker run matches.
    AblationGrid serial = grid;
    serial.workers = 1;
    const AblationReport again = run_ablation(bench, serial);
    REQUIRE(again.rows.size() == report.rows.size());
    for (size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(again.rows[i].g_retention == report.rows[i].g_retention);
        CHECK(again.rows[i].e_accuracy == report.rows[i].e_accuracy);
        CHECK(again.rows[i].l0_to_base == report.rows[i].l0_to_base);
    }
}
