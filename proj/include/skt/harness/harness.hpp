// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "skt/baselines/baselines.hpp"
#include "skt/selekt/selekt.hpp"

namespace skt::harness {

enum class Method : uint8_t { Sft, Selekt, Lora, SparseApriori, Ties, Posthoc };

Method method_from_string(std::string_view text);
std::string_view to_string(Method m);
std::vector<Method> all_methods();

// Synthetic adapt-vs-retain benchmark. Task G (the base skill) is parity
// classification over six noisy binary dims; task E (the edit skill) is a
// seeded token-substitution map over an eight-token one-hot region. The two
// tasks occupy disjoint input dims of a 14-dim input, so interference happens
// only through shared weights.
inline constexpr size_t kGDims = 6;
inline constexpr size_t kETokens = 8;
inline constexpr size_t kInputDim = kGDims + kETokens;
inline constexpr size_t kVocab = kETokens;

struct ForgettingBenchmark {
    size_t g_train = 512;
    size_t g_eval = 256;
    size_t e_train = 256;
    size_t e_eval = 256;
    size_t hidden = 96;
    double noise = 0.1;

    size_t batch_size = 8;
    size_t base_epochs = 120;
    double base_lr = 1e-2;
    double min_base_accuracy = 95.0;  // percent; below this is a setup error

    size_t adapt_epochs = 10;
    double adapt_lr = 1e-2;
    double adapt_weight_decay = 0.0;
    // Fraction of adaptation-train labels flipped to a random wrong class.
    // Dirty labels keep the dense gradient churning the shared weights the
    // way real fine-tuning corpora do; eval stays clean.
    double e_label_noise = 0.05;
    // Amplitude of the noise the token task carries on the parity dims.
    // Nonzero bleed is what lets dense fine-tuning erode the parity features;
    // projection-based methods shed that drift.
    double e_cross_noise = 0.8;

    double alpha = 0.05;               // selekt / sparse-apriori budget
    Periodicity period;                // selekt projection period (default 1 epoch)
    MergeConfig ties;                  // density/weight for the ties baseline
    size_t ties_checkpoints = 3;       // one sft checkpoint per epoch, merged
    LoraSpec lora;                     // rank-4 default
};

// token -> substituted token, a seeded derangement-free permutation of 0..7.
std::vector<int> substitution_permutation(uint64_t seed);

Dataset make_task_g(const ForgettingBenchmark& bench, size_t n, uint64_t seed);
Dataset make_task_e(const ForgettingBenchmark& bench, size_t n, uint64_t seed);

// Percent of positions whose argmax logit equals the target.
double evaluate_accuracy(const ModelSpec& spec, const NamedParamSet& params,
                         const Dataset& data);

struct SeedBase {
    uint64_t seed = 0;
    double g_accuracy = 0.0;  // base model on task G eval, percent
    double e_accuracy = 0.0;  // base model on task E eval, percent
};

struct MethodRow {
    std::string method;
    uint64_t seed = 0;
    double g_retention = 0.0;  // task G eval after adaptation, percent
    double e_accuracy = 0.0;   // task E eval after adaptation, percent
    size_t l0_to_base = 0;
};

struct ForgettingReport {
    std::vector<SeedBase> bases;
    std::vector<MethodRow> rows;

    double mean_g(std::string_view method) const;
    double mean_e(std::string_view method) const;
};

// Trains a base model on task G per seed (>= min accuracy or DomainError),
// adapts it on task E with every requested method, and scores retention and
// adaptation. All methods share the same batch order per seed.
ForgettingReport run_forgetting(const ForgettingBenchmark& bench,
                                const std::vector<Method>& methods,
                                const std::vector<uint64_t>& seeds);

struct AblationGrid {
    std::vector<Method> methods = {Method::Selekt};
    std::vector<double> alphas = {0.05, 0.2, 0.5};
    std::vector<Periodicity> periods = {
        Periodicity::epoch_fraction(0.1), Periodicity::epoch_fraction(0.5),
        Periodicity::epoch_fraction(1.0), Periodicity::at_end()};
    std::vector<uint64_t> seeds = {1, 2, 3};
    size_t workers = 4;

    void validate() const;  // non-empty lists
    size_t cells() const;
};

struct AblationRow {
    std::string method;
    double alpha = 0.0;
    std::string period;
    uint64_t seed = 0;
    double g_retention = 0.0;
    double e_accuracy = 0.0;
    size_t l0_to_base = 0;
};

struct AblationReport {
    std::vector<AblationRow> rows;  // exactly methods x alphas x periods x seeds
};

// Runs every grid cell (concurrently up to grid.workers); cell order in the
// report is deterministic regardless of scheduling.
AblationReport run_ablation(const ForgettingBenchmark& bench,
                            const AblationGrid& grid);

// Paper-scale reference numbers juxtaposed in reports. These are bookkeeping
// fixtures from the source experiments, never desk-scale pass/fail targets.
struct PaperFixtureRow {
    std::string dimension;  // "alpha" | "period" | "base-mode"
    std::string setting;
    double humanevalfix = 0.0;
    double canitedit = 0.0;
    double aider = 0.0;
};

const std::vector<PaperFixtureRow>& paper_fixture_rows();

enum class ReportFormat : uint8_t { Markdown, Json };
ReportFormat report_format_from_string(std::string_view text);

std::string render_report(const AblationReport& report, ReportFormat format);
AblationReport ablation_report_from_json(const std::string& text);

std::string render_forgetting(const ForgettingReport& report, ReportFormat format);
ForgettingReport forgetting_report_from_json(const std::string& text);

}  // namespace skt::harness
