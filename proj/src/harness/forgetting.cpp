// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail.hpp"
#include "skt/common/errors.hpp"
#include "skt/common/rng.hpp"

namespace skt::harness {
namespace {

// Seed streams, so every dataset/model draw is independent per run seed.
enum : uint64_t {
    kStreamPerm = 1,
    kStreamGTrain,
    kStreamGEval,
    kStreamETrain,
    kStreamEEval,
    kStreamInit,
    kStreamBaseShuffle,
    kStreamAdaptShuffle,
    kStreamLoraInit,
    kStreamEIdentity,
};

}  // namespace

Method method_from_string(std::string_view text) {
    if (text == "sft") return Method::Sft;
    if (text == "selekt") return Method::Selekt;
    if (text == "lora") return Method::Lora;
    if (text == "sparse-apriori" || text == "sparse_apriori") return Method::SparseApriori;
    if (text == "ties") return Method::Ties;
    if (text == "posthoc") return Method::Posthoc;
    throw DomainError("unknown method: " + std::string(text));
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Sft: return "sft";
        case Method::Selekt: return "selekt";
        case Method::Lora: return "lora";
        case Method::SparseApriori: return "sparse-apriori";
        case Method::Ties: return "ties";
        case Method::Posthoc: return "posthoc";
    }
    throw DomainError("unknown method enum value");
}

std::vector<Method> all_methods() {
    return {Method::Sft,  Method::Selekt, Method::Lora,
            Method::SparseApriori, Method::Ties,   Method::Posthoc};
}

std::vector<int> substitution_permutation(uint64_t seed) {
    Rng rng(derive_seed(seed, kStreamPerm));
    // A seeded transposition: exactly two tokens trade places. The edit is
    // localized -- most of the map survives -- which is the regime sparse
    // projection targets; the swap size is constant so difficulty is uniform
    // across seeds.
    std::vector<int> perm(kETokens);
    for (size_t t = 0; t < kETokens; ++t) perm[t] = static_cast<int>(t);
    const size_t a = rng.next_below(kETokens);
    size_t b = rng.next_below(kETokens - 1);
    if (b >= a) ++b;
    std::swap(perm[a], perm[b]);
    return perm;
}

Dataset make_task_g(const ForgettingBenchmark& bench, size_t n, uint64_t seed) {
    Rng rng(seed);
    Dataset data;
    for (size_t i = 0; i < n; ++i) {
        std::vector<float> x(kInputDim, 0.0f);
        int parity = 0;
        for (size_t d = 0; d < kGDims; ++d) {
            const int bit = static_cast<int>(rng.next_below(2));
            parity ^= bit;
            x[d] = static_cast<float>(bit + bench.noise * (rng.next_double() * 2.0 - 1.0));
        }
        data.append(std::move(x), parity, 1);
    }
    return data;
}

namespace {

Dataset sample_task_e(const std::vector<int>& perm, double noise, size_t n,
                      uint64_t sample_seed, double label_noise = 0.0,
                      double cross_noise = 0.0) {
    Rng rng(sample_seed);
    Dataset data;
    for (size_t i = 0; i < n; ++i) {
        std::vector<float> x(kInputDim, 0.0f);
        const size_t token = rng.next_below(kETokens);
        for (size_t d = 0; d < kGDims; ++d)
            x[d] = static_cast<float>(cross_noise * (rng.next_double() * 2.0 - 1.0));
        for (size_t d = 0; d < kETokens; ++d) {
            const double onehot = d == token ? 1.0 : 0.0;
            x[kGDims + d] =
                static_cast<float>(onehot + noise * (rng.next_double() * 2.0 - 1.0));
        }
        int label = perm[token];
        if (label_noise > 0.0 && rng.next_double() < label_noise) {
            int wrong = static_cast<int>(rng.next_below(kETokens - 1));
            if (wrong >= label) ++wrong;
            label = wrong;
        }
        data.append(std::move(x), label, 1);
    }
    return data;
}

}  // namespace

Dataset make_task_e(const ForgettingBenchmark& bench, size_t n, uint64_t seed) {
    return sample_task_e(substitution_permutation(seed), bench.noise, n,
                         derive_seed(seed, kStreamETrain), 0.0, bench.e_cross_noise);
}

double evaluate_accuracy(const ModelSpec& spec, const NamedParamSet& params,
                         const Dataset& data) {
    if (data.size() == 0) throw DomainError("evaluate_accuracy: empty dataset");
    Batch batch{data.xs, data.ys, std::vector<uint8_t>(data.size(), 1)};
    ForwardCache cache;
    forward_loss(spec, params, batch, cache);
    size_t correct = 0;
    const size_t v = spec.vocab_size();
    for (size_t s = 0; s < data.size(); ++s) {
        const double* p = cache.probs[s].data();
        const size_t arg = static_cast<size_t>(
            std::max_element(p, p + v) - p);
        if (static_cast<int>(arg) == data.ys[s]) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(data.size());
}

double ForgettingReport::mean_g(std::string_view method) const {
    double sum = 0.0;
    size_t n = 0;
    for (const auto& r : rows) {
        if (r.method == method) {
            sum += r.g_retention;
            ++n;
        }
    }
    if (n == 0) throw DomainError("mean_g: no rows for method " + std::string(method));
    return sum / static_cast<double>(n);
}

double ForgettingReport::mean_e(std::string_view method) const {
    double sum = 0.0;
    size_t n = 0;
    for (const auto& r : rows) {
        if (r.method == method) {
            sum += r.e_accuracy;
            ++n;
        }
    }
    if (n == 0) throw DomainError("mean_e: no rows for method " + std::string(method));
    return sum / static_cast<double>(n);
}

namespace detail {

SeedSetup prepare_seed(const ForgettingBenchmark& bench, uint64_t seed) {
    SeedSetup s;
    s.spec.layer_sizes = {kInputDim, bench.hidden, kVocab};
    s.spec.activation = Activation::Tanh;
    s.spec.init_seed = derive_seed(seed, kStreamInit);
    s.spec.validate();

    Dataset g_train = make_task_g(bench, bench.g_train, derive_seed(seed, kStreamGTrain));
    s.g_eval = make_task_g(bench, bench.g_eval, derive_seed(seed, kStreamGEval));
    // Train and eval share the permutation (the map IS the task); only the
    // sample streams differ.
    const auto perm = substitution_permutation(seed);
    s.e_train = sample_task_e(perm, bench.noise, bench.e_train,
                              derive_seed(seed, kStreamETrain), bench.e_label_noise,
                              bench.e_cross_noise);
    s.e_eval = sample_task_e(perm, bench.noise, bench.e_eval,
                             derive_seed(seed, kStreamEEval), 0.0, bench.e_cross_noise);

    // The base model learns the token region too, through the identity map:
    // adaptation then edits an existing capability (re-route the outputs)
    // instead of building one from scratch, mirroring the fine-tuning regime
    // the method targets.
    std::vector<int> identity(kETokens);
    for (size_t t = 0; t < kETokens; ++t) identity[t] = static_cast<int>(t);
    const Dataset e_identity = sample_task_e(identity, bench.noise, bench.e_train,
                                             derive_seed(seed, kStreamEIdentity), 0.0,
                                             bench.e_cross_noise);
    for (size_t i = 0; i < e_identity.size(); ++i) {
        g_train.append(e_identity.xs[i], e_identity.ys[i], e_identity.masks[i]);
    }

    TrainConfig base_cfg;
    base_cfg.optimizer.lr = bench.base_lr;
    base_cfg.epochs = bench.base_epochs;
    base_cfg.batch_size = bench.batch_size;
    base_cfg.shuffle_seed = derive_seed(seed, kStreamBaseShuffle);

    const NamedParamSet init = init_model(s.spec);
    s.base = sft_run(s.spec, init, g_train, base_cfg).params;

    s.base_g_accuracy = evaluate_accuracy(s.spec, s.base, s.g_eval);
    s.base_e_accuracy = evaluate_accuracy(s.spec, s.base, s.e_eval);
    if (s.base_g_accuracy < bench.min_base_accuracy) {
        throw DomainError(
            "forgetting benchmark setup: base task-G accuracy " +
            std::to_string(s.base_g_accuracy) + "% is below the required " +
            std::to_string(bench.min_base_accuracy) +
            "%; raise capacity or training steps");
    }

    s.adapt_cfg.optimizer.lr = bench.adapt_lr;
    s.adapt_cfg.optimizer.weight_decay = bench.adapt_weight_decay;
    s.adapt_cfg.epochs = bench.adapt_epochs;
    s.adapt_cfg.batch_size = bench.batch_size;
    s.adapt_cfg.shuffle_seed = derive_seed(seed, kStreamAdaptShuffle);
    return s;
}

NamedParamSet adapt(const ForgettingBenchmark& bench, const SeedSetup& s,
                    Method method, uint64_t seed, double alpha,
                    const Periodicity& period) {
    switch (method) {
        case Method::Sft:
            return sft_run(s.spec, s.base, s.e_train, s.adapt_cfg).params;
        case Method::Selekt: {
            SelektConfig cfg;
            cfg.alpha = alpha;
            cfg.period = period;
            cfg.train = s.adapt_cfg;
            return selekt_run(s.spec, s.base, s.e_train, cfg).params;
        }
        case Method::Posthoc: {
            SelektConfig cfg;
            cfg.alpha = alpha;
            cfg.period = period;
            cfg.train = s.adapt_cfg;
            return posthoc_projection_run(s.spec, s.base, s.e_train, cfg).params;
        }
        case Method::SparseApriori: {
            AprioriConfig cfg;
            cfg.alpha = alpha;
            cfg.train = s.adapt_cfg;
            return apriori_sparse_run(s.spec, s.base, s.e_train, cfg).params;
        }
        case Method::Lora: {
            LoraSpec lora = bench.lora;
            lora.init_seed = derive_seed(seed, kStreamLoraInit);
            return lora_run(s.spec, s.base, s.e_train, s.adapt_cfg, lora).merged;
        }
        case Method::Ties: {
            // One dense checkpoint per epoch, merged back onto the base.
            TrainConfig cfg = s.adapt_cfg;
            cfg.epochs = bench.ties_checkpoints;
            const size_t spe = steps_per_epoch(s.e_train.size(), cfg.batch_size);
            std::vector<NamedParamSet> checkpoints;
            run_training(s.spec, s.base, s.e_train, cfg, nullptr,
                         [&](NamedParamSet& params, OptimizerState&,
                             const StepInfo& info) {
                             if (info.step % spe == 0) checkpoints.push_back(params);
                         });
            if (checkpoints.empty()) {
                throw DomainError("ties adaptation produced no checkpoints");
            }
            return ties_run(s.base, checkpoints, bench.ties);
        }
    }
    throw DomainError("unknown method enum value");
}

}  // namespace detail

ForgettingReport run_forgetting(const ForgettingBenchmark& bench,
                                const std::vector<Method>& methods,
                                const std::vector<uint64_t>& seeds) {
    if (methods.empty()) throw DomainError("run_forgetting: empty method list");
    if (seeds.empty()) throw DomainError("run_forgetting: empty seed list");

    ForgettingReport report;
    for (uint64_t seed : seeds) {
        const auto s = detail::prepare_seed(bench, seed);
        report.bases.push_back({seed, s.base_g_accuracy, s.base_e_accuracy});
        for (Method method : methods) {
            const NamedParamSet adapted =
                detail::adapt(bench, s, method, seed, bench.alpha, bench.period);
            MethodRow row;
            row.method = std::string(to_string(method));
            row.seed = seed;
            row.g_retention = evaluate_accuracy(s.spec, adapted, s.g_eval);
            row.e_accuracy = evaluate_accuracy(s.spec, adapted, s.e_eval);
            row.l0_to_base = l0_distance(adapted, s.base);
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

}  // namespace skt::harness
