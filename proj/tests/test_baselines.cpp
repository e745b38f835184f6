// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include "skt/baselines/baselines.hpp"
#include "skt/common/errors.hpp"
#include "skt/common/rng.hpp"
#include "skt/paramvec/io.hpp"

using namespace skt;
namespace fs = std::filesystem;

namespace {

ModelSpec small_spec(uint64_t seed) {
    ModelSpec spec;
    spec.layer_sizes = {3, 10, 4};
    spec.init_seed = seed;
    return spec;
}

Dataset small_data(uint64_t seed, size_t n) {
    Rng rng(seed);
    Dataset d;
    for (size_t i = 0; i < n; ++i) {
        std::vector<float> x(3);
        for (auto& v : x) v = rng.next_float(-1.0f, 1.0f);
        // Linearly separable rule so losses can actually fall.
        const int y = x[0] + x[1] > 0 ? 1 : 2;
        d.append(std::move(x), y, 1);
    }
    return d;
}

TrainConfig small_train(size_t epochs, uint64_t shuffle_seed = 9) {
    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.batch_size = 8;
    cfg.optimizer.lr = 5e-3;
    cfg.shuffle_seed = shuffle_seed;
    return cfg;
}

std::vector<double> merged_logits(const ModelSpec& spec,
                                  const NamedParamSet& params,
                                  const std::vector<float>& x) {
    Batch b;
    b.inputs = {x};
    b.targets = {0};
    b.loss_mask = {1};
    ForwardCache cache;
    forward_loss(spec, params, b, cache);
    return cache.acts.back();
}

}  // namespace

TEST_CASE("methods see identical first batches") {
    const ModelSpec spec = small_spec(1);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(2, 40);
    const TrainConfig cfg = small_train(1, 77);

    const TrainResult sft = sft_run(spec, base, data, cfg);

    // Adapters start at B=0, so step one computes the same loss on the same
    // shuffled batch; any deviation means the epoch plan is not shared.
    LoraSpec lora;
    lora.rank = 2;
    lora.dropout = 0.0;
    const LoraRunResult lr = lora_run(spec, base, data, cfg, lora);
    REQUIRE(!sft.step_losses.empty());
    REQUIRE(!lr.step_losses.empty());
    CHECK(lr.step_losses[0] == doctest::Approx(sft.step_losses[0]).epsilon(1e-12));
}

TEST_CASE("apriori support never leaves the probe mask") {
    const ModelSpec spec = small_spec(3);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(4, 48);

    AprioriConfig cfg;
    cfg.alpha = 0.1;
    cfg.train = small_train(3);

    const AprioriResult r = apriori_sparse_run(spec, base, data, cfg);
    CHECK(r.mask.popcount() <= mask_capacity(cfg.alpha, base, cfg.scope));
    CHECK(l0_distance(r.params, base) <= r.mask.popcount());

    // Every changed coordinate is inside the mask.
    for (size_t e = 0; e < r.params.size(); ++e) {
        const auto& van = base.entry(e).values;
        const auto& now = r.params.entry(e).values;
        const auto& bits = r.mask.entries[e].bits;
        for (size_t i = 0; i < van.size(); ++i) {
            if (std::memcmp(&van[i], &now[i], 4) != 0) CHECK(bits[i] == 1);
        }
    }
}

TEST_CASE("apriori at the alpha extremes") {
    const ModelSpec spec = small_spec(5);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(6, 40);

    AprioriConfig cfg;
    cfg.train = small_train(2);

    cfg.alpha = 1.0;
    const AprioriResult all = apriori_sparse_run(spec, base, data, cfg);
    const TrainResult sft = sft_run(spec, base, data, cfg.train);
    CHECK(all.params == sft.params);

    cfg.alpha = 0.0;
    const AprioriResult none = apriori_sparse_run(spec, base, data, cfg);
    CHECK(none.params == base);
    CHECK(none.mask.popcount() == 0);

    cfg.alpha = 1.5;
    CHECK_THROWS_AS(apriori_sparse_run(spec, base, data, cfg), DomainError);
}

TEST_CASE("probe length changes the apriori mask") {
    const ModelSpec spec = small_spec(8);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(9, 64);

    AprioriConfig quick;
    quick.alpha = 0.05;
    quick.train = small_train(2);
    quick.probe_steps = 1;
    AprioriConfig longer = quick;
    longer.probe_steps = 16;

    const AprioriResult a = apriori_sparse_run(spec, base, data, quick);
    const AprioriResult b = apriori_sparse_run(spec, base, data, longer);
    bool same = true;
    for (size_t e = 0; e < a.mask.entries.size() && same; ++e)
        same = a.mask.entries[e].bits == b.mask.entries[e].bits;
    CHECK(!same);
}

TEST_CASE("lora adapters are seeded and shaped by the spec") {
    const ModelSpec spec = small_spec(2);
    LoraSpec lora;
    lora.rank = 2;
    lora.init_seed = 42;
    const NamedParamSet adapters = init_lora(spec, lora);
    REQUIRE(adapters.size() == 4);
    CHECK(adapters.at("A0").size() == 2 * 3);
    CHECK(adapters.at("B0").size() == 10 * 2);
    CHECK(adapters.at("A1").size() == 2 * 10);
    CHECK(adapters.at("B1").size() == 4 * 2);
    // B starts at zero so the adapter path initially adds nothing.
    for (float v : adapters.at("B0")) CHECK(v == 0.0f);
    bool a_nonzero = false;
    for (float v : adapters.at("A0")) a_nonzero |= v != 0.0f;
    CHECK(a_nonzero);
    CHECK(init_lora(spec, lora) == adapters);

    const NamedParamSet base = init_model(spec);
    const NamedParamSet merged = merge_lora(spec, base, adapters, lora);
    CHECK(merged == base);  // B=0 merges to the identity
}

TEST_CASE("merged lora matches the explicit adapter path") {
    const ModelSpec spec = small_spec(4);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(5, 40);
    LoraSpec lora;
    lora.rank = 3;
    const LoraRunResult r = lora_run(spec, base, data, small_train(3), lora);

    Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        std::vector<float> x(3);
        for (auto& v : x) v = rng.next_float(-1.0f, 1.0f);
        const auto direct = lora_forward_logits(spec, base, r.adapters, lora, x);
        const auto via_merge = merged_logits(spec, r.merged, x);
        REQUIRE(direct.size() == via_merge.size());
        for (size_t k = 0; k < direct.size(); ++k)
            CHECK(std::fabs(direct[k] - via_merge[k]) <= 1e-5);
    }

    // The merged model is exactly base plus the adapter product: rebuilding
    // it from (base, adapters) reproduces it bit for bit, so the base stayed
    // frozen during training.
    CHECK(merge_lora(spec, base, r.adapters, lora) == r.merged);
}

TEST_CASE("lora respects the target list") {
    const ModelSpec spec = small_spec(6);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(7, 40);
    LoraSpec lora;
    lora.rank = 2;
    lora.targets = {"W1"};
    const LoraRunResult r = lora_run(spec, base, data, small_train(2), lora);
    CHECK(r.adapters.has("A1"));
    CHECK(!r.adapters.has("A0"));
    CHECK(r.merged.at("W0") == base.at("W0"));
    CHECK(r.merged.at("b0") == base.at("b0"));
    CHECK(!(r.merged.at("W1") == base.at("W1")));

    lora.targets = {"W9"};
    CHECK_THROWS_AS(lora_run(spec, base, data, small_train(1), lora), DomainError);
    lora.targets = {};
    lora.rank = 100;
    CHECK_THROWS_AS(lora_run(spec, base, data, small_train(1), lora), DomainError);

    lora.rank = 0;  // nothing trainable: the run is a no-op on the base
    const LoraRunResult noop = lora_run(spec, base, data, small_train(1), lora);
    CHECK(noop.merged == base);
    CHECK(noop.step_losses.empty());
}

TEST_CASE("lora learns while biases stay frozen") {
    const ModelSpec spec = small_spec(9);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(10, 64);
    TrainConfig cfg = small_train(12);
    cfg.optimizer.lr = 1e-2;
    LoraSpec lora;
    lora.rank = 3;
    const LoraRunResult r = lora_run(spec, base, data, cfg, lora);
    // Loss falls while every non-W parameter is untouched.
    CHECK(r.step_losses.back() < 0.6 * r.step_losses.front());
    CHECK(r.merged.at("b0") == base.at("b0"));
    CHECK(r.merged.at("b1") == base.at("b1"));
}

TEST_CASE("lora dropout changes the trajectory deterministically") {
    const ModelSpec spec = small_spec(10);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(11, 40);
    LoraSpec dry;
    dry.rank = 2;
    LoraSpec wet = dry;
    wet.dropout = 0.5;
    const LoraRunResult a = lora_run(spec, base, data, small_train(2), dry);
    const LoraRunResult b = lora_run(spec, base, data, small_train(2), wet);
    const LoraRunResult b2 = lora_run(spec, base, data, small_train(2), wet);
    CHECK(!(a.merged == b.merged));
    CHECK(b.merged == b2.merged);
}

TEST_CASE("paper presets carry the published settings") {
    const LoraSpec preset = paper_preset_lora();
    CHECK(preset.rank == 64);
    CHECK(preset.scale == doctest::Approx(16.0 / 64.0));
    CHECK(preset.dropout == doctest::Approx(0.05));
    const AdamwConfig adam = paper_preset_adamw();
    CHECK(adam.lr == doctest::Approx(1e-5));
    CHECK(adam.warmup_ratio == doctest::Approx(0.1));
}

TEST_CASE("ties over files matches the in-memory merge") {
    const ModelSpec spec = small_spec(12);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(13, 40);

    const TrainResult t1 = sft_run(spec, base, data, small_train(2, 1));
    const TrainResult t2 = sft_run(spec, base, data, small_train(2, 2));

    MergeConfig cfg;
    const NamedParamSet direct = ties_run(base, {t1.params, t2.params}, cfg);

    const fs::path dir = fs::temp_directory_path();
    const fs::path pb = dir / "skt_ties_base.nps1";
    const fs::path p1 = dir / "skt_ties_t1.nps1";
    const fs::path p2 = dir / "skt_ties_t2.nps1";
    save_nps1(pb, base);
    save_nps1(p1, t1.params);
    save_nps1(p2, t2.params);
    const NamedParamSet via_files = ties_run_files(pb, {p1, p2}, cfg);
    CHECK(via_files == direct);
    fs::remove(pb);
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("ties merge of duplicates is the single-model merge") {
    const ModelSpec spec = small_spec(14);
    const NamedParamSet base = init_model(spec);
    const Dataset data = small_data(15, 40);
    const TrainResult t = sft_run(spec, base, data, small_train(2));

    MergeConfig cfg;
    const NamedParamSet one = ties_run(base, {t.params}, cfg);
    const NamedParamSet two = ties_run(base, {t.params, t.params}, cfg);
    CHECK(one == two);
}

TEST_CASE("ties rejects bad merge settings") {
    const ModelSpec spec = small_spec(15);
    const NamedParamSet base = init_model(spec);
    NamedParamSet tuned = base;
    tuned.at("W0")[0] += 1.0f;

    CHECK_THROWS_AS(ties_run(base, {}, MergeConfig{}), DomainError);
    CHECK_THROWS_AS(ties_run(base, {tuned}, MergeConfig{1.5, 0.5}), DomainError);
    CHECK_THROWS_AS(ties_run(base, {tuned}, MergeConfig{0.5, -1.0}), DomainError);
}
