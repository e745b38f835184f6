// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "skt/paramvec/ops.hpp"
#include "skt/toymodel/train.hpp"

namespace skt {

// Plain dense fine-tuning; the reference every other method is compared to.
TrainResult sft_run(const ModelSpec& spec, const NamedParamSet& base,
                    const Dataset& data, const TrainConfig& cfg);

// A-priori sparse fine-tuning: a short dense probe from base picks a fixed
// mask; training restarts from base with gradients zeroed outside the mask
// and masked-out coordinates snapped back to base after every step.
struct AprioriConfig {
    double alpha = 0.05;
    MaskScope scope = MaskScope::PerLayer;
    size_t probe_steps = 0;  // 0 = one epoch
    TrainConfig train;
    std::vector<std::string> exclude;
};

struct AprioriResult {
    NamedParamSet params;
    SparseMask mask;
};

AprioriResult apriori_sparse_run(const ModelSpec& spec, const NamedParamSet& base,
                                 const Dataset& data, const AprioriConfig& cfg);

// Low-rank adapters on targeted weight matrices. Adapters are the only
// trainable parameters; the merged model is base + scale * B.A.
struct LoraSpec {
    size_t rank = 4;
    double scale = 4.0;   // direct multiplier on B.A
    double dropout = 0.0; // applied to the adapter input during training
    std::vector<std::string> targets;  // W-matrix names; empty = all
    uint64_t init_seed = 1;
};

// Paper-scale preset: rank 64 with alpha 16 (multiplier 16/64) and
// dropout 0.05 on all linear layers.
LoraSpec paper_preset_lora();

// Adapter parameters are named A<l>/B<l> per targeted layer W<l>;
// A is r x in (seeded uniform), B is out x r (zero).
NamedParamSet init_lora(const ModelSpec& spec, const LoraSpec& lora);

NamedParamSet merge_lora(const ModelSpec& spec, const NamedParamSet& base,
                         const NamedParamSet& adapters, const LoraSpec& lora);

// Explicit adapter-path forward (no dropout): logits for one input.
std::vector<double> lora_forward_logits(const ModelSpec& spec,
                                        const NamedParamSet& base,
                                        const NamedParamSet& adapters,
                                        const LoraSpec& lora,
                                        const std::vector<float>& x);

struct LoraRunResult {
    NamedParamSet merged;
    NamedParamSet adapters;
    std::vector<double> step_losses;
};

LoraRunResult lora_run(const ModelSpec& spec, const NamedParamSet& base,
                       const Dataset& data, const TrainConfig& cfg,
                       const LoraSpec& lora);

// TIES over checkpoint files; the arithmetic lives in paramvec.
NamedParamSet ties_run(const NamedParamSet& base,
                       const std::vector<NamedParamSet>& tuned,
                       const MergeConfig& cfg);
NamedParamSet ties_run_files(const std::filesystem::path& base_path,
                             const std::vector<std::filesystem::path>& tuned_paths,
                             const MergeConfig& cfg);

}  // namespace skt
