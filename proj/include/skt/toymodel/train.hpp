// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "skt/toymodel/data.hpp"
#include "skt/toymodel/model.hpp"
#include "skt/toymodel/optimizer.hpp"

namespace skt {

// Every fine-tuning method trains through this engine with the same epoch
// plan (same shuffle_seed => identical batch order), so methods differ only
// in what their hooks do.
struct TrainConfig {
    AdamwConfig optimizer;
    size_t epochs = 1;
    size_t batch_size = 8;
    uint64_t shuffle_seed = 0;
    size_t max_steps = 0;  // 0 = no cap; probes use this to stop early
};

struct StepInfo {
    size_t epoch = 0;  // 0-based
    size_t step = 0;   // global, 1-based
    double loss = 0.0;
};

// grad hook runs before the optimizer step; post-step after it.
using GradHook = std::function<void(TaskVector&)>;
using PostStepHook =
    std::function<void(NamedParamSet&, OptimizerState&, const StepInfo&)>;

struct TrainResult {
    NamedParamSet params;
    size_t total_steps = 0;
    std::vector<double> step_losses;
};

size_t planned_steps(size_t dataset_size, const TrainConfig& cfg);

TrainResult run_training(const ModelSpec& spec, const NamedParamSet& start,
                         const Dataset& data, const TrainConfig& cfg,
                         const GradHook& grad_hook = nullptr,
                         const PostStepHook& post_step = nullptr);

}  // namespace skt
