// SPDX-License-Identifier: Apache-2.0
#include "skt/toymodel/train.hpp"

#include <algorithm>

#include "skt/common/errors.hpp"

namespace skt {

size_t planned_steps(size_t dataset_size, const TrainConfig& cfg) {
    if (cfg.epochs == 0) throw DomainError("epochs must be >= 1");
    const size_t full = steps_per_epoch(dataset_size, cfg.batch_size) * cfg.epochs;
    return cfg.max_steps > 0 ? std::min(full, cfg.max_steps) : full;
}

TrainResult run_training(const ModelSpec& spec, const NamedParamSet& start,
                         const Dataset& data, const TrainConfig& cfg,
                         const GradHook& grad_hook, const PostStepHook& post_step) {
    spec.validate();
    if (data.size() == 0) throw DomainError("dataset is empty");

    AdamwConfig opt_cfg = cfg.optimizer;
    if (opt_cfg.total_planned_steps == 0)
        opt_cfg.total_planned_steps = planned_steps(data.size(), cfg);

    TrainResult result;
    result.params = start;
    OptimizerState opt = make_optimizer(result.params, opt_cfg);

    const size_t cap = planned_steps(data.size(), cfg);
    ForwardCache cache;
    StepInfo info;
    for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (result.total_steps >= cap) break;
        for (Batch& batch : make_batches(data, cfg.batch_size, cfg.shuffle_seed, epoch)) {
            if (result.total_steps >= cap) break;
            const double loss = forward_loss(spec, result.params, batch, cache);
            TaskVector grad = backward(spec, result.params, batch, cache);
            if (grad_hook) grad_hook(grad);
            adamw_step(result.params, grad, opt);
            result.total_steps += 1;
            result.step_losses.push_back(loss);
            if (post_step) {
                info.epoch = epoch;
                info.step = result.total_steps;
                info.loss = loss;
                post_step(result.params, opt, info);
            }
        }
    }
    return result;
}

}  // namespace skt
