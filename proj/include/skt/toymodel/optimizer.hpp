// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "skt/paramvec/param_set.hpp"

namespace skt {

// Decoupled-weight-decay Adam with optional linear warmup over the first
// warmup_ratio fraction of total_planned_steps.
struct AdamwConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
    double warmup_ratio = 0.0;
    size_t total_planned_steps = 0;
};

// Paper-scale settings shipped as a named preset (lr tuned for large models;
// the toy default above converges at desk scale).
AdamwConfig paper_preset_adamw();

struct OptimizerState {
    AdamwConfig cfg;
    NamedParamSet m;
    NamedParamSet v;
    size_t step = 0;
    size_t warmup_steps = 0;
};

OptimizerState make_optimizer(const NamedParamSet& params, const AdamwConfig& cfg);

// Effective lr for the step number `step` (1-based, i.e. after increment).
double effective_lr(const OptimizerState& state, size_t step);

// One in-place update. Throws NumericError on non-finite gradient values.
void adamw_step(NamedParamSet& params, const TaskVector& grad,
                OptimizerState& state);

}  // namespace skt
