// SPDX-License-Identifier: Apache-2.0
#include "skt/toymodel/optimizer.hpp"

#include <cmath>

#include "skt/common/errors.hpp"
#include "skt/kernels/kernels.hpp"

namespace skt {

AdamwConfig paper_preset_adamw() {
    AdamwConfig cfg;
    cfg.lr = 1e-5;
    cfg.warmup_ratio = 0.1;
    return cfg;
}

OptimizerState make_optimizer(const NamedParamSet& params, const AdamwConfig& cfg) {
    if (!(cfg.lr >= 0.0)) throw DomainError("lr must be >= 0");
    if (!(cfg.warmup_ratio >= 0.0 && cfg.warmup_ratio <= 1.0))
        throw DomainError("warmup_ratio must lie in [0,1]");
    OptimizerState st;
    st.cfg = cfg;
    for (const auto& e : params.entries()) {
        st.m.add(e.name, std::vector<float>(e.values.size(), 0.0f));
        st.v.add(e.name, std::vector<float>(e.values.size(), 0.0f));
    }
    st.warmup_steps = static_cast<size_t>(
        std::floor(cfg.warmup_ratio * static_cast<double>(cfg.total_planned_steps)));
    return st;
}

double effective_lr(const OptimizerState& state, size_t step) {
    if (state.warmup_steps > 0 && step <= state.warmup_steps)
        return state.cfg.lr * static_cast<double>(step) /
               static_cast<double>(state.warmup_steps);
    return state.cfg.lr;
}

void adamw_step(NamedParamSet& params, const TaskVector& grad,
                OptimizerState& state) {
    NamedParamSet::check_aligned(params, grad);
    NamedParamSet::check_aligned(params, state.m);
    for (const auto& e : grad.entries())
        for (float g : e.values)
            if (!std::isfinite(g))
                throw NumericError("non-finite gradient in '" + e.name + "'");

    state.step += 1;
    const double t = static_cast<double>(state.step);
    kernels::AdamwParams hp;
    hp.lr = static_cast<float>(effective_lr(state, state.step));
    hp.beta1 = static_cast<float>(state.cfg.beta1);
    hp.beta2 = static_cast<float>(state.cfg.beta2);
    hp.eps = static_cast<float>(state.cfg.eps);
    hp.weight_decay = static_cast<float>(state.cfg.weight_decay);
    hp.bias_corr1 = static_cast<float>(1.0 - std::pow(state.cfg.beta1, t));
    hp.bias_corr2 = static_cast<float>(1.0 - std::pow(state.cfg.beta2, t));

    const kernels::Ops& ops = kernels::active();
    for (size_t i = 0; i < params.size(); ++i) {
        auto& p = params.entry(i).values;
        ops.adamw_update(p.data(), grad.entry(i).values.data(),
                         state.m.entry(i).values.data(),
                         state.v.entry(i).values.data(), p.size(), hp);
    }
}

}  // namespace skt
