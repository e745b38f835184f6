// SPDX-License-Identifier: Apache-2.0
#include "skt/baselines/baselines.hpp"

#include "skt/common/errors.hpp"
#include "skt/kernels/kernels.hpp"

namespace skt {

AprioriResult apriori_sparse_run(const ModelSpec& spec, const NamedParamSet& base,
                                 const Dataset& data, const AprioriConfig& cfg) {
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
        throw DomainError("alpha must lie in [0,1]");
    if (data.size() == 0) throw DomainError("dataset is empty");

    const size_t spe = steps_per_epoch(data.size(), cfg.train.batch_size);
    TrainConfig probe_cfg = cfg.train;
    probe_cfg.max_steps = cfg.probe_steps > 0 ? cfg.probe_steps : spe;
    probe_cfg.epochs = (probe_cfg.max_steps + spe - 1) / spe;
    const TrainResult probe = run_training(spec, base, data, probe_cfg);

    AprioriResult result;
    result.mask = topk_mask(subtract(probe.params, base), cfg.alpha, cfg.scope,
                            cfg.exclude);

    // Main run: restart from base; zero gradients outside the mask and snap
    // masked-out coordinates back to base after each step so weight decay
    // cannot move them either.
    const kernels::Ops& ops = kernels::active();
    const SparseMask& mask = result.mask;
    TrainResult tr = run_training(
        spec, base, data, cfg.train,
        [&](TaskVector& grad) {
            for (size_t i = 0; i < grad.size(); ++i) {
                auto& g = grad.entry(i).values;
                const auto& bits = mask.entries[i].bits;
                for (size_t j = 0; j < g.size(); ++j)
                    if (!bits[j]) g[j] = 0.0f;
            }
        },
        [&](NamedParamSet& params, OptimizerState&, const StepInfo&) {
            for (size_t i = 0; i < params.size(); ++i) {
                auto& v = params.entry(i).values;
                ops.masked_select(v.data(), mask.entries[i].bits.data(), v.data(),
                                  base.entry(i).values.data(), v.size());
            }
        });
    result.params = std::move(tr.params);
    return result;
}

}  // namespace skt
