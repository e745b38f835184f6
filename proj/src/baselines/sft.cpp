// SPDX-License-Identifier: Apache-2.0
#include "skt/baselines/baselines.hpp"

namespace skt {

TrainResult sft_run(const ModelSpec& spec, const NamedParamSet& base,
                    const Dataset& data, const TrainConfig& cfg) {
    return run_training(spec, base, data, cfg);
}

}  // namespace skt
