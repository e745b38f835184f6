// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "skt/paramvec/ops.hpp"
#include "skt/toymodel/train.hpp"

namespace skt {

// How often the sparse projection fires, counted in global optimizer steps.
struct Periodicity {
    enum class Kind : uint8_t { Steps, EpochFraction, AtEnd };
    Kind kind = Kind::EpochFraction;
    size_t steps = 1;       // Kind::Steps
    double fraction = 1.0;  // Kind::EpochFraction, rounds up to whole steps

    static Periodicity every_steps(size_t s);
    static Periodicity epoch_fraction(double f);
    static Periodicity at_end();

    // "12" -> every 12 steps; "0.5epoch" -> half an epoch; "at-end" -> only
    // the terminal projection.
    static Periodicity parse(std::string_view text);
    std::string to_string() const;

    // Concrete step period for a given schedule. AtEnd maps to a period
    // longer than the run so only the terminal projection fires.
    size_t resolve(size_t steps_per_epoch, size_t total_steps) const;
};

enum class BaseMode : uint8_t { Fix, Update };

BaseMode base_mode_from_string(std::string_view text);
std::string_view to_string(BaseMode mode);

struct SelektConfig {
    double alpha = 0.05;
    Periodicity period;  // default: once per epoch
    TrainConfig train;
    BaseMode base_mode = BaseMode::Fix;
    MaskScope scope = MaskScope::PerLayer;
    bool final_projection = true;
    // Ablation switch: zero Adam moments whenever a projection is applied.
    bool reset_moments_at_projection = false;
    std::vector<std::string> exclude;
};

struct ProjectionRecord {
    size_t step = 0;
    size_t l0_to_base = 0;  // distance to the ORIGINAL base
    double train_loss = 0.0;
};

struct RunLog {
    std::vector<ProjectionRecord> projections;
    size_t total_steps = 0;
    size_t resolved_period = 0;
    double final_loss = 0.0;
    size_t final_l0_to_base = 0;
    std::string to_json() const;
};

struct SelektResult {
    NamedParamSet params;
    RunLog log;
};

// Algorithm: dense minibatch training; every M steps take the delta to the
// reference model, keep only its top-alpha coordinates, snap the rest back.
// fix mode keeps the original base as the reference; update mode re-bases on
// each projected model.
SelektResult selekt_run(const ModelSpec& spec, const NamedParamSet& base,
                        const Dataset& data, const SelektConfig& cfg);

// Dense fine-tuning with no intermediate projection, then exactly one
// projection against base.
SelektResult posthoc_projection_run(const ModelSpec& spec,
                                    const NamedParamSet& base,
                                    const Dataset& data,
                                    const SelektConfig& cfg);

}  // namespace skt
