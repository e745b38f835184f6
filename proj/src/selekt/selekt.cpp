// SPDX-License-Identifier: Apache-2.0
#include "skt/selekt/selekt.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "skt/common/errors.hpp"
#include "skt/kernels/kernels.hpp"

namespace skt {

Periodicity Periodicity::every_steps(size_t s) {
    if (s == 0) throw DomainError("projection period must be >= 1 step");
    Periodicity p;
    p.kind = Kind::Steps;
    p.steps = s;
    return p;
}

Periodicity Periodicity::epoch_fraction(double f) {
    if (!(f > 0.0)) throw DomainError("epoch fraction must be > 0");
    Periodicity p;
    p.kind = Kind::EpochFraction;
    p.fraction = f;
    return p;
}

Periodicity Periodicity::at_end() {
    Periodicity p;
    p.kind = Kind::AtEnd;
    return p;
}

Periodicity Periodicity::parse(std::string_view text) {
    if (text == "at-end" || text == "at_end") return at_end();
    if (text.size() > 5 && text.substr(text.size() - 5) == "epoch") {
        const std::string num(text.substr(0, text.size() - 5));
        try {
            return epoch_fraction(std::stod(num));
        } catch (const std::exception&) {
            throw DomainError("bad epoch fraction: " + std::string(text));
        }
    }
    size_t steps = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), steps);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw DomainError("bad period: " + std::string(text) +
                          " (want <steps>, <frac>epoch, or at-end)");
    return every_steps(steps);
}

std::string Periodicity::to_string() const {
    switch (kind) {
        case Kind::Steps: return std::to_string(steps);
        case Kind::EpochFraction: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%gepoch", fraction);
            return buf;
        }
        case Kind::AtEnd: return "at-end";
    }
    return "?";
}

size_t Periodicity::resolve(size_t steps_per_epoch, size_t total_steps) const {
    switch (kind) {
        case Kind::Steps:
            return steps;
        case Kind::EpochFraction: {
            const double raw = std::ceil(fraction * static_cast<double>(steps_per_epoch));
            return raw < 1.0 ? 1 : static_cast<size_t>(raw);
        }
        case Kind::AtEnd:
            return total_steps + 1;
    }
    return 1;
}

BaseMode base_mode_from_string(std::string_view text) {
    if (text == "fix") return BaseMode::Fix;
    if (text == "update") return BaseMode::Update;
    throw DomainError("unknown base mode: " + std::string(text));
}

std::string_view to_string(BaseMode mode) {
    return mode == BaseMode::Fix ? "fix" : "update";
}

std::string RunLog::to_json() const {
    nlohmann::json j;
    j["total_steps"] = total_steps;
    j["resolved_period"] = resolved_period;
    j["final_loss"] = final_loss;
    j["final_l0_to_base"] = final_l0_to_base;
    j["projections"] = nlohmann::json::array();
    for (const auto& p : projections)
        j["projections"].push_back({{"step", p.step},
                                    {"l0_to_base", p.l0_to_base},
                                    {"train_loss", p.train_loss}});
    return j.dump(2);
}

namespace {

void check_selekt_config(const SelektConfig& cfg) {
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
        throw DomainError("alpha must lie in [0,1]");
    if (cfg.train.epochs == 0) throw DomainError("epochs must be >= 1");
}

// theta <- (mask ? theta : ref), which is ref + mask.tau with the selected
// coordinates copied from theta bit-for-bit. alpha=1 is therefore exactly
// the identity, and snapped-back coordinates are bit-equal to ref.
void apply_projection(NamedParamSet& theta, const NamedParamSet& ref,
                      const SparseMask& mask) {
    const kernels::Ops& ops = kernels::active();
    for (size_t i = 0; i < theta.size(); ++i) {
        auto& v = theta.entry(i).values;
        ops.masked_select(v.data(), mask.entries[i].bits.data(), v.data(),
                          ref.entry(i).values.data(), v.size());
    }
}

void zero_moments(OptimizerState& opt) {
    for (size_t i = 0; i < opt.m.size(); ++i) {
        auto& m = opt.m.entry(i).values;
        auto& v = opt.v.entry(i).values;
        std::fill(m.begin(), m.end(), 0.0f);
        std::fill(v.begin(), v.end(), 0.0f);
    }
}

}  // namespace

SelektResult selekt_run(const ModelSpec& spec, const NamedParamSet& base,
                        const Dataset& data, const SelektConfig& cfg) {
    check_selekt_config(cfg);
    if (data.size() == 0) throw DomainError("dataset is empty");

    const size_t spe = steps_per_epoch(data.size(), cfg.train.batch_size);
    const size_t total = spe * cfg.train.epochs;
    const size_t M = cfg.period.resolve(spe, total);

    SelektResult result;
    result.log.resolved_period = M;

    NamedParamSet ref = base;  // projection reference; re-based in update mode
    size_t last_projection_step = 0;

    auto project_now = [&](NamedParamSet& params, OptimizerState& opt,
                           const StepInfo& info) {
        const TaskVector tau = subtract(params, ref);
        const SparseMask mask = topk_mask(tau, cfg.alpha, cfg.scope, cfg.exclude);
        apply_projection(params, ref, mask);
        if (cfg.reset_moments_at_projection) zero_moments(opt);
        if (cfg.base_mode == BaseMode::Update) ref = params;
        result.log.projections.push_back(
            {info.step, l0_distance(params, base), info.loss});
        last_projection_step = info.step;
    };

    StepInfo last_info;
    TrainResult tr = run_training(
        spec, base, data, cfg.train, nullptr,
        [&](NamedParamSet& params, OptimizerState& opt, const StepInfo& info) {
            last_info = info;
            if (info.step % M == 0) project_now(params, opt, info);
        });

    // Terminal projection so the sparsity guarantee holds for ragged step
    // counts (a projection at the exact last step already satisfies it).
    NamedParamSet params = std::move(tr.params);
    if (cfg.final_projection && last_projection_step != tr.total_steps) {
        OptimizerState dummy;  // moments irrelevant after the last step
        dummy.m = params;      // aligned placeholders
        dummy.v = params;
        project_now(params, dummy, last_info);
    }

    result.log.total_steps = tr.total_steps;
    result.log.final_loss = tr.step_losses.empty() ? 0.0 : tr.step_losses.back();
    result.log.final_l0_to_base = l0_distance(params, base);
    result.params = std::move(params);
    return result;
}

SelektResult posthoc_projection_run(const ModelSpec& spec,
                                    const NamedParamSet& base,
                                    const Dataset& data,
                                    const SelektConfig& cfg) {
    check_selekt_config(cfg);

    TrainResult tr = run_training(spec, base, data, cfg.train);

    const TaskVector tau = subtract(tr.params, base);
    const SparseMask mask = topk_mask(tau, cfg.alpha, cfg.scope, cfg.exclude);
    NamedParamSet params = std::move(tr.params);
    apply_projection(params, base, mask);

    SelektResult result;
    result.log.total_steps = tr.total_steps;
    result.log.resolved_period = tr.total_steps + 1;
    result.log.final_loss = tr.step_losses.empty() ? 0.0 : tr.step_losses.back();
    result.log.final_l0_to_base = l0_distance(params, base);
    result.log.projections.push_back(
        {tr.total_steps, result.log.final_l0_to_base, result.log.final_loss});
    result.params = std::move(params);
    return result;
}

}  // namespace skt
