// SPDX-License-Identifier: Apache-2.0
#include "skt/paramvec/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skt/common/errors.hpp"
#include "skt/kernels/kernels.hpp"

namespace skt {
namespace {

void check_alpha(double alpha, const char* what) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError(std::string(what) + " must lie in [0,1]");
}

// Magnitude key for selection: NaN sorts below everything so it is never
// picked ahead of a real value.
double abs_key(float v) {
    const double a = std::fabs(static_cast<double>(v));
    return std::isnan(a) ? -std::numeric_limits<double>::infinity() : a;
}

// Flat indices of the k largest-|v| coordinates of a concatenated view,
// ties toward the lower index. `keys` has one entry per flat coordinate.
std::vector<size_t> select_topk(const std::vector<double>& keys, size_t k) {
    std::vector<size_t> idx(keys.size());
    size_t selectable = 0;
    for (size_t i = 0; i < idx.size(); ++i) {
        idx[i] = i;
        if (keys[i] != -std::numeric_limits<double>::infinity()) ++selectable;
    }
    // NaN keys (mapped to -inf) stay unselected even when k covers everything.
    if (k > selectable) k = selectable;
    std::partial_sort(idx.begin(), idx.begin() + static_cast<ptrdiff_t>(k),
                      idx.end(), [&](size_t a, size_t b) {
                          if (keys[a] != keys[b]) return keys[a] > keys[b];
                          return a < b;
                      });
    idx.resize(k);
    return idx;
}

}  // namespace

size_t floor_frac(double alpha, size_t n) {
    const double k = std::floor(alpha * static_cast<double>(n));
    if (k <= 0.0) return 0;
    if (k >= static_cast<double>(n)) return n;
    return static_cast<size_t>(k);
}

TaskVector subtract(const NamedParamSet& theta, const NamedParamSet& base) {
    NamedParamSet::check_aligned(theta, base);
    const kernels::Ops& ops = kernels::active();
    TaskVector tau;
    for (size_t i = 0; i < theta.size(); ++i) {
        const auto& et = theta.entry(i);
        std::vector<float> d(et.values.size());
        ops.sub(d.data(), et.values.data(), base.entry(i).values.data(),
                d.size());
        tau.add(et.name, std::move(d));
    }
    return tau;
}

SparseMask topk_mask(const TaskVector& tau, double alpha, MaskScope scope,
                     const std::vector<std::string>& exclude) {
    check_alpha(alpha, "alpha");
    const auto excluded = [&](const std::string& name) {
        return std::find(exclude.begin(), exclude.end(), name) != exclude.end();
    };

    SparseMask mask;
    mask.scope = scope;
    mask.alpha = alpha;
    for (const auto& e : tau.entries())
        mask.entries.push_back({e.name, std::vector<uint8_t>(e.values.size(), 0)});

    if (scope == MaskScope::PerLayer) {
        for (size_t i = 0; i < tau.size(); ++i) {
            const auto& e = tau.entry(i);
            if (excluded(e.name)) continue;
            std::vector<double> keys(e.values.size());
            for (size_t j = 0; j < keys.size(); ++j) keys[j] = abs_key(e.values[j]);
            for (size_t j : select_topk(keys, floor_frac(alpha, keys.size())))
                mask.entries[i].bits[j] = 1;
        }
        return mask;
    }

    // Global scope: one ranking over the concatenation of included entries.
    std::vector<double> keys;
    std::vector<std::pair<size_t, size_t>> where;  // flat -> (entry, offset)
    for (size_t i = 0; i < tau.size(); ++i) {
        const auto& e = tau.entry(i);
        if (excluded(e.name)) continue;
        for (size_t j = 0; j < e.values.size(); ++j) {
            keys.push_back(abs_key(e.values[j]));
            where.emplace_back(i, j);
        }
    }
    for (size_t flat : select_topk(keys, floor_frac(alpha, keys.size())))
        mask.entries[where[flat].first].bits[where[flat].second] = 1;
    return mask;
}

NamedParamSet project(const NamedParamSet& base, const TaskVector& tau,
                      const SparseMask& mask) {
    NamedParamSet::check_aligned(base, tau);
    mask.check_aligned_with(base);
    const kernels::Ops& ops = kernels::active();
    NamedParamSet out;
    for (size_t i = 0; i < base.size(); ++i) {
        const auto& eb = base.entry(i);
        std::vector<float> v(eb.values.size());
        ops.masked_add(v.data(), eb.values.data(), tau.entry(i).values.data(),
                       mask.entries[i].bits.data(), v.size());
        out.add(eb.name, std::move(v));
    }
    return out;
}

size_t l0_distance(const NamedParamSet& a, const NamedParamSet& b) {
    NamedParamSet::check_aligned(a, b);
    const kernels::Ops& ops = kernels::active();
    size_t count = 0;
    for (size_t i = 0; i < a.size(); ++i)
        count += ops.mismatch_count(a.entry(i).values.data(),
                                    b.entry(i).values.data(),
                                    a.entry(i).values.size());
    return count;
}

size_t mask_capacity(double alpha, const NamedParamSet& shape, MaskScope scope) {
    check_alpha(alpha, "alpha");
    if (scope == MaskScope::Global) return floor_frac(alpha, shape.total_length());
    size_t cap = 0;
    for (const auto& e : shape.entries()) cap += floor_frac(alpha, e.values.size());
    return cap;
}

TaskVector ties_trim(const TaskVector& tv, double density) {
    check_alpha(density, "density");
    std::vector<double> keys;
    keys.reserve(tv.total_length());
    for (const auto& e : tv.entries())
        for (float v : e.values) keys.push_back(abs_key(v));

    std::vector<uint8_t> keep(keys.size(), 0);
    for (size_t flat : select_topk(keys, floor_frac(density, keys.size())))
        keep[flat] = 1;

    TaskVector out;
    size_t flat = 0;
    for (const auto& e : tv.entries()) {
        std::vector<float> v(e.values.size(), 0.0f);
        for (size_t j = 0; j < v.size(); ++j, ++flat)
            if (keep[flat]) v[j] = e.values[j];
        out.add(e.name, std::move(v));
    }
    return out;
}

TaskVector ties_elect_merge(const std::vector<TaskVector>& trimmed) {
    if (trimmed.empty()) throw DomainError("ties_elect_merge: no task vectors");
    for (size_t t = 1; t < trimmed.size(); ++t)
        NamedParamSet::check_aligned(trimmed[0], trimmed[t]);

    TaskVector out;
    for (size_t i = 0; i < trimmed[0].size(); ++i) {
        const size_t n = trimmed[0].entry(i).values.size();
        std::vector<float> merged(n, 0.0f);
        for (size_t j = 0; j < n; ++j) {
            double pos = 0.0, neg = 0.0;
            for (const auto& tv : trimmed) {
                const double v = tv.entry(i).values[j];
                if (v > 0.0) pos += v;
                else if (v < 0.0) neg += -v;
            }
            const bool positive = pos >= neg;  // tie elects positive
            double sum = 0.0;
            size_t agreeing = 0;
            for (const auto& tv : trimmed) {
                const double v = tv.entry(i).values[j];
                if ((positive && v > 0.0) || (!positive && v < 0.0)) {
                    sum += v;
                    ++agreeing;
                }
            }
            merged[j] = agreeing == 0
                            ? 0.0f
                            : static_cast<float>(sum / static_cast<double>(agreeing));
        }
        out.add(trimmed[0].entry(i).name, std::move(merged));
    }
    return out;
}

NamedParamSet ties_merge(const NamedParamSet& base,
                         const std::vector<NamedParamSet>& tuned,
                         const MergeConfig& cfg) {
    if (tuned.empty()) throw DomainError("ties_merge: no tuned models");
    if (!(cfg.weight >= 0.0)) throw DomainError("weight must be >= 0");
    check_alpha(cfg.density, "density");
    for (const auto& t : tuned) NamedParamSet::check_aligned(base, t);

    std::vector<TaskVector> trimmed;
    trimmed.reserve(tuned.size());
    for (const auto& t : tuned)
        trimmed.push_back(ties_trim(subtract(t, base), cfg.density));
    const TaskVector merged = ties_elect_merge(trimmed);

    const kernels::Ops& ops = kernels::active();
    const float w = static_cast<float>(cfg.weight);
    NamedParamSet out;
    for (size_t i = 0; i < base.size(); ++i) {
        const auto& eb = base.entry(i);
        std::vector<float> v(eb.values.size());
        ops.scale_add(v.data(), eb.values.data(), w,
                      merged.entry(i).values.data(), v.size());
        out.add(eb.name, std::move(v));
    }
    return out;
}

}  // namespace skt
