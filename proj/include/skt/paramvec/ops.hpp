// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "skt/paramvec/param_set.hpp"

namespace skt {

// k = floor(alpha * n) computed in double; shared by top-k and TIES trim so
// every caller rounds the same way.
size_t floor_frac(double alpha, size_t n);

// Elementwise theta - base. Inputs must be aligned.
TaskVector subtract(const NamedParamSet& theta, const NamedParamSet& base);

// Mask of the floor(alpha*N) largest-|tau| coordinates (global scope) or the
// per-name floor(alpha*n_i) largest (per-layer scope). Ties break toward the
// lower flat index; NaN magnitudes are never selected. Names in `exclude`
// get all-zero masks and do not count toward N.
SparseMask topk_mask(const TaskVector& tau, double alpha, MaskScope scope,
                     const std::vector<std::string>& exclude = {});

// base + mask ⊙ tau. Masked-off coordinates copy base bit-exactly.
NamedParamSet project(const NamedParamSet& base, const TaskVector& tau,
                      const SparseMask& mask);

// Count of coordinates whose bit patterns differ.
size_t l0_distance(const NamedParamSet& a, const NamedParamSet& b);

// Upper bound on mask popcount for a given alpha: floor(alpha*N) globally,
// sum of per-name floors per-layer.
size_t mask_capacity(double alpha, const NamedParamSet& shape, MaskScope scope);

// TIES building blocks, exposed for testing.
// Zero all but the floor(density*N) largest-|v| coordinates (global).
TaskVector ties_trim(const TaskVector& tv, double density);
// Per coordinate: elect the sign with the larger summed magnitude across the
// trimmed vectors (tie -> positive), then average the values agreeing with
// that sign (no agreeing value -> 0).
TaskVector ties_elect_merge(const std::vector<TaskVector>& trimmed);

// Full TIES over tuned checkpoints: form task vectors against base, trim
// each, elect-merge, then base + weight * merged.
NamedParamSet ties_merge(const NamedParamSet& base,
                         const std::vector<NamedParamSet>& tuned,
                         const MergeConfig& cfg);

}  // namespace skt
