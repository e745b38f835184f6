// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "skt/paramvec/param_set.hpp"

namespace skt {

enum class Activation : uint8_t { Tanh, Relu };

Activation activation_from_string(std::string_view text);
std::string_view to_string(Activation a);

// MLP classifier: layer_sizes = [input dim, hidden..., vocab size].
// Parameters are named W0,b0,W1,b1,... with W row-major (out x in).
struct ModelSpec {
    std::vector<size_t> layer_sizes;
    Activation activation = Activation::Tanh;
    uint64_t init_seed = 0;

    size_t num_layers() const { return layer_sizes.size() - 1; }
    size_t input_dim() const { return layer_sizes.front(); }
    size_t vocab_size() const { return layer_sizes.back(); }
    void validate() const;  // throws DomainError
};

// One position per sample: a feature vector, a target token id, and a flag
// saying whether the position contributes to the loss.
struct Batch {
    std::vector<std::vector<float>> inputs;
    std::vector<int> targets;
    std::vector<uint8_t> loss_mask;

    size_t size() const { return inputs.size(); }
    void validate(const ModelSpec& spec) const;
};

NamedParamSet init_model(const ModelSpec& spec);

// Recover layer sizes from parameter names/lengths (in0 = |W0|/|b0|, ...).
ModelSpec infer_spec(const NamedParamSet& params, Activation activation);

// Content hash used to tie a ForwardCache to the exact parameters that
// produced it.
uint64_t params_fingerprint(const NamedParamSet& params);

// Forward/backward run in double internally; parameters stay fp32 and
// gradients are rounded back to fp32 at the end.
struct ForwardCache {
    uint64_t params_stamp = 0;
    size_t batch_size = 0;
    size_t masked_count = 0;
    double loss = 0.0;
    // acts[0] = inputs; acts[l+1] = activation output of layer l (the last
    // level holds raw logits). zs[l] = pre-activation of layer l. Flattened
    // row-major [sample][unit].
    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> zs;
    std::vector<std::vector<double>> probs;  // softmax per sample (all samples)
};

double forward_loss(const ModelSpec& spec, const NamedParamSet& params,
                    const Batch& batch, ForwardCache& cache);

// Analytic gradient of forward_loss w.r.t. every parameter. The cache must
// come from a forward pass over the same parameters (stamp-checked).
TaskVector backward(const ModelSpec& spec, const NamedParamSet& params,
                    const Batch& batch, const ForwardCache& cache);

}  // namespace skt
