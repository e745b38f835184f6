// SPDX-License-Identifier: Apache-2.0
#include "skt/toymodel/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "skt/common/errors.hpp"
#include "skt/common/rng.hpp"
#include "skt/kernels/kernels.hpp"

namespace skt {
namespace {

std::string wname(size_t l) { return "W" + std::to_string(l); }
std::string bname(size_t l) { return "b" + std::to_string(l); }

double act_forward(Activation a, double z) {
    return a == Activation::Tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

// Derivative expressed through the activation output (tanh) or input (relu).
double act_backward(Activation a, double z, double out) {
    return a == Activation::Tanh ? 1.0 - out * out : (z > 0.0 ? 1.0 : 0.0);
}

std::vector<double> widen(const std::vector<float>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

Activation activation_from_string(std::string_view text) {
    if (text == "tanh") return Activation::Tanh;
    if (text == "relu") return Activation::Relu;
    throw DomainError("unknown activation: " + std::string(text));
}

std::string_view to_string(Activation a) {
    return a == Activation::Tanh ? "tanh" : "relu";
}

void ModelSpec::validate() const {
    if (layer_sizes.size() < 2)
        throw DomainError("model needs at least input and output layers");
    for (size_t s : layer_sizes)
        if (s < 1) throw DomainError("layer sizes must be >= 1");
}

void Batch::validate(const ModelSpec& spec) const {
    if (inputs.size() != targets.size() || inputs.size() != loss_mask.size())
        throw DomainError("batch field lengths differ");
    if (inputs.empty()) throw DomainError("empty batch");
    for (const auto& x : inputs)
        if (x.size() != spec.input_dim())
            throw DomainError("input width does not match model input dim");
    for (int t : targets)
        if (t < 0 || static_cast<size_t>(t) >= spec.vocab_size())
            throw DomainError("target token id out of vocabulary");
}

NamedParamSet init_model(const ModelSpec& spec) {
    spec.validate();
    Rng rng(spec.init_seed);
    NamedParamSet params;
    for (size_t l = 0; l < spec.num_layers(); ++l) {
        const size_t in = spec.layer_sizes[l];
        const size_t out = spec.layer_sizes[l + 1];
        const float s = static_cast<float>(1.0 / std::sqrt(static_cast<double>(in)));
        std::vector<float> w(out * in);
        for (float& v : w) v = rng.next_float(-s, s);
        std::vector<float> b(out);
        for (float& v : b) v = rng.next_float(-s, s);
        params.add(wname(l), std::move(w));
        params.add(bname(l), std::move(b));
    }
    return params;
}

ModelSpec infer_spec(const NamedParamSet& params, Activation activation) {
    ModelSpec spec;
    spec.activation = activation;
    size_t l = 0;
    while (params.has(wname(l))) {
        const size_t wlen = params.at(wname(l)).size();
        if (!params.has(bname(l)))
            throw DomainError("checkpoint missing bias " + bname(l));
        const size_t out = params.at(bname(l)).size();
        if (out == 0 || wlen % out != 0)
            throw DomainError("checkpoint shapes inconsistent at layer " +
                              std::to_string(l));
        const size_t in = wlen / out;
        if (l == 0) spec.layer_sizes.push_back(in);
        else if (spec.layer_sizes.back() != in)
            throw DomainError("layer width mismatch at layer " + std::to_string(l));
        spec.layer_sizes.push_back(out);
        ++l;
    }
    if (l == 0) throw DomainError("checkpoint holds no W0/b0 layer parameters");
    if (params.size() != 2 * l)
        throw DomainError("checkpoint holds entries beyond W*/b* layers");
    spec.validate();
    return spec;
}

uint64_t params_fingerprint(const NamedParamSet& params) {
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](const void* data, size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ull;
        }
    };
    for (const auto& e : params.entries()) {
        mix(e.name.data(), e.name.size());
        const size_t len = e.values.size();
        mix(&len, sizeof(len));
        mix(e.values.data(), e.values.size() * sizeof(float));
    }
    return h;
}

double forward_loss(const ModelSpec& spec, const NamedParamSet& params,
                    const Batch& batch, ForwardCache& cache) {
    spec.validate();
    batch.validate(spec);

    size_t masked = 0;
    for (uint8_t m : batch.loss_mask) masked += m != 0;
    if (masked == 0) throw DomainError("degenerate batch: loss_mask is all zero");

    const size_t L = spec.num_layers();
    const size_t n = batch.size();
    const kernels::Ops& ops = kernels::active();

    std::vector<std::vector<double>> wd(L), bd(L);
    for (size_t l = 0; l < L; ++l) {
        wd[l] = widen(params.at(wname(l)));
        bd[l] = widen(params.at(bname(l)));
    }

    cache.params_stamp = params_fingerprint(params);
    cache.batch_size = n;
    cache.masked_count = masked;
    cache.acts.assign(L + 1, {});
    cache.zs.assign(L, {});
    cache.probs.assign(n, {});

    cache.acts[0].resize(n * spec.input_dim());
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < spec.input_dim(); ++j)
            cache.acts[0][i * spec.input_dim() + j] = batch.inputs[i][j];

    for (size_t l = 0; l < L; ++l) {
        const size_t in = spec.layer_sizes[l];
        const size_t out = spec.layer_sizes[l + 1];
        cache.zs[l].resize(n * out);
        cache.acts[l + 1].resize(n * out);
        for (size_t i = 0; i < n; ++i) {
            double* z = cache.zs[l].data() + i * out;
            ops.matvec_d(z, wd[l].data(), cache.acts[l].data() + i * in, out, in);
            double* a = cache.acts[l + 1].data() + i * out;
            for (size_t r = 0; r < out; ++r) {
                z[r] += bd[l][r];
                a[r] = (l + 1 == L) ? z[r] : act_forward(spec.activation, z[r]);
            }
        }
    }

    const size_t V = spec.vocab_size();
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double* logits = cache.acts[L].data() + i * V;
        const double mx = *std::max_element(logits, logits + V);
        double denom = 0.0;
        for (size_t v = 0; v < V; ++v) denom += std::exp(logits[v] - mx);
        auto& p = cache.probs[i];
        p.resize(V);
        for (size_t v = 0; v < V; ++v) p[v] = std::exp(logits[v] - mx) / denom;
        if (batch.loss_mask[i])
            total += std::log(denom) - (logits[batch.targets[i]] - mx);
    }
    cache.loss = total / static_cast<double>(masked);
    if (!std::isfinite(cache.loss))
        throw NumericError("non-finite loss");
    return cache.loss;
}

TaskVector backward(const ModelSpec& spec, const NamedParamSet& params,
                    const Batch& batch, const ForwardCache& cache) {
    if (cache.params_stamp != params_fingerprint(params))
        throw DomainError("stale forward cache: parameters changed");
    if (cache.batch_size != batch.size())
        throw DomainError("stale forward cache: batch size changed");

    const size_t L = spec.num_layers();
    const size_t n = batch.size();
    const size_t V = spec.vocab_size();
    const kernels::Ops& ops = kernels::active();

    std::vector<std::vector<double>> wd(L);
    for (size_t l = 0; l < L; ++l) wd[l] = widen(params.at(wname(l)));

    std::vector<std::vector<double>> dw(L), db(L);
    for (size_t l = 0; l < L; ++l) {
        dw[l].assign(spec.layer_sizes[l + 1] * spec.layer_sizes[l], 0.0);
        db[l].assign(spec.layer_sizes[l + 1], 0.0);
    }

    const double inv = 1.0 / static_cast<double>(cache.masked_count);
    std::vector<double> dz, dx;
    for (size_t i = 0; i < n; ++i) {
        dz.assign(V, 0.0);
        if (batch.loss_mask[i]) {
            for (size_t v = 0; v < V; ++v) dz[v] = cache.probs[i][v] * inv;
            dz[batch.targets[i]] -= inv;
        }
        for (size_t l = L; l-- > 0;) {
            const size_t in = spec.layer_sizes[l];
            const size_t out = spec.layer_sizes[l + 1];
            ops.outer_acc_d(dw[l].data(), dz.data(),
                            cache.acts[l].data() + i * in, out, in);
            for (size_t r = 0; r < out; ++r) db[l][r] += dz[r];
            if (l == 0) break;
            dx.assign(in, 0.0);
            ops.matvec_t_acc_d(dx.data(), wd[l].data(), dz.data(), out, in);
            const double* z = cache.zs[l - 1].data() + i * in;
            const double* a = cache.acts[l].data() + i * in;
            dz.resize(in);
            for (size_t j = 0; j < in; ++j)
                dz[j] = dx[j] * act_backward(spec.activation, z[j], a[j]);
        }
    }

    TaskVector grad;
    for (size_t l = 0; l < L; ++l) {
        std::vector<float> gw(dw[l].size()), gb(db[l].size());
        for (size_t j = 0; j < gw.size(); ++j) gw[j] = static_cast<float>(dw[l][j]);
        for (size_t j = 0; j < gb.size(); ++j) gb[j] = static_cast<float>(db[l][j]);
        grad.add(wname(l), std::move(gw));
        grad.add(bname(l), std::move(gb));
    }
    return grad;
}

}  // namespace skt
