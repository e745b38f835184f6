// SPDX-License-Identifier: Apache-2.0
//
// Low-rank adapters over the toy MLP. Training runs the explicit adapter
// path (z = W.h + b + scale * B.(A.drop(h))) rather than materializing the
// effective weight, mirroring how adapters avoid touching base weights; a
// separate merge path materializes base + scale*B.A for deployment.

#include <algorithm>
#include <cmath>

#include "skt/baselines/baselines.hpp"
#include "skt/common/errors.hpp"
#include "skt/common/rng.hpp"
#include "skt/kernels/kernels.hpp"

namespace skt {
namespace {

std::string wname(size_t l) { return "W" + std::to_string(l); }
std::string bname(size_t l) { return "b" + std::to_string(l); }
std::string aname(size_t l) { return "A" + std::to_string(l); }
std::string b_adapter_name(size_t l) { return "B" + std::to_string(l); }

std::vector<double> widen(const std::vector<float>& v) {
    return {v.begin(), v.end()};
}

double act_forward(Activation a, double z) {
    return a == Activation::Tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

double act_backward(Activation a, double z, double out) {
    return a == Activation::Tanh ? 1.0 - out * out : (z > 0.0 ? 1.0 : 0.0);
}

// Which layers carry adapters, in layer order.
std::vector<size_t> target_layers(const ModelSpec& spec, const LoraSpec& lora) {
    std::vector<size_t> layers;
    if (lora.targets.empty()) {
        for (size_t l = 0; l < spec.num_layers(); ++l) layers.push_back(l);
        return layers;
    }
    for (size_t l = 0; l < spec.num_layers(); ++l)
        if (std::find(lora.targets.begin(), lora.targets.end(), wname(l)) !=
            lora.targets.end())
            layers.push_back(l);
    if (layers.size() != lora.targets.size())
        throw DomainError("lora target list names a missing weight matrix");
    return layers;
}

void check_rank(const ModelSpec& spec, const LoraSpec& lora,
                const std::vector<size_t>& layers) {
    for (size_t l : layers) {
        const size_t lim = std::min(spec.layer_sizes[l], spec.layer_sizes[l + 1]);
        if (lora.rank > lim)
            throw DomainError("lora rank " + std::to_string(lora.rank) +
                              " exceeds min dimension of " + wname(l));
    }
}

// Double-precision view of everything the adapter forward/backward touches.
struct LoraWork {
    std::vector<size_t> layers;               // targeted layer ids
    std::vector<int> slot;                    // layer -> adapter slot or -1
    std::vector<std::vector<double>> w, b;    // base, per layer
    std::vector<std::vector<double>> a, bb;   // adapters, per slot
};

LoraWork make_work(const ModelSpec& spec, const NamedParamSet& base,
                   const NamedParamSet& adapters, const LoraSpec& lora) {
    LoraWork wk;
    wk.layers = target_layers(spec, lora);
    wk.slot.assign(spec.num_layers(), -1);
    for (size_t s = 0; s < wk.layers.size(); ++s) wk.slot[wk.layers[s]] = static_cast<int>(s);
    wk.w.resize(spec.num_layers());
    wk.b.resize(spec.num_layers());
    for (size_t l = 0; l < spec.num_layers(); ++l) {
        wk.w[l] = widen(base.at(wname(l)));
        wk.b[l] = widen(base.at(bname(l)));
    }
    wk.a.resize(wk.layers.size());
    wk.bb.resize(wk.layers.size());
    for (size_t s = 0; s < wk.layers.size(); ++s) {
        wk.a[s] = widen(adapters.at(aname(wk.layers[s])));
        wk.bb[s] = widen(adapters.at(b_adapter_name(wk.layers[s])));
    }
    return wk;
}

}  // namespace

LoraSpec paper_preset_lora() {
    LoraSpec spec;
    spec.rank = 64;
    spec.scale = 16.0 / 64.0;
    spec.dropout = 0.05;
    return spec;
}

NamedParamSet init_lora(const ModelSpec& spec, const LoraSpec& lora) {
    spec.validate();
    const auto layers = target_layers(spec, lora);
    check_rank(spec, lora, layers);

    NamedParamSet adapters;
    for (size_t l : layers) {
        const size_t in = spec.layer_sizes[l];
        const size_t out = spec.layer_sizes[l + 1];
        Rng rng(derive_seed(lora.init_seed, l));
        const float s = static_cast<float>(1.0 / std::sqrt(static_cast<double>(in)));
        std::vector<float> a(lora.rank * in);
        for (float& v : a) v = rng.next_float(-s, s);
        adapters.add(aname(l), std::move(a));
        adapters.add(b_adapter_name(l), std::vector<float>(out * lora.rank, 0.0f));
    }
    return adapters;
}

NamedParamSet merge_lora(const ModelSpec& spec, const NamedParamSet& base,
                         const NamedParamSet& adapters, const LoraSpec& lora) {
    spec.validate();
    const auto layers = target_layers(spec, lora);
    check_rank(spec, lora, layers);

    NamedParamSet merged;
    for (size_t l = 0; l < spec.num_layers(); ++l) {
        std::vector<float> w = base.at(wname(l));
        if (std::find(layers.begin(), layers.end(), l) != layers.end() &&
            lora.rank > 0) {
            const size_t in = spec.layer_sizes[l];
            const size_t out = spec.layer_sizes[l + 1];
            const std::vector<double> a = widen(adapters.at(aname(l)));
            const std::vector<double> bb = widen(adapters.at(b_adapter_name(l)));
            for (size_t r = 0; r < out; ++r)
                for (size_t c = 0; c < in; ++c) {
                    double dot = 0.0;
                    for (size_t k = 0; k < lora.rank; ++k)
                        dot += bb[r * lora.rank + k] * a[k * in + c];
                    w[r * in + c] = static_cast<float>(
                        static_cast<double>(w[r * in + c]) + lora.scale * dot);
                }
        }
        merged.add(wname(l), std::move(w));
        merged.add(bname(l), base.at(bname(l)));
    }
    return merged;
}

std::vector<double> lora_forward_logits(const ModelSpec& spec,
                                        const NamedParamSet& base,
                                        const NamedParamSet& adapters,
                                        const LoraSpec& lora,
                                        const std::vector<float>& x) {
    spec.validate();
    if (x.size() != spec.input_dim())
        throw DomainError("input width does not match model input dim");
    const auto layers = target_layers(spec, lora);
    check_rank(spec, lora, layers);
    const LoraWork wk = make_work(spec, base, adapters, lora);
    const kernels::Ops& ops = kernels::active();

    std::vector<double> h(x.begin(), x.end());
    for (size_t l = 0; l < spec.num_layers(); ++l) {
        const size_t in = spec.layer_sizes[l];
        const size_t out = spec.layer_sizes[l + 1];
        std::vector<double> z(out);
        ops.matvec_d(z.data(), wk.w[l].data(), h.data(), out, in);
        for (size_t r = 0; r < out; ++r) z[r] += wk.b[l][r];
        if (wk.slot[l] >= 0 && lora.rank > 0) {
            const auto& a = wk.a[static_cast<size_t>(wk.slot[l])];
            const auto& bb = wk.bb[static_cast<size_t>(wk.slot[l])];
            std::vector<double> u(lora.rank);
            ops.matvec_d(u.data(), a.data(), h.data(), lora.rank, in);
            std::vector<double> du(out);
            ops.matvec_d(du.data(), bb.data(), u.data(), out, lora.rank);
            for (size_t r = 0; r < out; ++r) z[r] += lora.scale * du[r];
        }
        if (l + 1 == spec.num_layers()) return z;
        h.resize(out);
        for (size_t r = 0; r < out; ++r) h[r] = act_forward(spec.activation, z[r]);
    }
    return h;  // unreachable for valid specs
}

LoraRunResult lora_run(const ModelSpec& spec, const NamedParamSet& base,
                       const Dataset& data, const TrainConfig& cfg,
                       const LoraSpec& lora) {
    spec.validate();
    if (data.size() == 0) throw DomainError("dataset is empty");
    const auto layers = target_layers(spec, lora);
    check_rank(spec, lora, layers);

    LoraRunResult result;
    if (lora.rank == 0) {
        result.merged = base;
        return result;
    }

    NamedParamSet adapters = init_lora(spec, lora);
    AdamwConfig opt_cfg = cfg.optimizer;
    if (opt_cfg.total_planned_steps == 0)
        opt_cfg.total_planned_steps = planned_steps(data.size(), cfg);
    OptimizerState opt = make_optimizer(adapters, opt_cfg);

    const size_t L = spec.num_layers();
    const size_t V = spec.vocab_size();
    const kernels::Ops& ops = kernels::active();
    Rng drop_rng(derive_seed(cfg.shuffle_seed, 0x6c6f7261ull));  // dropout stream

    size_t total_steps = 0;
    const size_t cap = planned_steps(data.size(), cfg);
    for (size_t epoch = 0; epoch < cfg.epochs && total_steps < cap; ++epoch) {
        for (Batch& batch : make_batches(data, cfg.batch_size, cfg.shuffle_seed, epoch)) {
            if (total_steps >= cap) break;
            batch.validate(spec);
            size_t masked = 0;
            for (uint8_t m : batch.loss_mask) masked += m != 0;
            if (masked == 0) throw DomainError("degenerate batch: loss_mask is all zero");

            const LoraWork wk = make_work(spec, base, adapters, lora);
            const size_t n = batch.size();

            // Forward, caching activations, adapter inputs, and projections.
            // dfac holds the per-element dropout jacobian (0 or 1/keep).
            std::vector<std::vector<double>> acts(L + 1), zs(L);
            std::vector<std::vector<double>> hdrop(wk.layers.size());
            std::vector<std::vector<double>> dfac(wk.layers.size());
            std::vector<std::vector<double>> us(wk.layers.size());
            acts[0].resize(n * spec.input_dim());
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < spec.input_dim(); ++j)
                    acts[0][i * spec.input_dim() + j] = batch.inputs[i][j];

            for (size_t l = 0; l < L; ++l) {
                const size_t in = spec.layer_sizes[l];
                const size_t out = spec.layer_sizes[l + 1];
                zs[l].resize(n * out);
                acts[l + 1].resize(n * out);
                const int s = wk.slot[l];
                if (s >= 0) {
                    hdrop[static_cast<size_t>(s)].resize(n * in);
                    dfac[static_cast<size_t>(s)].resize(n * in);
                    us[static_cast<size_t>(s)].resize(n * lora.rank);
                }
                for (size_t i = 0; i < n; ++i) {
                    const double* h = acts[l].data() + i * in;
                    double* z = zs[l].data() + i * out;
                    ops.matvec_d(z, wk.w[l].data(), h, out, in);
                    for (size_t r = 0; r < out; ++r) z[r] += wk.b[l][r];
                    if (s >= 0) {
                        double* hd = hdrop[static_cast<size_t>(s)].data() + i * in;
                        double* fac = dfac[static_cast<size_t>(s)].data() + i * in;
                        if (lora.dropout > 0.0) {
                            const double keep = 1.0 - lora.dropout;
                            for (size_t j = 0; j < in; ++j) {
                                fac[j] = drop_rng.next_double() < lora.dropout
                                             ? 0.0
                                             : 1.0 / keep;
                                hd[j] = h[j] * fac[j];
                            }
                        } else {
                            std::copy(h, h + in, hd);
                            std::fill(fac, fac + in, 1.0);
                        }
                        double* u = us[static_cast<size_t>(s)].data() + i * lora.rank;
                        ops.matvec_d(u, wk.a[static_cast<size_t>(s)].data(), hd,
                                     lora.rank, in);
                        std::vector<double> bu(out);
                        ops.matvec_d(bu.data(), wk.bb[static_cast<size_t>(s)].data(),
                                     u, out, lora.rank);
                        for (size_t r = 0; r < out; ++r) z[r] += lora.scale * bu[r];
                    }
                    double* aout = acts[l + 1].data() + i * out;
                    for (size_t r = 0; r < out; ++r)
                        aout[r] = (l + 1 == L) ? z[r]
                                               : act_forward(spec.activation, z[r]);
                }
            }

            // Loss + backward through the adapter path only.
            double total_loss = 0.0;
            std::vector<std::vector<double>> da(wk.layers.size()), dbb(wk.layers.size());
            for (size_t s = 0; s < wk.layers.size(); ++s) {
                da[s].assign(wk.a[s].size(), 0.0);
                dbb[s].assign(wk.bb[s].size(), 0.0);
            }
            const double inv = 1.0 / static_cast<double>(masked);
            std::vector<double> dz, dh, du;
            for (size_t i = 0; i < n; ++i) {
                const double* logits = acts[L].data() + i * V;
                const double mx = *std::max_element(logits, logits + V);
                double denom = 0.0;
                for (size_t v = 0; v < V; ++v) denom += std::exp(logits[v] - mx);
                dz.assign(V, 0.0);
                if (batch.loss_mask[i]) {
                    total_loss += std::log(denom) - (logits[batch.targets[i]] - mx);
                    for (size_t v = 0; v < V; ++v)
                        dz[v] = std::exp(logits[v] - mx) / denom * inv;
                    dz[batch.targets[i]] -= inv;
                }
                for (size_t l = L; l-- > 0;) {
                    const size_t in = spec.layer_sizes[l];
                    const size_t out = spec.layer_sizes[l + 1];
                    const int s = wk.slot[l];
                    dh.assign(in, 0.0);
                    ops.matvec_t_acc_d(dh.data(), wk.w[l].data(), dz.data(), out, in);
                    if (s >= 0) {
                        const auto si = static_cast<size_t>(s);
                        const double* u = us[si].data() + i * lora.rank;
                        const double* hd = hdrop[si].data() + i * in;
                        // dB += scale * dz u^T
                        std::vector<double> sdz(out);
                        for (size_t r = 0; r < out; ++r) sdz[r] = lora.scale * dz[r];
                        ops.outer_acc_d(dbb[si].data(), sdz.data(), u, out, lora.rank);
                        // du = scale * B^T dz
                        du.assign(lora.rank, 0.0);
                        ops.matvec_t_acc_d(du.data(), wk.bb[si].data(), sdz.data(),
                                           out, lora.rank);
                        // dA += du hdrop^T
                        ops.outer_acc_d(da[si].data(), du.data(), hd, lora.rank, in);
                        // dh += A^T du through the dropout jacobian
                        std::vector<double> dhd(in, 0.0);
                        ops.matvec_t_acc_d(dhd.data(), wk.a[si].data(), du.data(),
                                           lora.rank, in);
                        const double* fac = dfac[si].data() + i * in;
                        for (size_t j = 0; j < in; ++j) dh[j] += dhd[j] * fac[j];
                    }
                    if (l == 0) break;
                    const double* z = zs[l - 1].data() + i * in;
                    const double* aprev = acts[l].data() + i * in;
                    dz.resize(in);
                    for (size_t j = 0; j < in; ++j)
                        dz[j] = dh[j] * act_backward(spec.activation, z[j], aprev[j]);
                }
            }
            result.step_losses.push_back(total_loss * inv);

            TaskVector grad;
            for (size_t s = 0; s < wk.layers.size(); ++s) {
                std::vector<float> ga(da[s].size()), gb(dbb[s].size());
                for (size_t j = 0; j < ga.size(); ++j) ga[j] = static_cast<float>(da[s][j]);
                for (size_t j = 0; j < gb.size(); ++j) gb[j] = static_cast<float>(dbb[s][j]);
                grad.add(aname(wk.layers[s]), std::move(ga));
                grad.add(b_adapter_name(wk.layers[s]), std::move(gb));
            }
            adamw_step(adapters, grad, opt);
            ++total_steps;
        }
    }

    result.merged = merge_lora(spec, base, adapters, lora);
    result.adapters = std::move(adapters);
    return result;
}

}  // namespace skt
