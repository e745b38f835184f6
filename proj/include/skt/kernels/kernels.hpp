// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace skt::kernels {

// Hyperparameters for one elementwise AdamW update. lr is the already
// warmup-scaled learning rate; bias_corr* are 1 - beta^t for the current step.
struct AdamwParams {
    float lr;
    float beta1;
    float beta2;
    float eps;
    float weight_decay;
    float bias_corr1;
    float bias_corr2;
};

// One backend's kernel table. Elementwise kernels (sub, scale_add, masked_*,
// adamw_update, mismatch_count, outer_acc, matvec_t_acc) are bit-exact across
// backends: every per-element operation sequence is identical and each step is
// a single correctly-rounded IEEE operation (builds disable FP contraction).
// matvec reduces with a different association order per backend and is
// equivalence-tested within a tolerance instead.
struct Ops {
    const char* name;

    // dst[i] = a[i] - b[i]
    void (*sub)(float* dst, const float* a, const float* b, size_t n);
    // dst[i] = a[i] + s*b[i]
    void (*scale_add)(float* dst, const float* a, float s, const float* b, size_t n);
    // dst[i] = mask[i] ? base[i] + tau[i] : base[i]   (bit copy where mask is 0)
    void (*masked_add)(float* dst, const float* base, const float* tau,
                       const uint8_t* mask, size_t n);
    // dst[i] = mask[i] ? a[i] : b[i]                  (bit copies, no arithmetic)
    void (*masked_select)(float* dst, const uint8_t* mask, const float* a,
                          const float* b, size_t n);
    // count of i where bit patterns of a[i] and b[i] differ
    size_t (*mismatch_count)(const float* a, const float* b, size_t n);
    // in-place AdamW step over p, updating moments m and v
    void (*adamw_update)(float* p, const float* g, float* m, float* v, size_t n,
                         const AdamwParams& hp);
    // y = W x, W row-major rows x cols
    void (*matvec)(float* y, const float* w, const float* x, size_t rows, size_t cols);
    // dx[c] += sum_r W[r,c] * dy[r]
    void (*matvec_t_acc)(float* dx, const float* w, const float* dy, size_t rows,
                         size_t cols);
    // dW[r,c] += dy[r] * x[c]
    void (*outer_acc)(float* dw, const float* dy, const float* x, size_t rows,
                      size_t cols);

    // double variants used by the model forward/backward passes, which run in
    // double so gradient checks are limited by truncation error, not fp32 noise
    void (*matvec_d)(double* y, const double* w, const double* x, size_t rows,
                     size_t cols);
    void (*matvec_t_acc_d)(double* dx, const double* w, const double* dy,
                           size_t rows, size_t cols);
    void (*outer_acc_d)(double* dw, const double* dy, const double* x, size_t rows,
                        size_t cols);
};

const Ops& scalar_ops();

bool avx2_available();
const Ops& avx2_ops();  // valid to call only when avx2_available()

bool neon_available();
const Ops& neon_ops();  // valid to call only when neon_available()

// Backend picked once at startup: best available, unless the SKT_KERNELS
// environment variable ("scalar", "avx2", "neon") forces one.
const Ops& active();

// All backends usable on this machine, scalar first.
std::vector<const Ops*> available_backends();

}  // namespace skt::kernels
