// SPDX-License-Identifier: Apache-2.0
//
// NEON (AArch64) kernels. Same rounding contract as the AVX2 backend: plain
// mul/add pairs, no fused ops, scalar tails.

#include "skt/kernels/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

#include <cmath>
#include <cstring>

namespace skt::kernels {
namespace {

inline uint32x4_t mask_bits4(const uint8_t* mask) {
    const uint32_t lanes[4] = {mask[0] ? ~0u : 0u, mask[1] ? ~0u : 0u,
                               mask[2] ? ~0u : 0u, mask[3] ? ~0u : 0u};
    return vld1q_u32(lanes);
}

void sub_neon(float* dst, const float* a, const float* b, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        vst1q_f32(dst + i, vsubq_f32(vld1q_f32(a + i), vld1q_f32(b + i)));
    }
    for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void scale_add_neon(float* dst, const float* a, float s, const float* b, size_t n) {
    const float32x4_t vs = vdupq_n_f32(s);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t prod = vmulq_f32(vs, vld1q_f32(b + i));
        vst1q_f32(dst + i, vaddq_f32(vld1q_f32(a + i), prod));
    }
    for (; i < n; ++i) dst[i] = a[i] + s * b[i];
}

void masked_add_neon(float* dst, const float* base, const float* tau,
                     const uint8_t* mask, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const uint32x4_t sel = mask_bits4(mask + i);
        const float32x4_t vbase = vld1q_f32(base + i);
        const float32x4_t vsum = vaddq_f32(vbase, vld1q_f32(tau + i));
        vst1q_f32(dst + i, vbslq_f32(sel, vsum, vbase));
    }
    for (; i < n; ++i) dst[i] = mask[i] ? base[i] + tau[i] : base[i];
}

void masked_select_neon(float* dst, const uint8_t* mask, const float* a,
                        const float* b, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const uint32x4_t sel = mask_bits4(mask + i);
        vst1q_f32(dst + i, vbslq_f32(sel, vld1q_f32(a + i), vld1q_f32(b + i)));
    }
    for (; i < n; ++i) dst[i] = mask[i] ? a[i] : b[i];
}

size_t mismatch_count_neon(const float* a, const float* b, size_t n) {
    size_t count = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        uint32x4_t ua, ub;
        std::memcpy(&ua, a + i, 16);
        std::memcpy(&ub, b + i, 16);
        const uint32x4_t eq = vceqq_u32(ua, ub);
        // equal lanes are all-ones; sum of lane>>31 counts equal lanes
        const uint32x4_t ones = vshrq_n_u32(eq, 31);
        count += 4 - vaddvq_u32(ones);
    }
    for (; i < n; ++i) {
        uint32_t ua, ub;
        std::memcpy(&ua, &a[i], 4);
        std::memcpy(&ub, &b[i], 4);
        count += (ua != ub) ? 1 : 0;
    }
    return count;
}

void adamw_update_neon(float* p, const float* g, float* m, float* v, size_t n,
                       const AdamwParams& hp) {
    const float32x4_t vb1 = vdupq_n_f32(hp.beta1);
    const float32x4_t vb2 = vdupq_n_f32(hp.beta2);
    const float32x4_t v1mb1 = vdupq_n_f32(1.0f - hp.beta1);
    const float32x4_t v1mb2 = vdupq_n_f32(1.0f - hp.beta2);
    const float32x4_t vbc1 = vdupq_n_f32(hp.bias_corr1);
    const float32x4_t vbc2 = vdupq_n_f32(hp.bias_corr2);
    const float32x4_t veps = vdupq_n_f32(hp.eps);
    const float32x4_t vwd = vdupq_n_f32(hp.weight_decay);
    const float32x4_t vlr = vdupq_n_f32(hp.lr);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t vg = vld1q_f32(g + i);
        const float32x4_t vp = vld1q_f32(p + i);
        float32x4_t vm = vld1q_f32(m + i);
        float32x4_t vv = vld1q_f32(v + i);
        vm = vaddq_f32(vmulq_f32(vb1, vm), vmulq_f32(v1mb1, vg));
        vv = vaddq_f32(vmulq_f32(vb2, vv), vmulq_f32(v1mb2, vmulq_f32(vg, vg)));
        const float32x4_t mhat = vdivq_f32(vm, vbc1);
        const float32x4_t vhat = vdivq_f32(vv, vbc2);
        const float32x4_t denom = vaddq_f32(vsqrtq_f32(vhat), veps);
        const float32x4_t update = vaddq_f32(vdivq_f32(mhat, denom), vmulq_f32(vwd, vp));
        vst1q_f32(p + i, vsubq_f32(vp, vmulq_f32(vlr, update)));
        vst1q_f32(m + i, vm);
        vst1q_f32(v + i, vv);
    }
    if (i < n) {
        scalar_ops().adamw_update(p + i, g + i, m + i, v + i, n - i, hp);
    }
}

void matvec_neon(float* y, const float* w, const float* x, size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float* row = w + r * cols;
        float32x4_t acc = vdupq_n_f32(0.0f);
        size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            acc = vaddq_f32(acc, vmulq_f32(vld1q_f32(row + c), vld1q_f32(x + c)));
        }
        float sum = vgetq_lane_f32(acc, 0) + vgetq_lane_f32(acc, 1) +
                    vgetq_lane_f32(acc, 2) + vgetq_lane_f32(acc, 3);
        for (; c < cols; ++c) sum += row[c] * x[c];
        y[r] = sum;
    }
}

void matvec_t_acc_neon(float* dx, const float* w, const float* dy, size_t rows,
                       size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float32x4_t vdyr = vdupq_n_f32(dy[r]);
        const float* row = w + r * cols;
        size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            const float32x4_t prod = vmulq_f32(vld1q_f32(row + c), vdyr);
            vst1q_f32(dx + c, vaddq_f32(vld1q_f32(dx + c), prod));
        }
        for (; c < cols; ++c) dx[c] = dx[c] + row[c] * dy[r];
    }
}

void outer_acc_neon(float* dw, const float* dy, const float* x, size_t rows,
                    size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float32x4_t vdyr = vdupq_n_f32(dy[r]);
        float* row = dw + r * cols;
        size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            const float32x4_t prod = vmulq_f32(vdyr, vld1q_f32(x + c));
            vst1q_f32(row + c, vaddq_f32(vld1q_f32(row + c), prod));
        }
        for (; c < cols; ++c) row[c] = row[c] + dy[r] * x[c];
    }
}

void matvec_d_neon(double* y, const double* w, const double* x, size_t rows,
                   size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const double* row = w + r * cols;
        float64x2_t acc = vdupq_n_f64(0.0);
        size_t c = 0;
        for (; c + 2 <= cols; c += 2) {
            acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(row + c), vld1q_f64(x + c)));
        }
        double sum = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
        for (; c < cols; ++c) sum += row[c] * x[c];
        y[r] = sum;
    }
}

void matvec_t_acc_d_neon(double* dx, const double* w, const double* dy, size_t rows,
                         size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float64x2_t vdyr = vdupq_n_f64(dy[r]);
        const double* row = w + r * cols;
        size_t c = 0;
        for (; c + 2 <= cols; c += 2) {
            const float64x2_t prod = vmulq_f64(vld1q_f64(row + c), vdyr);
            vst1q_f64(dx + c, vaddq_f64(vld1q_f64(dx + c), prod));
        }
        for (; c < cols; ++c) dx[c] = dx[c] + row[c] * dy[r];
    }
}

void outer_acc_d_neon(double* dw, const double* dy, const double* x, size_t rows,
                      size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float64x2_t vdyr = vdupq_n_f64(dy[r]);
        double* row = dw + r * cols;
        size_t c = 0;
        for (; c + 2 <= cols; c += 2) {
            const float64x2_t prod = vmulq_f64(vdyr, vld1q_f64(x + c));
            vst1q_f64(row + c, vaddq_f64(vld1q_f64(row + c), prod));
        }
        for (; c < cols; ++c) row[c] = row[c] + dy[r] * x[c];
    }
}

}  // namespace

bool neon_available() { return true; }

const Ops& neon_ops() {
    static const Ops ops = {
        "neon",
        sub_neon,
        scale_add_neon,
        masked_add_neon,
        masked_select_neon,
        mismatch_count_neon,
        adamw_update_neon,
        matvec_neon,
        matvec_t_acc_neon,
        outer_acc_neon,
        matvec_d_neon,
        matvec_t_acc_d_neon,
        outer_acc_d_neon,
    };
    return ops;
}

}  // namespace skt::kernels

#else  // non-AArch64 build

namespace skt::kernels {

bool neon_available() { return false; }
const Ops& neon_ops() { return scalar_ops(); }

}  // namespace skt::kernels

#endif
