// SPDX-License-Identifier: Apache-2.0
//
// AVX2 kernels. No fused multiply-add anywhere: each per-element operation
// must round exactly like the scalar reference so the two backends agree
// bit-for-bit (matvec excepted, it reduces in lane order).

#include "skt/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#include <bit>
#include <cmath>
#include <cstring>

namespace skt::kernels {
namespace {

inline __m256 mask_bits(const uint8_t* mask) {
    const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(mask));
    const __m256i lanes = _mm256_cvtepu8_epi32(bytes);
    return _mm256_castsi256_ps(_mm256_cmpgt_epi32(lanes, _mm256_setzero_si256()));
}

void sub_avx2(float* dst, const float* a, const float* b, size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256 vb = _mm256_loadu_ps(b + i);
        _mm256_storeu_ps(dst + i, _mm256_sub_ps(va, vb));
    }
    for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void scale_add_avx2(float* dst, const float* a, float s, const float* b, size_t n) {
    const __m256 vs = _mm256_set1_ps(s);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256 vb = _mm256_loadu_ps(b + i);
        _mm256_storeu_ps(dst + i, _mm256_add_ps(va, _mm256_mul_ps(vs, vb)));
    }
    for (; i < n; ++i) dst[i] = a[i] + s * b[i];
}

void masked_add_avx2(float* dst, const float* base, const float* tau,
                     const uint8_t* mask, size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 sel = mask_bits(mask + i);
        const __m256 vbase = _mm256_loadu_ps(base + i);
        const __m256 vsum = _mm256_add_ps(vbase, _mm256_loadu_ps(tau + i));
        _mm256_storeu_ps(dst + i, _mm256_blendv_ps(vbase, vsum, sel));
    }
    for (; i < n; ++i) dst[i] = mask[i] ? base[i] + tau[i] : base[i];
}

void masked_select_avx2(float* dst, const uint8_t* mask, const float* a,
                        const float* b, size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 sel = mask_bits(mask + i);
        const __m256 va = _mm256_loadu_ps(a + i);
        const __m256 vb = _mm256_loadu_ps(b + i);
        _mm256_storeu_ps(dst + i, _mm256_blendv_ps(vb, va, sel));
    }
    for (; i < n; ++i) dst[i] = mask[i] ? a[i] : b[i];
}

size_t mismatch_count_avx2(const float* a, const float* b, size_t n) {
    size_t count = 0;
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const __m256i eq = _mm256_cmpeq_epi32(va, vb);
        const int bits = _mm256_movemask_ps(_mm256_castsi256_ps(eq));
        count += static_cast<size_t>(8 - std::popcount(static_cast<unsigned>(bits)));
    }
    for (; i < n; ++i) {
        uint32_t ua, ub;
        std::memcpy(&ua, &a[i], 4);
        std::memcpy(&ub, &b[i], 4);
        count += (ua != ub) ? 1 : 0;
    }
    return count;
}

void adamw_update_avx2(float* p, const float* g, float* m, float* v, size_t n,
                       const AdamwParams& hp) {
    const float one_minus_b1 = 1.0f - hp.beta1;
    const float one_minus_b2 = 1.0f - hp.beta2;
    const __m256 vb1 = _mm256_set1_ps(hp.beta1);
    const __m256 vb2 = _mm256_set1_ps(hp.beta2);
    const __m256 v1mb1 = _mm256_set1_ps(one_minus_b1);
    const __m256 v1mb2 = _mm256_set1_ps(one_minus_b2);
    const __m256 vbc1 = _mm256_set1_ps(hp.bias_corr1);
    const __m256 vbc2 = _mm256_set1_ps(hp.bias_corr2);
    const __m256 veps = _mm256_set1_ps(hp.eps);
    const __m256 vwd = _mm256_set1_ps(hp.weight_decay);
    const __m256 vlr = _mm256_set1_ps(hp.lr);
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 vg = _mm256_loadu_ps(g + i);
        const __m256 vp = _mm256_loadu_ps(p + i);
        __m256 vm = _mm256_loadu_ps(m + i);
        __m256 vv = _mm256_loadu_ps(v + i);
        vm = _mm256_add_ps(_mm256_mul_ps(vb1, vm), _mm256_mul_ps(v1mb1, vg));
        vv = _mm256_add_ps(_mm256_mul_ps(vb2, vv),
                           _mm256_mul_ps(v1mb2, _mm256_mul_ps(vg, vg)));
        const __m256 mhat = _mm256_div_ps(vm, vbc1);
        const __m256 vhat = _mm256_div_ps(vv, vbc2);
        const __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(vhat), veps);
        const __m256 update =
            _mm256_add_ps(_mm256_div_ps(mhat, denom), _mm256_mul_ps(vwd, vp));
        _mm256_storeu_ps(p + i, _mm256_sub_ps(vp, _mm256_mul_ps(vlr, update)));
        _mm256_storeu_ps(m + i, vm);
        _mm256_storeu_ps(v + i, vv);
    }
    if (i < n) {
        scalar_ops().adamw_update(p + i, g + i, m + i, v + i, n - i, hp);
    }
}

void matvec_avx2(float* y, const float* w, const float* x, size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float* row = w + r * cols;
        __m256 acc = _mm256_setzero_ps();
        size_t c = 0;
        for (; c + 8 <= cols; c += 8) {
            const __m256 vw = _mm256_loadu_ps(row + c);
            const __m256 vx = _mm256_loadu_ps(x + c);
            acc = _mm256_add_ps(acc, _mm256_mul_ps(vw, vx));
        }
        __m128 lo = _mm256_castps256_ps128(acc);
        const __m128 hi = _mm256_extractf128_ps(acc, 1);
        lo = _mm_add_ps(lo, hi);
        lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
        lo = _mm_add_ss(lo, _mm_shuffle_ps(lo, lo, 1));
        float sum = _mm_cvtss_f32(lo);
        for (; c < cols; ++c) sum += row[c] * x[c];
        y[r] = sum;
    }
}

void matvec_t_acc_avx2(float* dx, const float* w, const float* dy, size_t rows,
                       size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float dyr = dy[r];
        const __m256 vdyr = _mm256_set1_ps(dyr);
        const float* row = w + r * cols;
        size_t c = 0;
        for (; c + 8 <= cols; c += 8) {
            const __m256 vdx = _mm256_loadu_ps(dx + c);
            const __m256 vw = _mm256_loadu_ps(row + c);
            _mm256_storeu_ps(dx + c, _mm256_add_ps(vdx, _mm256_mul_ps(vw, vdyr)));
        }
        for (; c < cols; ++c) dx[c] = dx[c] + row[c] * dyr;
    }
}

void outer_acc_avx2(float* dw, const float* dy, const float* x, size_t rows,
                    size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float dyr = dy[r];
        const __m256 vdyr = _mm256_set1_ps(dyr);
        float* row = dw + r * cols;
        size_t c = 0;
        for (; c + 8 <= cols; c += 8) {
            const __m256 vrow = _mm256_loadu_ps(row + c);
            const __m256 vx = _mm256_loadu_ps(x + c);
            _mm256_storeu_ps(row + c, _mm256_add_ps(vrow, _mm256_mul_ps(vdyr, vx)));
        }
        for (; c < cols; ++c) row[c] = row[c] + dyr * x[c];
    }
}

void matvec_d_avx2(double* y, const double* w, const double* x, size_t rows,
                   size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const double* row = w + r * cols;
        __m256d acc = _mm256_setzero_pd();
        size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            const __m256d vw = _mm256_loadu_pd(row + c);
            const __m256d vx = _mm256_loadu_pd(x + c);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(vw, vx));
        }
        __m128d lo = _mm256_castpd256_pd128(acc);
        const __m128d hi = _mm256_extractf128_pd(acc, 1);
        lo = _mm_add_pd(lo, hi);
        double sum = _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
        for (; c < cols; ++c) sum += row[c] * x[c];
        y[r] = sum;
    }
}

void matvec_t_acc_d_avx2(double* dx, const double* w, const double* dy, size_t rows,
                         size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const __m256d vdyr = _mm256_set1_pd(dy[r]);
        const double* row = w + r * cols;
        size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            const __m256d vdx = _mm256_loadu_pd(dx + c);
            const __m256d vw = _mm256_loadu_pd(row + c);
            _mm256_storeu_pd(dx + c, _mm256_add_pd(vdx, _mm256_mul_pd(vw, vdyr)));
        }
        for (; c < cols; ++c) dx[c] = dx[c] + row[c] * dy[r];
    }
}

void outer_acc_d_avx2(double* dw, const double* dy, const double* x, size_t rows,
                      size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const __m256d vdyr = _mm256_set1_pd(dy[r]);
        double* row = dw + r * cols;
        size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            const __m256d vrow = _mm256_loadu_pd(row + c);
            const __m256d vx = _mm256_loadu_pd(x + c);
            _mm256_storeu_pd(row + c, _mm256_add_pd(vrow, _mm256_mul_pd(vdyr, vx)));
        }
        for (; c < cols; ++c) row[c] = row[c] + dy[r] * x[c];
    }
}

}  // namespace

bool avx2_available() {
    return __builtin_cpu_supports("avx2") != 0;
}

const Ops& avx2_ops() {
    static const Ops ops = {
        "avx2",
        sub_avx2,
        scale_add_avx2,
        masked_add_avx2,
        masked_select_avx2,
        mismatch_count_avx2,
        adamw_update_avx2,
        matvec_avx2,
        matvec_t_acc_avx2,
        outer_acc_avx2,
        matvec_d_avx2,
        matvec_t_acc_d_avx2,
        outer_acc_d_avx2,
    };
    return ops;
}

}  // namespace skt::kernels

#else  // non-x86 build

namespace skt::kernels {

bool avx2_available() { return false; }
const Ops& avx2_ops() { return scalar_ops(); }

}  // namespace skt::kernels

#endif
