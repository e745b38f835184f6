// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. Every other backend must reproduce these bit-for-bit
// except matvec (see kernels.hpp).

#include "skt/kernels/kernels.hpp"

#include <cmath>
#include <cstring>

namespace skt::kernels {
namespace {

void sub_scalar(float* dst, const float* a, const float* b, size_t n) {
    for (size_t i = 0; i < n; ++i) dst[i] = a[i] - b[i];
}

void scale_add_scalar(float* dst, const float* a, float s, const float* b, size_t n) {
    for (size_t i = 0; i < n; ++i) dst[i] = a[i] + s * b[i];
}

void masked_add_scalar(float* dst, const float* base, const float* tau,
                       const uint8_t* mask, size_t n) {
    for (size_t i = 0; i < n; ++i) dst[i] = mask[i] ? base[i] + tau[i] : base[i];
}

void masked_select_scalar(float* dst, const uint8_t* mask, const float* a,
                          const float* b, size_t n) {
    for (size_t i = 0; i < n; ++i) dst[i] = mask[i] ? a[i] : b[i];
}

size_t mismatch_count_scalar(const float* a, const float* b, size_t n) {
    size_t count = 0;
    for (size_t i = 0; i < n; ++i) {
        uint32_t ua, ub;
        std::memcpy(&ua, &a[i], 4);
        std::memcpy(&ub, &b[i], 4);
        count += (ua != ub) ? 1 : 0;
    }
    return count;
}

void adamw_update_scalar(float* p, const float* g, float* m, float* v, size_t n,
                         const AdamwParams& hp) {
    const float one_minus_b1 = 1.0f - hp.beta1;
    const float one_minus_b2 = 1.0f - hp.beta2;
    for (size_t i = 0; i < n; ++i) {
        const float gi = g[i];
        m[i] = hp.beta1 * m[i] + one_minus_b1 * gi;
        v[i] = hp.beta2 * v[i] + one_minus_b2 * (gi * gi);
        const float mhat = m[i] / hp.bias_corr1;
        const float vhat = v[i] / hp.bias_corr2;
        const float denom = std::sqrt(vhat) + hp.eps;
        const float update = mhat / denom + hp.weight_decay * p[i];
        p[i] = p[i] - hp.lr * update;
    }
}

void matvec_scalar(float* y, const float* w, const float* x, size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        float acc = 0.0f;
        const float* row = w + r * cols;
        for (size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void matvec_t_acc_scalar(float* dx, const float* w, const float* dy, size_t rows,
                         size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float dyr = dy[r];
        const float* row = w + r * cols;
        for (size_t c = 0; c < cols; ++c) dx[c] = dx[c] + row[c] * dyr;
    }
}

void outer_acc_scalar(float* dw, const float* dy, const float* x, size_t rows,
                      size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const float dyr = dy[r];
        float* row = dw + r * cols;
        for (size_t c = 0; c < cols; ++c) row[c] = row[c] + dyr * x[c];
    }
}

void matvec_d_scalar(double* y, const double* w, const double* x, size_t rows,
                     size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        const double* row = w + r * cols;
        for (size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void matvec_t_acc_d_scalar(double* dx, const double* w, const double* dy,
                           size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const double dyr = dy[r];
        const double* row = w + r * cols;
        for (size_t c = 0; c < cols; ++c) dx[c] = dx[c] + row[c] * dyr;
    }
}

void outer_acc_d_scalar(double* dw, const double* dy, const double* x, size_t rows,
                        size_t cols) {
    for (size_t r = 0; r < rows; ++r) {
        const double dyr = dy[r];
        double* row = dw + r * cols;
        for (size_t c = 0; c < cols; ++c) row[c] = row[c] + dyr * x[c];
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",
        sub_scalar,
        scale_add_scalar,
        masked_add_scalar,
        masked_select_scalar,
        mismatch_count_scalar,
        adamw_update_scalar,
        matvec_scalar,
        matvec_t_acc_scalar,
        outer_acc_scalar,
        matvec_d_scalar,
        matvec_t_acc_d_scalar,
        outer_acc_d_scalar,
    };
    return ops;
}

}  // namespace skt::kernels
