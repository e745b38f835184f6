// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

namespace skt {

// splitmix64 generator. Used everywhere seeds matter so that runs are
// reproducible independent of the standard library implementation.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi].
    float next_float(float lo, float hi) {
        return lo + static_cast<float>(next_double()) * (hi - lo);
    }

    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) {
        return n == 0 ? 0 : next_u64() % n;
    }

    // Fisher-Yates shuffle of indices 0..n-1.
    std::vector<size_t> permutation(size_t n) {
        std::vector<size_t> p(n);
        for (size_t i = 0; i < n; ++i) p[i] = i;
        for (size_t i = n; i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

private:
    uint64_t state_;
};

// Derives an independent stream from a root seed and a stream id.
inline uint64_t derive_seed(uint64_t root, uint64_t stream) {
    Rng r(root ^ (0x5851f42d4c957f2dull * (stream + 1)));
    return r.next_u64();
}

}  // namespace skt
