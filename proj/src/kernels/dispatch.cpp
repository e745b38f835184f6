// SPDX-License-Identifier: Apache-2.0

#include "skt/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace skt::kernels {
namespace {

const Ops& select_backend() {
    if (const char* forced = std::getenv("SKT_KERNELS")) {
        if (std::strcmp(forced, "scalar") == 0) return scalar_ops();
        if (std::strcmp(forced, "avx2") == 0 && avx2_available()) return avx2_ops();
        if (std::strcmp(forced, "neon") == 0 && neon_available()) return neon_ops();
        return scalar_ops();
    }
    if (avx2_available()) return avx2_ops();
    if (neon_available()) return neon_ops();
    return scalar_ops();
}

}  // namespace

const Ops& active() {
    static const Ops& chosen = select_backend();
    return chosen;
}

std::vector<const Ops*> available_backends() {
    std::vector<const Ops*> out{&scalar_ops()};
    if (avx2_available()) out.push_back(&avx2_ops());
    if (neon_available()) out.push_back(&neon_ops());
    return out;
}

}  // namespace skt::kernels
