// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "skt/paramvec/param_set.hpp"

namespace skt {

// NPS1 checkpoint format:
//   bytes 0..7   magic "NPSETv1\0"
//   bytes 8..11  u32 little-endian header length H
//   bytes 12..   H bytes of UTF-8 JSON: [{"name","length","byte_offset"},...]
//                in entry order; byte_offset is relative to the payload start
//   then         contiguous little-endian fp32 payload
// Round-trips are bit-exact.
void save_nps1(const std::filesystem::path& path, const NamedParamSet& params);
NamedParamSet load_nps1(const std::filesystem::path& path);

}  // namespace skt
