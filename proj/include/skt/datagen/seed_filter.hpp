// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "skt/datagen/types.hpp"

namespace skt::datagen {

size_t count_lines(const std::string& text);

// Regex-level detection of loops, function definitions, conditionals, or
// class constructs for the given language. Throws DomainError on an
// unsupported language.
bool contains_logic(std::string_view language, const std::string& text);

// Accept iff more than 10 lines and the text contains logic.
bool filter_seed(const SeedSample& sample);

}  // namespace skt::datagen
