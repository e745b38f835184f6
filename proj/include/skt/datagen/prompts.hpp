// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "skt/datagen/types.hpp"

namespace skt::datagen {

enum class Stage : uint8_t { ProblemSource, Target, Instruction, Quality };

std::string_view to_string(Stage s);
Stage stage_from_string(std::string_view text);
const std::vector<Stage>& all_stages();

// Embedded copy of assets/prompts/<stage>.txt (byte-identical; sync-tested).
const std::string& prompt_template(Stage stage);

std::string format_description(InstructionFormat f);

// Replaces <<KEY>> placeholders; throws ParseError if any <<...>> survives.
std::string render_prompt(const std::string& tmpl,
                          const std::map<std::string, std::string>& values);

}  // namespace skt::datagen
