// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skt::datagen {

// The eight languages the seed corpus covers.
const std::vector<std::string>& supported_languages();
bool is_supported_language(std::string_view language);

struct SeedSample {
    std::string id;
    std::string language;
    std::string text;
    size_t line_count = 0;
    bool has_logic = false;
};

// Computes line_count/has_logic so the invariants hold by construction.
SeedSample make_seed_sample(std::string id, std::string language,
                            std::string text);

enum class Modularity : uint8_t { Function, Class, File };
std::string_view to_string(Modularity m);
Modularity modularity_from_string(std::string_view text);

const std::vector<std::string>& known_aspects();

struct GenerationSpec {
    Modularity modularity = Modularity::Function;
    std::vector<std::string> aspects;  // non-empty subset of known_aspects()
    double temperature = 0.6;
    std::string model = "mock-model";

    void validate() const;
};

enum class InstructionFormat : uint8_t { Concise, Detailed, Human, Conversational };
std::string_view to_string(InstructionFormat f);
InstructionFormat instruction_format_from_string(std::string_view text);
const std::vector<InstructionFormat>& all_instruction_formats();

struct Turn {
    std::string role;  // "user" | "assistant"
    std::string text;
};

// One instruction rendering: plain text, or ordered turns when conversational.
struct Instruction {
    InstructionFormat format = InstructionFormat::Concise;
    std::string text;         // non-conversational
    std::vector<Turn> turns;  // conversational
};

struct QualityScores {
    // correctness of edits, instruction adherence, code quality,
    // instruction quality, and usefulness for fine-tuning small models.
    std::array<int, 5> values{};

    void validate() const;  // each in [0,10]
};

// Accept iff mean >= 7 and every score exceeds 5.
bool quality_filter(const QualityScores& scores);

struct GeneratedInstance {
    std::string id;
    std::string seed_id;
    std::string language;
    GenerationSpec spec;

    std::string problem;
    std::string source_code;
    std::string flaw_metadata;
    std::string target_code;
    std::string edit_explanation;
    std::map<InstructionFormat, Instruction> instructions;
    std::optional<QualityScores> scores;
    bool accepted = false;
    std::string reject_reason;

    bool has_problem_source() const { return !problem.empty() && !source_code.empty(); }
    bool has_target() const { return !target_code.empty(); }
};

}  // namespace skt::datagen
