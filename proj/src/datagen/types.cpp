// SPDX-License-Identifier: Apache-2.0
#include "skt/datagen/types.hpp"

#include "skt/common/errors.hpp"

namespace skt::datagen {

std::string_view to_string(Modularity m) {
    switch (m) {
        case Modularity::Function: return "function";
        case Modularity::Class: return "class";
        case Modularity::File: return "file";
    }
    return "?";
}

Modularity modularity_from_string(std::string_view text) {
    if (text == "function") return Modularity::Function;
    if (text == "class") return Modularity::Class;
    if (text == "file") return Modularity::File;
    throw DomainError("unknown modularity: " + std::string(text));
}

const std::vector<std::string>& known_aspects() {
    static const std::vector<std::string> aspects = {
        "bug fixing",          "latency",
        "resource utilization", "runtime efficiency",
        "maintainability",     "security",
        "general improvement"};
    return aspects;
}

void GenerationSpec::validate() const {
    if (aspects.empty()) throw DomainError("generation spec needs >= 1 aspect");
    for (const auto& a : aspects) {
        bool known = false;
        for (const auto& k : known_aspects()) known = known || k == a;
        if (!known) throw DomainError("unknown aspect: " + a);
    }
    if (!(temperature >= 0.0 && temperature <= 2.0))
        throw DomainError("temperature out of range");
}

std::string_view to_string(InstructionFormat f) {
    switch (f) {
        case InstructionFormat::Concise: return "concise";
        case InstructionFormat::Detailed: return "detailed";
        case InstructionFormat::Human: return "human";
        case InstructionFormat::Conversational: return "conversational";
    }
    return "?";
}

InstructionFormat instruction_format_from_string(std::string_view text) {
    if (text == "concise") return InstructionFormat::Concise;
    if (text == "detailed") return InstructionFormat::Detailed;
    if (text == "human") return InstructionFormat::Human;
    if (text == "conversational") return InstructionFormat::Conversational;
    throw DomainError("unknown instruction format: " + std::string(text));
}

const std::vector<InstructionFormat>& all_instruction_formats() {
    static const std::vector<InstructionFormat> formats = {
        InstructionFormat::Concise, InstructionFormat::Detailed,
        InstructionFormat::Human, InstructionFormat::Conversational};
    return formats;
}

void QualityScores::validate() const {
    for (int v : values)
        if (v < 0 || v > 10) throw DomainError("score out of [0,10]");
}

bool quality_filter(const QualityScores& scores) {
    scores.validate();
    int sum = 0;
    for (int v : scores.values) {
        if (v <= 5) return false;  // every score must exceed 5
        sum += v;
    }
    return sum >= 35;  // mean >= 7 over five integer scores
}

}  // namespace skt::datagen
