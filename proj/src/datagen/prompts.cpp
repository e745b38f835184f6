// SPDX-License-Identifier: Apache-2.0
#include "skt/datagen/prompts.hpp"

#include "skt/common/errors.hpp"

namespace skt::datagen {
namespace {

const std::string kProblemSource = R"(You are generating synthetic code-editing training data.

Given the seed code below, write:
1. A problem description for a <<MODULARITY>>-level <<LANGUAGE>> coding task inspired by the seed code.
2. A source-code solution to that problem which deliberately contains flaws in these improvement areas: <<ASPECTS>>.
3. Metadata outlining the specific flaws you planted.

Seed code:
<<SEED_CODE>>

Respond in exactly this format:
[PROBLEM]
...problem description...
[/PROBLEM]
[SOURCE_CODE]
...flawed solution code...
[/SOURCE_CODE]
[FLAW_METADATA]
...list of planted flaws...
[/FLAW_METADATA]
)";

const std::string kTarget = R"(You are generating synthetic code-editing training data.

Given the problem, the flawed source code, and the flaw metadata below, write
the corrected target code and explain each edit you made.

Problem:
<<PROBLEM>>

Source code:
<<SOURCE_CODE>>

Flaw metadata:
<<FLAW_METADATA>>

Respond in exactly this format:
[TARGET_CODE]
...corrected code...
[/TARGET_CODE]
[EDIT_EXPLANATION]
...what was changed and why...
[/EDIT_EXPLANATION]
)";

const std::string kInstruction = R"(You are generating code-editing instructions for fine-tuning data.

Write a code-editing instruction in the <<FORMAT_NAME>> format:
<<FORMAT_DESCRIPTION>>

Source code:
<<SOURCE_CODE>>

Target code:
<<TARGET_CODE>>

Edit explanation:
<<EDIT_EXPLANATION>>

For the conversational format respond with alternating turns:
[USER]
...user turn...
[/USER]
[ASSISTANT]
...assistant turn...
[/ASSISTANT]
(repeat turn pairs as needed). For every other format respond in exactly this
format:
[INSTRUCTION]
...the instruction...
[/INSTRUCTION]
)";

const std::string kQuality = R"(You are scoring a synthetic code-editing example.

Verify that the target code is a correctly edited version of the source code,
consistent with the instruction. Score the instance from 0 to 10 on five
criteria, in order:
1. correctness of the edits with respect to the requested improvements
2. adherence of the edits to the instruction
3. code quality
4. instruction quality
5. usefulness of the example for fine-tuning small models

Instruction:
<<INSTRUCTION>>

Source code:
<<SOURCE_CODE>>

Target code:
<<TARGET_CODE>>

Respond in exactly this format:
[SCORES]c1,c2,c3,c4,c5[/SCORES]
)";

}  // namespace

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::ProblemSource: return "problem_source";
        case Stage::Target: return "target";
        case Stage::Instruction: return "instruction";
        case Stage::Quality: return "quality";
    }
    return "?";
}

Stage stage_from_string(std::string_view text) {
    if (text == "problem_source") return Stage::ProblemSource;
    if (text == "target") return Stage::Target;
    if (text == "instruction") return Stage::Instruction;
    if (text == "quality") return Stage::Quality;
    throw DomainError("unknown stage: " + std::string(text));
}

const std::vector<Stage>& all_stages() {
    static const std::vector<Stage> stages = {Stage::ProblemSource, Stage::Target,
                                              Stage::Instruction, Stage::Quality};
    return stages;
}

const std::string& prompt_template(Stage stage) {
    switch (stage) {
        case Stage::ProblemSource: return kProblemSource;
        case Stage::Target: return kTarget;
        case Stage::Instruction: return kInstruction;
        case Stage::Quality: return kQuality;
    }
    throw DomainError("unknown stage");
}

std::string format_description(InstructionFormat f) {
    switch (f) {
        case InstructionFormat::Concise:
            return "a high-level, often under-specified description of at most "
                   "three lines that does not spell out the required changes";
        case InstructionFormat::Detailed:
            return "a verbose instruction with specific information about the "
                   "required changes, such as naming the exact function to modify";
        case InstructionFormat::Human:
            return "a very brief, informal, natural message of one or two "
                   "sentences giving a high-level overview without technical detail";
        case InstructionFormat::Conversational:
            return "a user-assistant chat in which the user sequentially "
                   "specifies the required changes across turns";
    }
    return "?";
}

// Single pass over the template: substituted values are never rescanned, so
// code payloads containing "<<X>>"-shaped text cannot confuse rendering.
std::string render_prompt(const std::string& tmpl,
                          const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    size_t pos = 0;
    while (pos < tmpl.size()) {
        const size_t open = tmpl.find("<<", pos);
        if (open == std::string::npos) {
            out.append(tmpl, pos, std::string::npos);
            break;
        }
        const size_t close = tmpl.find(">>", open + 2);
        std::string key;
        if (close != std::string::npos && close > open + 2)
            key = tmpl.substr(open + 2, close - open - 2);
        if (key.empty() ||
            key.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZ_") != std::string::npos) {
            out.append(tmpl, pos, open + 2 - pos);
            pos = open + 2;
            continue;
        }
        const auto it = values.find(key);
        if (it == values.end())
            throw ParseError("missing value for placeholder <<" + key + ">>");
        out.append(tmpl, pos, open - pos);
        out.append(it->second);
        pos = close + 2;
    }
    return out;
}

}  // namespace skt::datagen
