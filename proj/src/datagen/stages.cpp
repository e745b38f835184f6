// SPDX-License-Identifier: Apache-2.0
#include "skt/datagen/stages.hpp"

#include <algorithm>
#include <sstream>

namespace skt::datagen {
namespace {

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string aspects_csv(const GenerationSpec& spec) {
    std::string out;
    for (size_t i = 0; i < spec.aspects.size(); ++i) {
        if (i) out += ", ";
        out += spec.aspects[i];
    }
    return out;
}

ChatRequest make_request(const GeneratedInstance& instance, std::string prompt) {
    ChatRequest req;
    req.model = instance.spec.model;
    req.temperature = instance.spec.temperature;
    req.messages.push_back({"user", std::move(prompt)});
    return req;
}

std::string instruction_as_text(const Instruction& ins) {
    if (ins.format != InstructionFormat::Conversational) return ins.text;
    std::string out;
    for (const auto& t : ins.turns) out += t.role + ": " + t.text + "\n";
    return out;
}

}  // namespace

std::string extract_section(const std::string& payload, const std::string& tag) {
    const std::string open = "[" + tag + "]";
    const std::string close = "[/" + tag + "]";
    const size_t a = payload.find(open);
    if (a == std::string::npos)
        throw StageParseError("missing " + open + " section", payload);
    const size_t start = a + open.size();
    const size_t b = payload.find(close, start);
    if (b == std::string::npos)
        throw StageParseError("unterminated " + open + " section", payload);
    return trim(payload.substr(start, b - start));
}

std::vector<Turn> parse_turns(const std::string& payload) {
    std::vector<Turn> turns;
    size_t pos = 0;
    while (true) {
        const size_t u = payload.find("[USER]", pos);
        const size_t a = payload.find("[ASSISTANT]", pos);
        if (u == std::string::npos && a == std::string::npos) break;
        const bool user_first = u != std::string::npos && (a == std::string::npos || u < a);
        const std::string tag = user_first ? "USER" : "ASSISTANT";
        const size_t open = user_first ? u : a;
        const std::string close = "[/" + tag + "]";
        const size_t start = open + tag.size() + 2;
        const size_t end = payload.find(close, start);
        if (end == std::string::npos)
            throw StageParseError("unterminated [" + tag + "] turn", payload);
        turns.push_back({user_first ? "user" : "assistant",
                         trim(payload.substr(start, end - start))});
        pos = end + close.size();
    }
    if (turns.empty())
        throw StageParseError("no [USER]/[ASSISTANT] turns found", payload);
    if (turns.back().role != "assistant")
        throw StageParseError("conversation must end with an assistant turn", payload);
    return turns;
}

QualityScores parse_scores(const std::string& payload) {
    const std::string body = extract_section(payload, "SCORES");
    QualityScores scores;
    std::istringstream is(body);
    std::string item;
    size_t i = 0;
    while (std::getline(is, item, ',')) {
        if (i >= scores.values.size())
            throw StageParseError("more than five scores", payload);
        try {
            scores.values[i] = std::stoi(trim(item));
        } catch (const std::exception&) {
            throw StageParseError("non-integer score: '" + item + "'", payload);
        }
        ++i;
    }
    if (i != scores.values.size())
        throw StageParseError("expected five scores, got " + std::to_string(i),
                              payload);
    try {
        scores.validate();
    } catch (const DomainError& e) {
        throw StageParseError(e.what(), payload);
    }
    return scores;
}

void run_stage(Stage stage, GeneratedInstance& instance, const SeedSample& seed,
               Endpoint& endpoint, const StageOptions& options) {
    instance.spec.validate();
    switch (stage) {
        case Stage::ProblemSource: {
            const std::string prompt = render_prompt(
                prompt_template(stage),
                {{"MODULARITY", std::string(to_string(instance.spec.modularity))},
                 {"LANGUAGE", instance.language},
                 {"ASPECTS", aspects_csv(instance.spec)},
                 {"SEED_CODE", seed.text}});
            const std::string reply = complete_with_retries(
                endpoint, make_request(instance, prompt), options.attempts,
                options.backoff_ms);
            instance.problem = extract_section(reply, "PROBLEM");
            instance.source_code = extract_section(reply, "SOURCE_CODE");
            instance.flaw_metadata = extract_section(reply, "FLAW_METADATA");
            return;
        }
        case Stage::Target: {
            if (!instance.has_problem_source())
                throw DomainError("target stage needs problem and source code");
            const std::string prompt = render_prompt(
                prompt_template(stage),
                {{"PROBLEM", instance.problem},
                 {"SOURCE_CODE", instance.source_code},
                 {"FLAW_METADATA", instance.flaw_metadata}});
            const std::string reply = complete_with_retries(
                endpoint, make_request(instance, prompt), options.attempts,
                options.backoff_ms);
            instance.target_code = extract_section(reply, "TARGET_CODE");
            instance.edit_explanation = extract_section(reply, "EDIT_EXPLANATION");
            return;
        }
        case Stage::Instruction: {
            if (!instance.has_target())
                throw DomainError("instruction stage needs target code");
            for (InstructionFormat f : options.formats) {
                const std::string prompt = render_prompt(
                    prompt_template(stage),
                    {{"FORMAT_NAME", std::string(to_string(f))},
                     {"FORMAT_DESCRIPTION", format_description(f)},
                     {"SOURCE_CODE", instance.source_code},
                     {"TARGET_CODE", instance.target_code},
                     {"EDIT_EXPLANATION", instance.edit_explanation}});
                const std::string reply = complete_with_retries(
                    endpoint, make_request(instance, prompt), options.attempts,
                    options.backoff_ms);
                Instruction ins;
                ins.format = f;
                if (f == InstructionFormat::Conversational)
                    ins.turns = parse_turns(reply);
                else
                    ins.text = extract_section(reply, "INSTRUCTION");
                instance.instructions[f] = std::move(ins);
            }
            return;
        }
        case Stage::Quality: {
            if (!instance.has_target())
                throw DomainError("quality stage needs target code");
            for (InstructionFormat f : options.formats)
                if (!instance.instructions.count(f))
                    throw DomainError("quality stage needs instructions first");
            // Score against the first requested format's instruction; the
            // verdict covers the instance as a whole.
            const Instruction& first = instance.instructions.at(options.formats.front());
            const std::string prompt = render_prompt(
                prompt_template(stage),
                {{"INSTRUCTION", instruction_as_text(first)},
                 {"SOURCE_CODE", instance.source_code},
                 {"TARGET_CODE", instance.target_code}});
            const std::string reply = complete_with_retries(
                endpoint, make_request(instance, prompt), options.attempts,
                options.backoff_ms);
            instance.scores = parse_scores(reply);
            instance.accepted = quality_filter(*instance.scores);
            if (!instance.accepted) instance.reject_reason = "quality filter";
            return;
        }
    }
    throw DomainError("unknown stage");
}

}  // namespace skt::datagen
