// SPDX-License-Identifier: Apache-2.0
#include "skt/datagen/emit.hpp"

#include <fstream>

#include <json.hpp>

#include "skt/datagen/seed_filter.hpp"

namespace skt::datagen {

size_t whitespace_tokens(const std::string& text) {
    size_t count = 0;
    bool in_token = false;
    for (char c : text) {
        const bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
        if (!ws && !in_token) ++count;
        in_token = !ws;
    }
    return count;
}

size_t emit_dataset(const std::vector<GeneratedInstance>& instances,
                    const std::filesystem::path& path,
                    const EmitOptions& options) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw ParseError("cannot open for writing: " + path.string());

    size_t count = 0;
    for (const auto& instance : instances) {
        if (!instance.accepted && !options.include_rejected) continue;
        for (InstructionFormat f : options.formats) {
            const auto it = instance.instructions.find(f);
            if (it == instance.instructions.end()) continue;
            nlohmann::json rec;
            rec["id"] = instance.id + ":" + std::string(to_string(f));
            rec["language"] = instance.language;
            rec["modularity"] = std::string(to_string(instance.spec.modularity));
            rec["aspects"] = instance.spec.aspects;
            rec["instruction_format"] = std::string(to_string(f));
            if (f == InstructionFormat::Conversational) {
                nlohmann::json turns = nlohmann::json::array();
                for (const auto& t : it->second.turns)
                    turns.push_back({{"role", t.role}, {"text", t.text}});
                rec["instruction_or_turns"] = turns;
            } else {
                rec["instruction_or_turns"] = it->second.text;
            }
            rec["source_code"] = instance.source_code;
            rec["target_code"] = instance.target_code;
            if (instance.scores) rec["scores"] = instance.scores->values;
            rec["provenance"] = {{"endpoint", options.endpoint_name},
                                 {"seed_id", instance.seed_id}};
            os << rec.dump() << "\n";
            ++count;
        }
    }
    if (!os) throw ParseError("write failed: " + path.string());
    return count;
}

std::string DatasetStats::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows)
        j.push_back({{"language", r.language},
                     {"examples", r.examples},
                     {"tokens", r.tokens}});
    return j.dump(2);
}

std::string DatasetStats::to_markdown() const {
    std::string out = "| Language | Examples | Tokens |\n|---|---|---|\n";
    for (const auto& r : rows)
        out += "| " + r.language + " | " + std::to_string(r.examples) + " | " +
               std::to_string(r.tokens) + " |\n";
    return out;
}

DatasetStats dataset_stats(const std::filesystem::path& path,
                           const TokenCounter& count_tokens) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open: " + path.string());

    DatasetStats stats;
    for (const auto& lang : supported_languages())
        stats.rows.push_back({lang, 0, 0});
    LanguageRow total{"total", 0, 0};

    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const nlohmann::json rec = nlohmann::json::parse(line);
        const std::string lang = rec.at("language").get<std::string>();

        std::string text;
        const auto& ins = rec.at("instruction_or_turns");
        if (ins.is_array()) {
            for (const auto& t : ins) text += t.at("text").get<std::string>() + "\n";
        } else {
            text = ins.get<std::string>();
        }
        text += "\n" + rec.at("source_code").get<std::string>();
        text += "\n" + rec.at("target_code").get<std::string>();
        const size_t tokens = count_tokens(text);

        bool found = false;
        for (auto& r : stats.rows) {
            if (r.language != lang) continue;
            r.examples += 1;
            r.tokens += tokens;
            found = true;
            break;
        }
        if (!found) stats.rows.push_back({lang, 1, tokens});
        total.examples += 1;
        total.tokens += tokens;
    }
    stats.rows.push_back(total);
    return stats;
}

}  // namespace skt::datagen
