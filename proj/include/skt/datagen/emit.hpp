// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>

#include "skt/datagen/pipeline.hpp"

namespace skt::datagen {

// Whitespace-delimited token count; the default TokenCounter.
size_t whitespace_tokens(const std::string& text);

using TokenCounter = std::function<size_t(const std::string&)>;

struct EmitOptions {
    std::vector<InstructionFormat> formats = all_instruction_formats();
    bool include_rejected = false;
    std::string endpoint_name = "mock";
};

// One JSONL record per (instance, instruction format):
// {id, language, modularity, aspects, instruction_format,
//  instruction_or_turns, source_code, target_code, scores,
//  provenance:{endpoint, seed_id}}.
size_t emit_dataset(const std::vector<GeneratedInstance>& instances,
                    const std::filesystem::path& path,
                    const EmitOptions& options = {});

struct LanguageRow {
    std::string language;
    size_t examples = 0;
    size_t tokens = 0;
};

struct DatasetStats {
    std::vector<LanguageRow> rows;  // one per supported language, plus total
    std::string to_json() const;
    std::string to_markdown() const;
};

// Per-language example/token accounting over an emitted JSONL file.
DatasetStats dataset_stats(const std::filesystem::path& path,
                           const TokenCounter& count_tokens = whitespace_tokens);

}  // namespace skt::datagen
