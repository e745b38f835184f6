// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "skt/common/errors.hpp"
#include "skt/datagen/endpoint.hpp"
#include "skt/datagen/prompts.hpp"

namespace skt::datagen {

// Parse failure that keeps the raw endpoint payload for diagnosis.
class StageParseError : public ParseError {
public:
    StageParseError(const std::string& what, std::string raw_payload)
        : ParseError(what + "\n--- raw payload ---\n" + raw_payload),
          raw_(std::move(raw_payload)) {}
    const std::string& raw() const { return raw_; }

private:
    std::string raw_;
};

// Extract the text between [TAG] and [/TAG]; throws StageParseError.
std::string extract_section(const std::string& payload, const std::string& tag);

// Parse alternating [USER]/[ASSISTANT] turns.
std::vector<Turn> parse_turns(const std::string& payload);

QualityScores parse_scores(const std::string& payload);

struct StageOptions {
    std::vector<InstructionFormat> formats = all_instruction_formats();
    int attempts = 3;
    int backoff_ms = 50;
};

// Runs one pipeline stage for one instance: renders the stage prompt(s),
// calls the endpoint (with retries), parses the reply into the instance.
// The instruction stage makes one call per requested format. The quality
// stage fills scores and decides acceptance. Throws DomainError when stage
// dependencies are unmet.
void run_stage(Stage stage, GeneratedInstance& instance, const SeedSample& seed,
               Endpoint& endpoint, const StageOptions& options = {});

}  // namespace skt::datagen
