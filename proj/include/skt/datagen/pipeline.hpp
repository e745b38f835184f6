// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "skt/datagen/stages.hpp"

namespace skt::datagen {

// JSON round-trip for persisted instances.
std::string instance_to_json(const GeneratedInstance& instance);
GeneratedInstance instance_from_json(const std::string& text);

// One JSON file per instance, named <id>.json, holding the instance plus the
// set of completed stages. Writes are serialized; the store is the resume
// point, so a finished (instance, stage) pair is never re-run.
class InstanceStore {
public:
    explicit InstanceStore(std::filesystem::path dir);

    bool stage_done(const std::string& id, Stage stage) const;
    GeneratedInstance load(const std::string& id) const;
    void save(const GeneratedInstance& instance, const std::vector<Stage>& done);
    std::vector<Stage> done_stages(const std::string& id) const;

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path file_for(const std::string& id) const;
    std::filesystem::path dir_;
};

struct PipelineConfig {
    GenerationSpec spec;
    StageOptions stage_options;
    size_t max_in_flight = 4;  // bounded concurrent instances
};

struct PipelineResult {
    std::vector<GeneratedInstance> instances;  // input order
    size_t accepted = 0;
    size_t rejected = 0;
    size_t failed = 0;  // endpoint/parse failures, marked rejected with reason
};

// Runs all four stages for every seed, resuming from the store. A failed
// instance is marked rejected with its reason, never dropped.
PipelineResult run_pipeline(const std::vector<SeedSample>& seeds,
                            const PipelineConfig& config, Endpoint& endpoint,
                            InstanceStore& store);

}  // namespace skt::datagen
