// SPDX-License-Identifier: Apache-2.0
#include "skt/datagen/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace skt::datagen {
namespace {

nlohmann::json instruction_to_json(const Instruction& ins) {
    nlohmann::json j;
    j["format"] = std::string(to_string(ins.format));
    if (ins.format == InstructionFormat::Conversational) {
        j["turns"] = nlohmann::json::array();
        for (const auto& t : ins.turns)
            j["turns"].push_back({{"role", t.role}, {"text", t.text}});
    } else {
        j["text"] = ins.text;
    }
    return j;
}

Instruction instruction_from_json(const nlohmann::json& j) {
    Instruction ins;
    ins.format = instruction_format_from_string(j.at("format").get<std::string>());
    if (ins.format == InstructionFormat::Conversational) {
        for (const auto& t : j.at("turns"))
            ins.turns.push_back({t.at("role").get<std::string>(),
                                 t.at("text").get<std::string>()});
    } else {
        ins.text = j.at("text").get<std::string>();
    }
    return ins;
}

}  // namespace

std::string instance_to_json(const GeneratedInstance& instance) {
    nlohmann::json j;
    j["id"] = instance.id;
    j["seed_id"] = instance.seed_id;
    j["language"] = instance.language;
    j["spec"] = {{"modularity", std::string(to_string(instance.spec.modularity))},
                 {"aspects", instance.spec.aspects},
                 {"temperature", instance.spec.temperature},
                 {"model", instance.spec.model}};
    j["problem"] = instance.problem;
    j["source_code"] = instance.source_code;
    j["flaw_metadata"] = instance.flaw_metadata;
    j["target_code"] = instance.target_code;
    j["edit_explanation"] = instance.edit_explanation;
    j["instructions"] = nlohmann::json::array();
    for (const auto& [f, ins] : instance.instructions)
        j["instructions"].push_back(instruction_to_json(ins));
    if (instance.scores) {
        j["scores"] = instance.scores->values;
    }
    j["accepted"] = instance.accepted;
    j["reject_reason"] = instance.reject_reason;
    return j.dump(2);
}

GeneratedInstance instance_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad instance JSON: " + std::string(e.what()));
    }
    GeneratedInstance ins;
    ins.id = j.at("id").get<std::string>();
    ins.seed_id = j.at("seed_id").get<std::string>();
    ins.language = j.at("language").get<std::string>();
    ins.spec.modularity =
        modularity_from_string(j.at("spec").at("modularity").get<std::string>());
    ins.spec.aspects = j.at("spec").at("aspects").get<std::vector<std::string>>();
    ins.spec.temperature = j.at("spec").at("temperature").get<double>();
    ins.spec.model = j.at("spec").at("model").get<std::string>();
    ins.problem = j.at("problem").get<std::string>();
    ins.source_code = j.at("source_code").get<std::string>();
    ins.flaw_metadata = j.at("flaw_metadata").get<std::string>();
    ins.target_code = j.at("target_code").get<std::string>();
    ins.edit_explanation = j.at("edit_explanation").get<std::string>();
    for (const auto& item : j.at("instructions")) {
        Instruction i = instruction_from_json(item);
        ins.instructions[i.format] = std::move(i);
    }
    if (j.contains("scores")) {
        QualityScores s;
        const auto arr = j.at("scores").get<std::vector<int>>();
        if (arr.size() != s.values.size())
            throw ParseError("instance JSON: expected five scores");
        std::copy(arr.begin(), arr.end(), s.values.begin());
        ins.scores = s;
    }
    ins.accepted = j.at("accepted").get<bool>();
    ins.reject_reason = j.at("reject_reason").get<std::string>();
    return ins;
}

InstanceStore::InstanceStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path InstanceStore::file_for(const std::string& id) const {
    return dir_ / (id + ".json");
}

bool InstanceStore::stage_done(const std::string& id, Stage stage) const {
    for (Stage s : done_stages(id))
        if (s == stage) return true;
    return false;
}

std::vector<Stage> InstanceStore::done_stages(const std::string& id) const {
    std::ifstream is(file_for(id));
    if (!is) return {};
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception&) {
        return {};  // partially written file: treat as not started
    }
    std::vector<Stage> done;
    if (j.contains("done_stages"))
        for (const auto& s : j.at("done_stages"))
            done.push_back(stage_from_string(s.get<std::string>()));
    return done;
}

GeneratedInstance InstanceStore::load(const std::string& id) const {
    std::ifstream is(file_for(id));
    if (!is) throw ParseError("no stored instance: " + id);
    std::ostringstream buf;
    buf << is.rdbuf();
    nlohmann::json j = nlohmann::json::parse(buf.str());
    return instance_from_json(j.at("instance").dump());
}

void InstanceStore::save(const GeneratedInstance& instance,
                         const std::vector<Stage>& done) {
    nlohmann::json j;
    j["instance"] = nlohmann::json::parse(instance_to_json(instance));
    j["done_stages"] = nlohmann::json::array();
    for (Stage s : done) j["done_stages"].push_back(std::string(to_string(s)));

    // Write-then-rename so a crash never leaves a half-written record that
    // would be mistaken for progress.
    const auto tmp = file_for(instance.id).string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        os << j.dump(2);
        if (!os) throw ParseError("store write failed: " + tmp);
    }
    std::filesystem::rename(tmp, file_for(instance.id));
}

PipelineResult run_pipeline(const std::vector<SeedSample>& seeds,
                            const PipelineConfig& config, Endpoint& endpoint,
                            InstanceStore& store) {
    config.spec.validate();
    if (config.max_in_flight == 0)
        throw DomainError("max_in_flight must be >= 1");

    PipelineResult result;
    result.instances.resize(seeds.size());

    std::mutex store_mutex;
    std::atomic<size_t> next{0};

    auto process_one = [&](size_t idx) {
        const SeedSample& seed = seeds[idx];
        const std::string id = seed.id;

        GeneratedInstance instance;
        std::vector<Stage> done;
        {
            std::lock_guard<std::mutex> lock(store_mutex);
            done = store.done_stages(id);
            if (!done.empty()) instance = store.load(id);
        }
        if (done.empty()) {
            instance.id = id;
            instance.seed_id = seed.id;
            instance.language = seed.language;
            instance.spec = config.spec;
        }

        auto is_done = [&done](Stage s) {
            return std::find(done.begin(), done.end(), s) != done.end();
        };

        try {
            for (Stage stage : all_stages()) {
                if (is_done(stage)) continue;
                run_stage(stage, instance, seed, endpoint, config.stage_options);
                done.push_back(stage);
                std::lock_guard<std::mutex> lock(store_mutex);
                store.save(instance, done);
            }
        } catch (const std::exception& e) {
            instance.accepted = false;
            instance.reject_reason = e.what();
            std::lock_guard<std::mutex> lock(store_mutex);
            store.save(instance, done);
        }
        result.instances[idx] = std::move(instance);
    };

    const size_t workers = std::min(config.max_in_flight, seeds.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                const size_t idx = next.fetch_add(1);
                if (idx >= seeds.size()) return;
                process_one(idx);
            }
        });
    for (auto& t : pool) t.join();

    for (const auto& instance : result.instances) {
        if (instance.accepted) ++result.accepted;
        else ++result.rejected;
        if (!instance.reject_reason.empty() &&
            instance.reject_reason != "quality filter")
            ++result.failed;
    }
    return result;
}

}  // namespace skt::datagen
