// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "skt/toymodel/model.hpp"

namespace skt {

// One turn of a segmented example: a run of positions with a shared role.
struct Segment {
    std::string role;                       // "user" | "assistant" | ...
    std::vector<std::vector<float>> xs;     // one feature vector per position
    std::vector<int> ys;                    // one target id per position
};

enum class ExampleKind : uint8_t { Instruction, Conversation };

struct Example {
    ExampleKind kind = ExampleKind::Instruction;
    std::vector<Segment> segments;
};

// Per-position flags over the concatenated segments. Instruction: every
// position counts. Conversation: only the final assistant segment counts.
std::vector<uint8_t> build_loss_mask(const Example& ex);

// Flattened position-level dataset: what the training loop batches over.
struct Dataset {
    std::vector<std::vector<float>> xs;
    std::vector<int> ys;
    std::vector<uint8_t> masks;

    size_t size() const { return xs.size(); }
    void append(std::vector<float> x, int y, uint8_t mask);
};

// JSONL rows are either flat positions:
//   {"x":[...], "y": 3}
// or segmented examples expanded through build_loss_mask:
//   {"kind":"conversation","segments":[{"role":"user","x":[[...]],"y":[...]}, ...]}
Dataset load_dataset_jsonl(const std::filesystem::path& path);
Dataset parse_dataset_jsonl(const std::string& text);

// Deterministic epoch plan shared by every training method: positions are
// shuffled by derive_seed(shuffle_seed, epoch) and cut into minibatches of
// batch_size (last one ragged).
std::vector<Batch> make_batches(const Dataset& data, size_t batch_size,
                                uint64_t shuffle_seed, size_t epoch);

size_t steps_per_epoch(size_t dataset_size, size_t batch_size);

}  // namespace skt
