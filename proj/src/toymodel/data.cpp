// SPDX-License-Identifier: Apache-2.0
#include "skt/toymodel/data.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skt/common/errors.hpp"
#include "skt/common/rng.hpp"

namespace skt {

std::vector<uint8_t> build_loss_mask(const Example& ex) {
    if (ex.segments.empty()) throw DomainError("example has no segments");
    size_t total = 0;
    for (const auto& s : ex.segments) {
        if (s.xs.size() != s.ys.size())
            throw DomainError("segment position count mismatch");
        if (s.xs.empty()) throw DomainError("empty segment");
        total += s.xs.size();
    }

    std::vector<uint8_t> mask(total, 0);
    if (ex.kind == ExampleKind::Instruction) {
        std::fill(mask.begin(), mask.end(), 1);
        return mask;
    }

    // Conversation: flag only the last assistant segment.
    size_t last_assistant = ex.segments.size();
    for (size_t i = 0; i < ex.segments.size(); ++i)
        if (ex.segments[i].role == "assistant") last_assistant = i;
    if (last_assistant == ex.segments.size())
        throw DomainError("conversation has no assistant segment");

    size_t offset = 0;
    for (size_t i = 0; i < ex.segments.size(); ++i) {
        if (i == last_assistant)
            std::fill(mask.begin() + static_cast<ptrdiff_t>(offset),
                      mask.begin() + static_cast<ptrdiff_t>(offset + ex.segments[i].xs.size()),
                      1);
        offset += ex.segments[i].xs.size();
    }
    return mask;
}

void Dataset::append(std::vector<float> x, int y, uint8_t mask) {
    xs.push_back(std::move(x));
    ys.push_back(y);
    masks.push_back(mask);
}

namespace {

std::vector<float> parse_features(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("feature vector must be an array");
    std::vector<float> x;
    x.reserve(j.size());
    for (const auto& v : j) x.push_back(v.get<float>());
    return x;
}

void append_row(Dataset& out, const nlohmann::json& row) {
    if (row.contains("x")) {
        out.append(parse_features(row.at("x")), row.at("y").get<int>(), 1);
        return;
    }
    Example ex;
    const std::string kind = row.at("kind").get<std::string>();
    if (kind == "instruction") ex.kind = ExampleKind::Instruction;
    else if (kind == "conversation") ex.kind = ExampleKind::Conversation;
    else throw ParseError("unknown example kind: " + kind);

    for (const auto& seg : row.at("segments")) {
        Segment s;
        s.role = seg.at("role").get<std::string>();
        for (const auto& x : seg.at("x")) s.xs.push_back(parse_features(x));
        for (const auto& y : seg.at("y")) s.ys.push_back(y.get<int>());
        ex.segments.push_back(std::move(s));
    }

    const std::vector<uint8_t> mask = build_loss_mask(ex);
    size_t pos = 0;
    for (const auto& s : ex.segments)
        for (size_t i = 0; i < s.xs.size(); ++i, ++pos)
            out.append(s.xs[i], s.ys[i], mask[pos]);
}

}  // namespace

Dataset parse_dataset_jsonl(const std::string& text) {
    Dataset out;
    std::istringstream is(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            append_row(out, nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (out.size() == 0) throw DomainError("dataset is empty");
    return out;
}

Dataset load_dataset_jsonl(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open dataset: " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_dataset_jsonl(buf.str());
}

size_t steps_per_epoch(size_t dataset_size, size_t batch_size) {
    if (batch_size == 0) throw DomainError("batch_size must be >= 1");
    return (dataset_size + batch_size - 1) / batch_size;
}

std::vector<Batch> make_batches(const Dataset& data, size_t batch_size,
                                uint64_t shuffle_seed, size_t epoch) {
    if (data.size() == 0) throw DomainError("dataset is empty");
    if (batch_size == 0) throw DomainError("batch_size must be >= 1");

    Rng rng(derive_seed(shuffle_seed, epoch));
    const std::vector<size_t> order = rng.permutation(data.size());

    std::vector<Batch> batches;
    batches.reserve(steps_per_epoch(data.size(), batch_size));
    for (size_t start = 0; start < order.size(); start += batch_size) {
        const size_t end = std::min(order.size(), start + batch_size);
        Batch b;
        for (size_t i = start; i < end; ++i) {
            b.inputs.push_back(data.xs[order[i]]);
            b.targets.push_back(data.ys[order[i]]);
            b.loss_mask.push_back(data.masks[order[i]]);
        }
        batches.push_back(std::move(b));
    }
    return batches;
}

}  // namespace skt
