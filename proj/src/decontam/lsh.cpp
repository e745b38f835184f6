// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "skt/common/errors.hpp"
#include "skt/decontam/decontam.hpp"

namespace skt::decontam {
namespace {

uint64_t mix_band(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

// Concatenate every string value in the record, in document order, so any
// JSONL schema (flat or nested) yields a stable text to shingle.
void collect_strings(const nlohmann::json& j, std::string& out) {
    if (j.is_string()) {
        if (!out.empty()) out.push_back(' ');
        out += j.get<std::string>();
    } else if (j.is_array()) {
        for (const auto& v : j) collect_strings(v, out);
    } else if (j.is_object()) {
        for (const auto& [key, v] : j.items()) {
            (void)key;
            collect_strings(v, out);
        }
    }
}

}  // namespace

LshIndex::LshIndex(MinHashParams mh_params, LshParams lsh_params)
    : mh_params_(mh_params), lsh_params_(lsh_params) {
    if (lsh_params_.bands == 0 || lsh_params_.rows == 0) {
        throw DomainError("LshIndex: bands and rows must be positive");
    }
    if (lsh_params_.bands * lsh_params_.rows != mh_params_.num_hashes) {
        throw DomainError("LshIndex: bands * rows must equal num_hashes");
    }
    buckets_.resize(lsh_params_.bands);
}

uint64_t LshIndex::band_hash(const MinHashSignature& sig, size_t band) const {
    uint64_t h = 0x811c9dc5ULL ^ band;
    const size_t start = band * lsh_params_.rows;
    for (size_t r = 0; r < lsh_params_.rows; ++r) h = mix_band(h, sig.minima[start + r]);
    return h;
}

void LshIndex::add(const std::string& id, const MinHashSignature& signature) {
    if (signature.params.num_hashes != mh_params_.num_hashes ||
        signature.params.shingle_k != mh_params_.shingle_k ||
        signature.params.seed != mh_params_.seed) {
        throw DomainError("LshIndex::add: signature params do not match index");
    }
    const size_t idx = ids_.size();
    ids_.push_back(id);
    signatures_.push_back(signature);
    for (size_t band = 0; band < lsh_params_.bands; ++band) {
        buckets_[band][band_hash(signature, band)].push_back(idx);
    }
}

std::vector<Candidate> LshIndex::query(const MinHashSignature& signature,
                                       double threshold) const {
    if (signature.params.num_hashes != mh_params_.num_hashes ||
        signature.params.shingle_k != mh_params_.shingle_k ||
        signature.params.seed != mh_params_.seed) {
        throw DomainError("LshIndex::query: signature params do not match index");
    }
    std::vector<size_t> candidates;
    for (size_t band = 0; band < lsh_params_.bands; ++band) {
        const auto it = buckets_[band].find(band_hash(signature, band));
        if (it == buckets_[band].end()) continue;
        candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<Candidate> out;
    for (size_t idx : candidates) {
        const double est = estimate_jaccard(signature, signatures_[idx]);
        if (est >= threshold) out.push_back({ids_[idx], est});
    }
    return out;
}

std::string DecontamReport::to_json() const {
    nlohmann::json j;
    j["train_records"] = train_records;
    j["benchmark_docs"] = benchmark_docs;
    j["threshold"] = threshold;
    j["flagged"] = nlohmann::json::array();
    for (const auto& pair : flagged) {
        j["flagged"].push_back({{"train_id", pair.train_id},
                                {"benchmark_id", pair.benchmark_id},
                                {"estimate", pair.estimate}});
    }
    return j.dump(2);
}

DecontamReport scan_files(const std::filesystem::path& train_jsonl,
                          const std::filesystem::path& benchmarks_dir,
                          double threshold, const MinHashParams& mh_params,
                          const LshParams& lsh_params) {
    if (!std::filesystem::is_regular_file(train_jsonl)) {
        throw DomainError("scan_files: training file not found: " + train_jsonl.string());
    }
    if (!std::filesystem::is_directory(benchmarks_dir)) {
        throw DomainError("scan_files: benchmark directory not found: " +
                          benchmarks_dir.string());
    }

    DecontamReport report;
    report.threshold = threshold;

    LshIndex index(mh_params, lsh_params);
    std::vector<std::filesystem::path> bench_files;
    for (const auto& entry : std::filesystem::directory_iterator(benchmarks_dir)) {
        if (entry.is_regular_file()) bench_files.push_back(entry.path());
    }
    std::sort(bench_files.begin(), bench_files.end());
    for (const auto& path : bench_files) {
        std::ifstream in(path);
        std::stringstream buf;
        buf << in.rdbuf();
        index.add(path.filename().string(),
                  minhash(shingle(buf.str(), mh_params.shingle_k), mh_params));
    }
    report.benchmark_docs = index.size();

    std::ifstream in(train_jsonl);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("scan_files: " + train_jsonl.string() + ":" +
                             std::to_string(lineno) + ": " + e.what());
        }
        std::string id = "line" + std::to_string(lineno);
        if (rec.is_object() && rec.contains("id") && rec["id"].is_string()) {
            id = rec["id"].get<std::string>();
        }
        std::string text;
        collect_strings(rec, text);
        ++report.train_records;
        const auto sig = minhash(shingle(text, mh_params.shingle_k), mh_params);
        for (const auto& cand : index.query(sig, threshold)) {
            report.flagged.push_back({id, cand.id, cand.estimate});
        }
    }
    return report;
}

}  // namespace skt::decontam
