// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace skt::decontam {

struct MinHashParams {
    size_t num_hashes = 128;
    size_t shingle_k = 5;
    uint64_t seed = 0;
};

// Sorted unique hashes of lowercased, whitespace-normalized word k-grams.
using ShingleSet = std::vector<uint64_t>;

ShingleSet shingle(const std::string& text, size_t k);

// |A ∩ B| / |A ∪ B|; two empty sets count as identical (1.0).
double exact_jaccard(const ShingleSet& a, const ShingleSet& b);

struct MinHashSignature {
    MinHashParams params;
    std::vector<uint64_t> minima;
};

MinHashSignature minhash(const ShingleSet& shingles, const MinHashParams& params);

// Fraction of agreeing signature positions. Throws DomainError when the two
// signatures were built with different params.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

struct LshParams {
    size_t bands = 16;
    size_t rows = 8;  // bands * rows must equal num_hashes
};

struct Candidate {
    std::string id;
    double estimate = 0.0;
};

// Banded LSH over MinHash signatures: single-writer build, concurrent-read
// queries after build.
class LshIndex {
public:
    LshIndex(MinHashParams mh_params, LshParams lsh_params);

    void add(const std::string& id, const MinHashSignature& signature);
    size_t size() const { return ids_.size(); }

    // Ids sharing at least one band bucket with estimated Jaccard >= threshold.
    std::vector<Candidate> query(const MinHashSignature& signature,
                                 double threshold) const;

private:
    uint64_t band_hash(const MinHashSignature& sig, size_t band) const;

    MinHashParams mh_params_;
    LshParams lsh_params_;
    std::vector<std::string> ids_;
    std::vector<MinHashSignature> signatures_;
    std::vector<std::unordered_map<uint64_t, std::vector<size_t>>> buckets_;
};

struct FlaggedPair {
    std::string train_id;
    std::string benchmark_id;
    double estimate = 0.0;
};

struct DecontamReport {
    size_t train_records = 0;
    size_t benchmark_docs = 0;
    double threshold = 0.8;
    std::vector<FlaggedPair> flagged;
    std::string to_json() const;
};

// Index every benchmark file (one document per file in the directory), then
// query each training JSONL record's text against it.
DecontamReport scan_files(const std::filesystem::path& train_jsonl,
                          const std::filesystem::path& benchmarks_dir,
                          double threshold, const MinHashParams& mh_params = {},
                          const LshParams& lsh_params = {});

}  // namespace skt::decontam
