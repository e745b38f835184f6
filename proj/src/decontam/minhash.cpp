// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

#include "skt/common/errors.hpp"
#include "skt/common/rng.hpp"
#include "skt/decontam/decontam.hpp"

namespace skt::decontam {
namespace {

uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

uint64_t hash_bytes(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::string> normalized_words(const std::string& text) {
    std::vector<std::string> words;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            if (!cur.empty()) {
                words.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    if (!cur.empty()) words.push_back(cur);
    return words;
}

}  // namespace

ShingleSet shingle(const std::string& text, size_t k) {
    if (k == 0) throw DomainError("shingle: k must be positive");
    const auto words = normalized_words(text);
    ShingleSet out;
    if (words.size() < k) return out;
    for (size_t i = 0; i + k <= words.size(); ++i) {
        std::string gram = words[i];
        for (size_t j = 1; j < k; ++j) {
            gram.push_back(' ');
            gram += words[i + j];
        }
        out.push_back(hash_bytes(gram));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double exact_jaccard(const ShingleSet& a, const ShingleSet& b) {
    if (a.empty() && b.empty()) return 1.0;
    size_t inter = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

MinHashSignature minhash(const ShingleSet& shingles, const MinHashParams& params) {
    if (params.num_hashes == 0) throw DomainError("minhash: num_hashes must be positive");
    MinHashSignature sig;
    sig.params = params;
    sig.minima.assign(params.num_hashes, std::numeric_limits<uint64_t>::max());
    for (size_t i = 0; i < params.num_hashes; ++i) {
        const uint64_t hash_seed = derive_seed(params.seed, i);
        uint64_t best = std::numeric_limits<uint64_t>::max();
        for (uint64_t s : shingles) best = std::min(best, mix64(s ^ hash_seed));
        sig.minima[i] = best;
    }
    return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.params.num_hashes != b.params.num_hashes ||
        a.params.shingle_k != b.params.shingle_k || a.params.seed != b.params.seed) {
        throw DomainError("estimate_jaccard: signatures built with different params");
    }
    if (a.minima.size() != a.params.num_hashes || b.minima.size() != b.params.num_hashes) {
        throw DomainError("estimate_jaccard: signature length does not match params");
    }
    size_t agree = 0;
    for (size_t i = 0; i < a.minima.size(); ++i) {
        if (a.minima[i] == b.minima[i]) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(a.minima.size());
}

}  // namespace skt::decontam
