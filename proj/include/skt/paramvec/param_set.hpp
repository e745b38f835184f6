// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skt {

// Ordered collection of uniquely named flat fp32 arrays. Order is part of the
// value: serialization and alignment checks preserve and compare it.
struct NamedParam {
    std::string name;
    std::vector<float> values;
};

class NamedParamSet {
public:
    NamedParamSet() = default;

    void add(std::string name, std::vector<float> values);

    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    size_t total_length() const;

    bool has(std::string_view name) const;
    const std::vector<float>& at(std::string_view name) const;
    std::vector<float>& at(std::string_view name);

    const NamedParam& entry(size_t i) const { return entries_[i]; }
    NamedParam& entry(size_t i) { return entries_[i]; }
    const std::vector<NamedParam>& entries() const { return entries_; }

    // Same names in the same order with the same lengths. Throws
    // AlignmentError naming the first offending entry otherwise.
    static void check_aligned(const NamedParamSet& a, const NamedParamSet& b);

    // Bitwise equality of names, order, and float payloads.
    friend bool operator==(const NamedParamSet& a, const NamedParamSet& b);

private:
    std::vector<NamedParam> entries_;
};

// A model delta θ − θ_base. Same representation; the alias marks intent.
using TaskVector = NamedParamSet;

enum class MaskScope : uint8_t { Global, PerLayer };

std::string_view to_string(MaskScope scope);
MaskScope mask_scope_from_string(std::string_view text);

// Binary selection mask aligned with a NamedParamSet.
struct SparseMask {
    struct Entry {
        std::string name;
        std::vector<uint8_t> bits;  // one byte per coordinate, 0 or 1
    };
    std::vector<Entry> entries;
    MaskScope scope = MaskScope::PerLayer;
    double alpha = 0.0;

    size_t popcount() const;
    size_t total_length() const;

    // Throws AlignmentError if the mask does not line up with `params`.
    void check_aligned_with(const NamedParamSet& params) const;
};

struct MergeConfig {
    double density = 0.5;
    double weight = 0.5;
};

}  // namespace skt
