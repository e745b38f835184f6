// SPDX-License-Identifier: Apache-2.0
#include "skt/paramvec/param_set.hpp"

#include <cstring>

#include "skt/common/errors.hpp"
#include "skt/kernels/kernels.hpp"

namespace skt {

void NamedParamSet::add(std::string name, std::vector<float> values) {
    if (name.empty()) throw DomainError("parameter name must be non-empty");
    if (has(name)) throw DomainError("duplicate parameter name: " + name);
    entries_.push_back({std::move(name), std::move(values)});
}

size_t NamedParamSet::total_length() const {
    size_t n = 0;
    for (const auto& e : entries_) n += e.values.size();
    return n;
}

bool NamedParamSet::has(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return true;
    return false;
}

const std::vector<float>& NamedParamSet::at(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return e.values;
    throw DomainError("no parameter named: " + std::string(name));
}

std::vector<float>& NamedParamSet::at(std::string_view name) {
    for (auto& e : entries_)
        if (e.name == name) return e.values;
    throw DomainError("no parameter named: " + std::string(name));
}

void NamedParamSet::check_aligned(const NamedParamSet& a, const NamedParamSet& b) {
    const size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        const auto& ea = a.entries_[i];
        const auto& eb = b.entries_[i];
        if (ea.name != eb.name)
            throw AlignmentError("name mismatch at entry " + std::to_string(i) +
                                 ": '" + ea.name + "' vs '" + eb.name + "'");
        if (ea.values.size() != eb.values.size())
            throw AlignmentError("length mismatch for '" + ea.name + "': " +
                                 std::to_string(ea.values.size()) + " vs " +
                                 std::to_string(eb.values.size()));
    }
    if (a.size() != b.size()) {
        const auto& longer = a.size() > b.size() ? a : b;
        throw AlignmentError("entry count mismatch: " + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) +
                             "; first unmatched entry '" +
                             longer.entries_[n].name + "'");
    }
}

bool operator==(const NamedParamSet& a, const NamedParamSet& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        const auto& ea = a.entries_[i];
        const auto& eb = b.entries_[i];
        if (ea.name != eb.name || ea.values.size() != eb.values.size())
            return false;
        if (!ea.values.empty() &&
            std::memcmp(ea.values.data(), eb.values.data(),
                        ea.values.size() * sizeof(float)) != 0)
            return false;
    }
    return true;
}

size_t SparseMask::popcount() const {
    size_t ones = 0;
    for (const auto& e : entries)
        for (uint8_t b : e.bits) ones += b != 0;
    return ones;
}

size_t SparseMask::total_length() const {
    size_t n = 0;
    for (const auto& e : entries) n += e.bits.size();
    return n;
}

void SparseMask::check_aligned_with(const NamedParamSet& params) const {
    const size_t n = std::min(entries.size(), params.size());
    for (size_t i = 0; i < n; ++i) {
        const auto& em = entries[i];
        const auto& ep = params.entry(i);
        if (em.name != ep.name)
            throw AlignmentError("mask name mismatch at entry " + std::to_string(i) +
                                 ": '" + em.name + "' vs '" + ep.name + "'");
        if (em.bits.size() != ep.values.size())
            throw AlignmentError("mask length mismatch for '" + em.name + "': " +
                                 std::to_string(em.bits.size()) + " vs " +
                                 std::to_string(ep.values.size()));
    }
    if (entries.size() != params.size())
        throw AlignmentError("mask entry count mismatch: " +
                             std::to_string(entries.size()) + " vs " +
                             std::to_string(params.size()));
}

std::string_view to_string(MaskScope scope) {
    return scope == MaskScope::Global ? "global" : "per-layer";
}

MaskScope mask_scope_from_string(std::string_view text) {
    if (text == "global") return MaskScope::Global;
    if (text == "per-layer" || text == "per_layer") return MaskScope::PerLayer;
    throw DomainError("unknown mask scope: " + std::string(text));
}

}  // namespace skt
