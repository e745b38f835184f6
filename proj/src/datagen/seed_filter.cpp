// SPDX-License-Identifier: Apache-2.0
#include "skt/datagen/seed_filter.hpp"

#include <regex>

#include "skt/common/errors.hpp"

namespace skt::datagen {
namespace {

// C-family control flow shared by several languages.
const char* kCFlow = R"(\b(for|while|if|switch)\s*\()";

struct LanguageRules {
    const char* name;
    std::vector<std::regex> patterns;
};

std::vector<LanguageRules> build_rules() {
    using R = std::regex;
    const auto F = [](const char* p) { return R(p, R::ECMAScript); };
    std::vector<LanguageRules> rules;
    rules.push_back({"python",
                     {F(R"(\bdef\s+\w+\s*\()"), F(R"(\bclass\s+\w+)"),
                      F(R"(\bfor\s+\w+[\w,\s]*\s+in\b)"), F(R"(\bwhile\b.*:)"),
                      F(R"(\bif\b.*:)"), F(R"(\belif\b.*:)")}});
    rules.push_back({"c",
                     {F(kCFlow), F(R"(\bdo\s*\{)"),
                      F(R"([\w\*]+\s+\**\w+\s*\([^;{}]*\)\s*\{)")}});
    rules.push_back({"cpp",
                     {F(kCFlow), F(R"(\bdo\s*\{)"), F(R"(\b(class|struct)\s+\w+)"),
                      F(R"([\w\*:<>]+\s+\**[\w:]+\s*\([^;{}]*\)\s*(const\s*)?\{)")}});
    rules.push_back({"java",
                     {F(kCFlow), F(R"(\b(class|interface|enum)\s+\w+)"),
                      F(R"(\b(public|private|protected|static|final)\b[^;{}]*\([^;{}]*\)\s*\{)")}});
    rules.push_back({"javascript",
                     {F(kCFlow), F(R"(\bfunction\b)"), F(R"(=>)"),
                      F(R"(\bclass\s+\w+)")}});
    rules.push_back({"rust",
                     {F(R"(\bfn\s+\w+)"), F(R"(\b(impl|struct|enum|trait)\s+\w+)"),
                      F(R"(\b(for|while|if|match)\s)"), F(R"(\bloop\s*\{)")}});
    rules.push_back({"go",
                     {F(R"(\bfunc\s)"), F(R"(\b(for|if|switch|select)\s)"),
                      F(R"(\btype\s+\w+\s+(struct|interface)\b)")}});
    rules.push_back({"kotlin",
                     {F(R"(\bfun\s+\w+)"), F(R"(\b(class|object|interface)\s+\w+)"),
                      F(kCFlow), F(R"(\bwhen\s*[\({])")}});
    return rules;
}

const std::vector<LanguageRules>& rules() {
    static const std::vector<LanguageRules> r = build_rules();
    return r;
}

std::string normalize_language(std::string_view language) {
    std::string lower(language);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "c++") return "cpp";
    if (lower == "js") return "javascript";
    return lower;
}

}  // namespace

const std::vector<std::string>& supported_languages() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& r : rules()) v.push_back(r.name);
        return v;
    }();
    return names;
}

bool is_supported_language(std::string_view language) {
    const std::string norm = normalize_language(language);
    for (const auto& r : rules())
        if (norm == r.name) return true;
    return false;
}

size_t count_lines(const std::string& text) {
    if (text.empty()) return 0;
    size_t lines = 0;
    for (char c : text) lines += c == '\n';
    if (text.back() != '\n') ++lines;
    return lines;
}

bool contains_logic(std::string_view language, const std::string& text) {
    const std::string norm = normalize_language(language);
    for (const auto& r : rules()) {
        if (norm != r.name) continue;
        for (const auto& pattern : r.patterns)
            if (std::regex_search(text, pattern)) return true;
        return false;
    }
    throw DomainError("unsupported language: " + std::string(language));
}

SeedSample make_seed_sample(std::string id, std::string language,
                            std::string text) {
    SeedSample s;
    s.id = std::move(id);
    s.language = normalize_language(language);
    s.has_logic = contains_logic(s.language, text);
    s.line_count = count_lines(text);
    s.text = std::move(text);
    return s;
}

bool filter_seed(const SeedSample& sample) {
    if (!is_supported_language(sample.language))
        throw DomainError("unsupported language: " + sample.language);
    return sample.line_count > 10 && sample.has_logic;
}

}  // namespace skt::datagen
