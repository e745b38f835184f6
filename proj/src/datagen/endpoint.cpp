// SPDX-License-Identifier: Apache-2.0
#include "skt/datagen/endpoint.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "skt/common/errors.hpp"

namespace skt::datagen {
namespace {

uint64_t mix64(uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    x ^= x >> 33;
    return x;
}

uint64_t hash_request(const ChatRequest& request) {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    auto mix_str = [&h](const std::string& s) {
        for (char c : s) h = mix64(h ^ static_cast<unsigned char>(c));
    };
    mix_str(request.model);
    for (const auto& m : request.messages) {
        mix_str(m.role);
        mix_str(m.content);
    }
    return h;
}

std::string hex16(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool contains(const std::string& haystack, const char* needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

MockEndpoint::MockEndpoint(size_t fail_first_n) : fail_first_n_(fail_first_n) {}

std::string MockEndpoint::complete(const ChatRequest& request) {
    const size_t call = calls_.fetch_add(1);
    if (call < fail_first_n_)
        throw EndpointError("mock endpoint: injected failure " +
                            std::to_string(call + 1));

    std::string prompt;
    for (const auto& m : request.messages) prompt += m.content;
    const uint64_t h = hash_request(request);
    const std::string tag = hex16(h);

    if (contains(prompt, "[/FLAW_METADATA]")) {
        return "[PROBLEM]\nImplement routine " + tag +
               " so it satisfies the stated contract.\n[/PROBLEM]\n"
               "[SOURCE_CODE]\ndef routine_" + tag.substr(0, 6) +
               "(xs):\n    total = 0\n    for x in xs:\n        total = total + x * x\n"
               "    return total  # flaw " + tag.substr(6, 4) + "\n[/SOURCE_CODE]\n"
               "[FLAW_METADATA]\nrecomputes work in the loop; flaw id " + tag +
               "\n[/FLAW_METADATA]\n";
    }
    if (contains(prompt, "[/EDIT_EXPLANATION]")) {
        return "[TARGET_CODE]\ndef routine_fixed(xs):\n    return sum(x * x for x in xs)"
               "  # fixed " + tag.substr(0, 6) + "\n[/TARGET_CODE]\n"
               "[EDIT_EXPLANATION]\nHoisted the accumulation into a builtin; id " +
               tag + "\n[/EDIT_EXPLANATION]\n";
    }
    if (contains(prompt, "[/INSTRUCTION]")) {
        if (contains(prompt, "the conversational format:") ||
            contains(prompt, "in the conversational format")) {
            return "[USER]\nSpeed up this helper, please; ref " + tag.substr(0, 4) +
                   "\n[/USER]\n[ASSISTANT]\nI rewrote the loop as a builtin sum.\n"
                   "[/ASSISTANT]\n[USER]\nAlso keep the behavior identical.\n[/USER]\n"
                   "[ASSISTANT]\nBehavior is unchanged; only the implementation moved.\n"
                   "[/ASSISTANT]\n";
        }
        return "[INSTRUCTION]\nRewrite the routine to avoid redundant work (" +
               tag.substr(0, 8) + ").\n[/INSTRUCTION]\n";
    }
    if (contains(prompt, "[/SCORES]") || contains(prompt, "[SCORES]")) {
        // Scores in 4..10 from independent hash nibbles: most pass the
        // filter, a stable minority fails it.
        std::string scores;
        for (int i = 0; i < 5; ++i) {
            const int v = 4 + static_cast<int>((h >> (8 * i)) % 7);
            scores += std::to_string(v);
            if (i < 4) scores += ",";
        }
        return "[SCORES]" + scores + "[/SCORES]\n";
    }
    throw EndpointError("mock endpoint: unrecognized stage prompt");
}

HttpEndpoint::HttpEndpoint(std::string url) {
    const size_t scheme = url.find("://");
    if (scheme == std::string::npos)
        throw DomainError("endpoint url needs a scheme: " + url);
    const size_t path = url.find('/', scheme + 3);
    if (path == std::string::npos) {
        url_ = url;
        path_ = "/v1/chat/completions";
    } else {
        url_ = url.substr(0, path);
        path_ = url.substr(path);
    }
}

std::string HttpEndpoint::complete(const ChatRequest& request) {
    nlohmann::json body;
    body["model"] = request.model;
    body["temperature"] = request.temperature;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : request.messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});

    httplib::Client client(url_);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    const httplib::Result res = client.Post(path_, body.dump(), "application/json");
    if (!res)
        throw EndpointError("endpoint unreachable: " + url_ + path_);
    if (res->status != 200)
        throw EndpointError("endpoint returned status " +
                            std::to_string(res->status));
    try {
        const nlohmann::json j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw EndpointError("bad chat-completions response: " + std::string(e.what()));
    }
}

std::unique_ptr<Endpoint> make_endpoint(const std::string& spec) {
    if (spec.rfind("mock:", 0) == 0 || spec == "mock") {
        size_t fail_first_n = 0;
        const size_t eq = spec.find("fail=");
        if (eq != std::string::npos)
            fail_first_n = std::stoul(spec.substr(eq + 5));
        return std::make_unique<MockEndpoint>(fail_first_n);
    }
    if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
        return std::make_unique<HttpEndpoint>(spec);
    throw DomainError("unknown endpoint spec: " + spec);
}

std::string complete_with_retries(Endpoint& endpoint, const ChatRequest& request,
                                  int attempts, int backoff_ms) {
    if (attempts < 1) throw DomainError("attempts must be >= 1");
    int delay = backoff_ms;
    for (int attempt = 1;; ++attempt) {
        try {
            return endpoint.complete(request);
        } catch (const EndpointError&) {
            if (attempt >= attempts) throw;
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            delay *= 2;
        }
    }
}

}  // namespace skt::datagen
