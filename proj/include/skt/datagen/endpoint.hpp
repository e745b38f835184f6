// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <memory>

#include "skt/datagen/types.hpp"

namespace skt::datagen {

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.6;
};

// A chat-completion backend: returns the assistant message content or throws
// EndpointError.
class Endpoint {
public:
    virtual ~Endpoint() = default;
    virtual std::string name() const = 0;
    virtual std::string complete(const ChatRequest& request) = 0;
};

// Deterministic stand-in for a real LLM: replies are a pure function of the
// request content, shaped to satisfy whichever stage prompt it detects.
// Quality scores vary with the request hash so a realistic share of
// instances fails the filter.
class MockEndpoint : public Endpoint {
public:
    // fail_first_n: that many leading calls throw (retry/backoff testing).
    explicit MockEndpoint(size_t fail_first_n = 0);

    std::string name() const override { return "mock"; }
    std::string complete(const ChatRequest& request) override;

    size_t calls() const { return calls_.load(); }

private:
    std::atomic<size_t> calls_{0};
    size_t fail_first_n_;
};

// POSTs {model, messages, temperature} to an OpenAI-style chat-completions
// URL and returns choices[0].message.content.
class HttpEndpoint : public Endpoint {
public:
    explicit HttpEndpoint(std::string url);

    std::string name() const override { return url_; }
    std::string complete(const ChatRequest& request) override;

private:
    std::string url_;   // scheme://host:port
    std::string path_;  // request path
};

// "mock:" or "mock:fail=N" -> MockEndpoint; http://... -> HttpEndpoint.
std::unique_ptr<Endpoint> make_endpoint(const std::string& spec);

// Up to `attempts` tries with exponential backoff starting at backoff_ms.
std::string complete_with_retries(Endpoint& endpoint, const ChatRequest& request,
                                  int attempts = 3, int backoff_ms = 50);

}  // namespace skt::datagen
