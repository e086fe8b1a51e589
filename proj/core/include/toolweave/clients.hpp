#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "toolweave/langid.hpp"

namespace toolweave {

// External-service contract shared by the QA and MT tools. Implementations
// return nothing on transport failure, timeout, or a missing fixture.
class ServiceClient {
public:
    virtual ~ServiceClient() = default;

    // source_lang is only meaningful for translation requests; transports
    // that have nowhere to put it may ignore it.
    virtual std::optional<std::string> call(std::string_view input,
                                            std::string_view source_lang = {}) const = 0;
};

using ServiceClientPtr = std::shared_ptr<const ServiceClient>;

// Deterministic mock: answers from an input -> output table.
class FixtureClient final : public ServiceClient {
public:
    FixtureClient() = default;
    explicit FixtureClient(std::map<std::string, std::string> fixtures)
        : fixtures_(std::move(fixtures)) {}

    // JSONL of {input, output} objects.
    static FixtureClient from_jsonl(const std::string& path);

    void add(std::string input, std::string output);

    std::optional<std::string> call(std::string_view input,
                                    std::string_view source_lang = {}) const override;

private:
    std::map<std::string, std::string> fixtures_;
};

// POSTs {"input": ..., "source": ...?} as JSON and expects {"output": ...}.
// Plain http only; every call carries a hard timeout.
class HttpClient final : public ServiceClient {
public:
    explicit HttpClient(std::string endpoint_url, int timeout_ms = 5000);

    std::optional<std::string> call(std::string_view input,
                                    std::string_view source_lang = {}) const override;

    size_t failure_count() const { return failures_.load(); }

private:
    std::string host_;
    std::string path_;
    int port_ = 80;
    int timeout_ms_;
    mutable std::atomic<size_t> failures_{0};
};

// Forwards a question to the QA service; single-line answer or nothing.
std::optional<std::string> qa_ask(const ServiceClient& client, std::string_view question);

// Detects the source language, then asks the MT service for an English
// translation. English input is returned unchanged; detection confidence
// below min_confidence yields no result.
std::optional<std::string> mt_translate(const ServiceClient& client, const LangId& langid,
                                        std::string_view text,
                                        double min_confidence = 0.8);

}  // namespace toolweave
