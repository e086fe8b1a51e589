#include "toolweave/clients.hpp"

#include <fstream>
#include <stdexcept>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "toolweave/util.hpp"

namespace toolweave {

FixtureClient FixtureClient::from_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::map<std::string, std::string> fixtures;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw std::runtime_error("malformed fixture record: " + line);
        fixtures[j.at("input").get<std::string>()] = j.at("output").get<std::string>();
    }
    return FixtureClient(std::move(fixtures));
}

void FixtureClient::add(std::string input, std::string output) {
    fixtures_[std::move(input)] = std::move(output);
}

std::optional<std::string> FixtureClient::call(std::string_view input,
                                               std::string_view /*source_lang*/) const {
    auto it = fixtures_.find(std::string(input));
    if (it == fixtures_.end()) return std::nullopt;
    return it->second;
}

HttpClient::HttpClient(std::string endpoint_url, int timeout_ms) : timeout_ms_(timeout_ms) {
    std::string_view url = endpoint_url;
    constexpr std::string_view scheme = "http://";
    if (url.substr(0, scheme.size()) != scheme)
        throw std::invalid_argument("endpoint must be an http:// URL: " + endpoint_url);
    url.remove_prefix(scheme.size());
    size_t slash = url.find('/');
    std::string_view authority = slash == std::string_view::npos ? url : url.substr(0, slash);
    path_ = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
    size_t colon = authority.find(':');
    if (colon == std::string_view::npos) {
        host_ = std::string(authority);
    } else {
        host_ = std::string(authority.substr(0, colon));
        port_ = std::stoi(std::string(authority.substr(colon + 1)));
    }
    if (host_.empty()) throw std::invalid_argument("endpoint has no host: " + endpoint_url);
}

std::optional<std::string> HttpClient::call(std::string_view input,
                                            std::string_view source_lang) const {
    httplib::Client client(host_, port_);
    client.set_connection_timeout(0, timeout_ms_ * 1000);
    client.set_read_timeout(0, timeout_ms_ * 1000);
    client.set_write_timeout(0, timeout_ms_ * 1000);

    nlohmann::json body;
    body["input"] = std::string(input);
    if (!source_lang.empty()) body["source"] = std::string(source_lang);

    auto res = client.Post(path_, body.dump(), "application/json");
    if (!res || res->status != 200) {
        ++failures_;
        return std::nullopt;
    }
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("output") ||
        !j["output"].is_string()) {
        ++failures_;
        return std::nullopt;
    }
    return j["output"].get<std::string>();
}

std::optional<std::string> qa_ask(const ServiceClient& client, std::string_view question) {
    auto answer = client.call(question);
    if (!answer) return std::nullopt;
    return single_line(*answer);
}

std::optional<std::string> mt_translate(const ServiceClient& client, const LangId& langid,
                                        std::string_view text, double min_confidence) {
    const LangIdResult detected = langid.detect(text);
    if (detected.confidence < min_confidence) return std::nullopt;
    if (detected.language == "en") return single_line(text);
    auto translated = client.call(text, detected.language);
    if (!translated) return std::nullopt;
    return single_line(*translated);
}

}  // namespace toolweave
