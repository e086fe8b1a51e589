#include "toolweave/types.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace toolweave {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json parse_line(const std::string& line, const char* what) {
    ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw std::runtime_error(std::string("malformed ") + what + " record: " + line);
    return j;
}

std::string require_string(const ordered_json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
        throw std::runtime_error(std::string(what) + " record missing string field '" + key + "'");
    return it->get<std::string>();
}

size_t require_position(const ordered_json& j, const char* what) {
    auto it = j.find("position");
    if (it == j.end() || !it->is_number_unsigned())
        throw std::runtime_error(std::string(what) + " record missing unsigned field 'position'");
    return it->get<size_t>();
}

std::optional<std::string> optional_string(const ordered_json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string())
        throw std::runtime_error(std::string("field '") + key + "' is not a string");
    return it->get<std::string>();
}

double require_number(const ordered_json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number())
        throw std::runtime_error(std::string(what) + " record missing numeric field '" + key + "'");
    return it->get<double>();
}

}  // namespace

std::string to_jsonl(const Document& d) {
    ordered_json j;
    j["id"] = d.id;
    j["text"] = d.text;
    if (d.url) j["url"] = *d.url;
    if (d.lang_hint) j["lang_hint"] = *d.lang_hint;
    return j.dump();
}

Document document_from_jsonl(const std::string& line) {
    ordered_json j = parse_line(line, "document");
    Document d;
    d.id = require_string(j, "id", "document");
    d.text = require_string(j, "text", "document");
    d.url = optional_string(j, "url");
    d.lang_hint = optional_string(j, "lang_hint");
    return d;
}

std::string to_jsonl(const CandidateRecord& r) {
    ordered_json j;
    j["doc_id"] = r.doc_id;
    j["position"] = r.position;
    j["tool"] = r.call.tool;
    j["input"] = r.call.input;
    if (r.doc_date) j["doc_date"] = *r.doc_date;
    return j.dump();
}

CandidateRecord candidate_from_jsonl(const std::string& line) {
    ordered_json j = parse_line(line, "candidate");
    CandidateRecord r;
    r.doc_id = require_string(j, "doc_id", "candidate");
    r.position = require_position(j, "candidate");
    r.call.tool = require_string(j, "tool", "candidate");
    r.call.input = require_string(j, "input", "candidate");
    r.doc_date = optional_string(j, "doc_date");
    return r;
}

std::string to_jsonl(const ExecutedRecord& r) {
    ordered_json j;
    j["doc_id"] = r.doc_id;
    j["position"] = r.position;
    j["tool"] = r.executed.call.tool;
    j["input"] = r.executed.call.input;
    if (r.executed.result)
        j["result"] = *r.executed.result;
    else
        j["result"] = nullptr;
    if (r.doc_date) j["doc_date"] = *r.doc_date;
    return j.dump();
}

ExecutedRecord executed_from_jsonl(const std::string& line) {
    ordered_json j = parse_line(line, "executed");
    ExecutedRecord r;
    r.doc_id = require_string(j, "doc_id", "executed");
    r.position = require_position(j, "executed");
    r.executed.call.tool = require_string(j, "tool", "executed");
    r.executed.call.input = require_string(j, "input", "executed");
    r.executed.result = optional_string(j, "result");
    r.doc_date = optional_string(j, "doc_date");
    return r;
}

std::string to_jsonl(const ScoredRecord& r) {
    ordered_json j;
    j["doc_id"] = r.doc_id;
    j["position"] = r.position;
    j["tool"] = r.executed.call.tool;
    j["input"] = r.executed.call.input;
    j["result"] = r.executed.result ? ordered_json(*r.executed.result) : ordered_json(nullptr);
    j["l_plus"] = r.l_plus;
    j["l_minus"] = r.l_minus;
    j["gain"] = r.gain;
    return j.dump();
}

ScoredRecord scored_from_jsonl(const std::string& line) {
    ordered_json j = parse_line(line, "scored");
    ScoredRecord r;
    r.doc_id = require_string(j, "doc_id", "scored");
    r.position = require_position(j, "scored");
    r.executed.call.tool = require_string(j, "tool", "scored");
    r.executed.call.input = require_string(j, "input", "scored");
    r.executed.result = optional_string(j, "result");
    r.l_plus = require_number(j, "l_plus", "scored");
    r.l_minus = require_number(j, "l_minus", "scored");
    r.gain = require_number(j, "gain", "scored");
    return r;
}

std::string to_jsonl(const AnnotatedExample& e) {
    ordered_json j;
    j["doc_id"] = e.doc_id;
    j["text"] = e.text;
    ordered_json arr = ordered_json::array();
    for (const auto& ins : e.insertions) {
        ordered_json o;
        o["char_pos"] = ins.char_pos;
        o["token_pos"] = ins.token_pos;
        o["tool"] = ins.tool;
        o["input"] = ins.input;
        o["result"] = ins.result;
        o["gain"] = ins.gain;
        arr.push_back(std::move(o));
    }
    j["insertions"] = std::move(arr);
    return j.dump();
}

AnnotatedExample annotated_from_jsonl(const std::string& line) {
    ordered_json j = parse_line(line, "annotated");
    AnnotatedExample e;
    e.doc_id = require_string(j, "doc_id", "annotated");
    e.text = require_string(j, "text", "annotated");
    auto it = j.find("insertions");
    if (it == j.end() || !it->is_array())
        throw std::runtime_error("annotated record missing array field 'insertions'");
    for (const auto& o : *it) {
        Insertion ins;
        ins.char_pos = o.at("char_pos").get<size_t>();
        ins.token_pos = o.at("token_pos").get<size_t>();
        ins.tool = o.at("tool").get<std::string>();
        ins.input = o.at("input").get<std::string>();
        ins.result = o.at("result").get<std::string>();
        ins.gain = o.at("gain").get<double>();
        e.insertions.push_back(std::move(ins));
    }
    return e;
}

}  // namespace toolweave
