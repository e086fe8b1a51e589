#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace toolweave {

// A corpus text; the unit of annotation.
struct Document {
    std::string id;
    std::string text;
    std::optional<std::string> url;
    std::optional<std::string> lang_hint;
};

// A tool invocation: tool name plus text input (empty for Calendar).
struct ApiCall {
    std::string tool;
    std::string input;

    friend bool operator==(const ApiCall& a, const ApiCall& b) {
        return a.tool == b.tool && a.input == b.input;
    }
    friend bool operator<(const ApiCall& a, const ApiCall& b) {
        if (a.tool != b.tool) return a.tool < b.tool;
        return a.input < b.input;
    }
};

// A call together with its response; result is absent when the tool
// returned nothing or errored.
struct ExecutedCall {
    ApiCall call;
    std::optional<std::string> result;
};

// One kept call rendered into an annotated example. char_pos is the byte
// offset into the ORIGINAL document text; token_pos the 0-based token index
// the call precedes.
struct Insertion {
    size_t char_pos = 0;
    size_t token_pos = 0;
    std::string tool;
    std::string input;
    std::string result;
    double gain = 0.0;
};

// An original text interleaved with kept calls. `text` is the spliced
// result; removing each rendered insertion restores the original.
struct AnnotatedExample {
    std::string doc_id;
    std::string text;
    std::vector<Insertion> insertions;  // sorted ascending by token_pos
};

// --- pipeline stage records ------------------------------------------------

// Output of the annotate stage: one sampled candidate call.
struct CandidateRecord {
    std::string doc_id;
    size_t position = 0;  // 0-based token index the call would precede
    ApiCall call;
    // Document date extracted by the calendar prefilter (ISO yyyy-mm-dd);
    // carried so the execute stage can answer Calendar calls.
    std::optional<std::string> doc_date;
};

// Output of the execute stage.
struct ExecutedRecord {
    std::string doc_id;
    size_t position = 0;
    ExecutedCall executed;
    std::optional<std::string> doc_date;
};

// Output of the scoring stage (gains for every executed call with a result).
struct ScoredRecord {
    std::string doc_id;
    size_t position = 0;
    ExecutedCall executed;
    double l_plus = 0.0;
    double l_minus = 0.0;
    double gain = 0.0;
};

// --- JSONL (one object per line, deterministic field order) ----------------

std::string to_jsonl(const Document& d);
std::string to_jsonl(const CandidateRecord& r);
std::string to_jsonl(const ExecutedRecord& r);
std::string to_jsonl(const ScoredRecord& r);
std::string to_jsonl(const AnnotatedExample& e);

// Parsers throw std::runtime_error on malformed input.
Document document_from_jsonl(const std::string& line);
CandidateRecord candidate_from_jsonl(const std::string& line);
ExecutedRecord executed_from_jsonl(const std::string& line);
ScoredRecord scored_from_jsonl(const std::string& line);
AnnotatedExample annotated_from_jsonl(const std::string& line);

}  // namespace toolweave
