#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolweave/calendar_date.hpp"
#include "toolweave/langid.hpp"
#include "toolweave/lm.hpp"
#include "toolweave/prompts.hpp"
#include "toolweave/types.hpp"

namespace toolweave {

struct SamplingConfig {
    double api_prob_threshold = 0.05;  // minimum p(" [") for a candidate position
    size_t max_positions = 5;          // keep the top k positions
    size_t calls_per_position = 5;     // sample up to m calls each
    double temperature = 1.0;
    size_t max_call_len = 64;
};

struct CandidatePosition {
    size_t position = 0;  // 0-based token index the call would precede
    double prob = 0.0;
};

// Tokenized annotation context: the instantiated prompt P(x) followed by the
// document's own tokens, which the model nominally reproduces.
struct AnnotationContext {
    std::vector<std::string> prompt_tokens;
    std::vector<std::string> doc_tokens;
};

AnnotationContext make_context(const ToolPrompt& prompt, std::string_view doc_text);

// p_i = p(" [" | P(x), x_{1:i-1}) for every position; keeps those above the
// threshold, truncated to the max_positions largest (ties: earlier position
// wins), returned sorted by position.
std::vector<CandidatePosition> sample_positions(const LmInterface& lm,
                                                const AnnotationContext& ctx,
                                                const SamplingConfig& cfg);

// Samples up to calls_per_position continuations of [P(x), x_{1:i-1}, " ["]
// ending at "]", parses them, and keeps distinct well-formed calls naming
// `tool`.
std::vector<ApiCall> sample_calls(const LmInterface& lm, const AnnotationContext& ctx,
                                  size_t position, const std::string& tool,
                                  const SamplingConfig& cfg, Rng& rng);

// --- per-tool corpus gates --------------------------------------------------

struct PrefilterResult {
    bool keep = false;
    // Calendar: the date extracted from the document URL.
    std::optional<Date> doc_date;
    // MT: token ranges [begin, end) of the detected foreign chunks.
    std::vector<std::pair<size_t, size_t>> foreign_chunks;
};

// Cheap per-tool document gate applied before sampling. Tools without a
// heuristic pass everything. The seed feeds the calculator's deterministic
// 1% lottery; langid is required for the MT gate.
PrefilterResult prefilter(const Document& doc, std::string_view tool,
                          uint64_t global_seed, const LangId* langid = nullptr);

// Calendar date extraction from a URL, e.g. ".../2017/03/09/post.html".
std::optional<Date> date_from_url(std::string_view url);

// MT hindsight rule: keep a call only if its input occurs before the call
// position or not in the document at all.
bool mt_postfilter(const std::vector<std::string>& doc_tokens, const ApiCall& call,
                   size_t position);

}  // namespace toolweave
