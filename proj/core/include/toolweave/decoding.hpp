#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toolweave/lm.hpp"
#include "toolweave/tool_registry.hpp"
#include "toolweave/types.hpp"

namespace toolweave {

struct DecodeConfig {
    size_t k_api = 10;  // call starts when " [" ranks in the top k_api tokens
    size_t max_api_calls_per_input = 1;
    bool api_disabled = false;     // force the call-start token's mass to zero
    size_t max_tokens = 128;       // generated-token budget
    size_t max_call_tokens = 64;   // in-flight cap; a longer call aborts to plain text
    const ToolRegistry* registry = nullptr;
    ToolContext tool_context;      // session date etc.
};

struct ApiEvent {
    size_t position = 0;  // index of the call-start token in the generated stream
    ApiCall call;
    std::optional<std::string> result;
    double latency_ms = 0.0;  // wall clock; not part of the deterministic output
};

struct DecodeTrace {
    std::string prompt;
    std::string text;                 // generated continuation, results spliced in
    std::vector<std::string> tokens;  // its tokens
    std::vector<ApiEvent> events;
    std::string termination;  // "max_tokens" | "no_continuation"
};

// Greedy generation with call interception. When the call-start token ranks
// within the top k_api and budget remains, the decoder emits it, accumulates
// the call greedily until the arrow token, executes, splices " result]" (or
// just "]" on no result) and resumes. Disabled mode and an exhausted budget
// zero the call-start token before every step. A result splice near the
// token budget is emitted whole, so traces may exceed max_tokens by one
// rendered result.
DecodeTrace generate(const LmInterface& lm, const std::string& prompt,
                     const DecodeConfig& cfg);

// Call-usage accounting over a batch of traces.
struct TraceStats {
    size_t total = 0;
    size_t with_calls = 0;
    std::map<std::string, size_t> calls_per_tool;

    size_t without_calls() const { return total - with_calls; }
    double call_fraction() const {
        return total == 0 ? 0.0 : static_cast<double>(with_calls) / static_cast<double>(total);
    }
};

TraceStats trace_stats(const std::vector<DecodeTrace>& traces);
std::string render_trace_stats(const TraceStats& stats);

}  // namespace toolweave
