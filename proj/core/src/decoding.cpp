#include "toolweave/decoding.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "toolweave/calls.hpp"
#include "toolweave/tokenizer.hpp"

namespace toolweave {

namespace {

std::string argmax_token(const std::vector<TokenProb>& dist, std::string_view excluded) {
    const TokenProb* best = nullptr;
    for (const auto& tp : dist) {
        if (!excluded.empty() && tp.token == excluded) continue;
        if (!best || tp.prob > best->prob) best = &tp;  // ties: first in token order
    }
    return best ? best->token : std::string();
}

}  // namespace

DecodeTrace generate(const LmInterface& lm, const std::string& prompt,
                     const DecodeConfig& cfg) {
    if (prompt.empty()) throw std::invalid_argument("generate: empty prompt");
    if (cfg.k_api == 0) throw std::invalid_argument("generate: k_api must be >= 1");

    const std::string api_open = Tokenizer::api_open_token();
    DecodeTrace trace;
    trace.prompt = prompt;
    trace.termination = "max_tokens";

    std::vector<std::string> context = Tokenizer::split(prompt);
    size_t budget = cfg.max_api_calls_per_input;
    bool in_call = false;
    size_t call_start = 0;  // index in trace.tokens of the opening token

    auto emit = [&](const std::string& tok) {
        context.push_back(tok);
        trace.tokens.push_back(tok);
    };

    while (trace.tokens.size() < cfg.max_tokens) {
        auto dist = lm.next_distribution(context);

        if (!in_call) {
            bool may_call = !cfg.api_disabled && budget > 0 && cfg.registry != nullptr;
            if (may_call) {
                auto top = top_k_tokens(dist, cfg.k_api);
                if (std::find(top.begin(), top.end(), api_open) != top.end()) {
                    emit(api_open);
                    in_call = true;
                    call_start = trace.tokens.size() - 1;
                    continue;
                }
            }
            // Not triggering: when calls are off the table the opening token
            // gets zero mass, i.e. it is excluded from the argmax.
            std::string next = argmax_token(dist, may_call ? std::string_view{} : api_open);
            if (next.empty()) {
                trace.termination = "no_continuation";
                break;
            }
            emit(next);
            continue;
        }

        // Call mode: plain greedy until the arrow, a bare close, or the cap.
        std::string next = argmax_token(dist, {});
        if (next.empty()) {
            trace.termination = "no_continuation";
            break;
        }
        emit(next);
        std::string_view t = trim(next);

        if (t == "->") {
            std::string body;
            for (size_t i = call_start + 1; i + 1 < trace.tokens.size(); ++i)
                body += trace.tokens[i];
            in_call = false;
            auto parsed = parse_call(body, cfg.registry->tool_names());
            if (!parsed) continue;  // malformed: keep as plain text, budget untouched

            --budget;
            ApiEvent ev;
            ev.position = call_start;
            ev.call = *parsed;
            auto t0 = std::chrono::steady_clock::now();
            ev.result = cfg.registry->execute(*parsed, cfg.tool_context);
            ev.latency_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            std::string rendered = ev.result ? " " + *ev.result + "]" : "]";
            for (const auto& tok : Tokenizer::split(rendered)) emit(tok);
            trace.events.push_back(std::move(ev));
            continue;
        }
        if (t == "]") {
            in_call = false;  // model closed the call itself; nothing to run
            continue;
        }
        if (trace.tokens.size() - call_start >= cfg.max_call_tokens) {
            in_call = false;  // runaway call; treat what was emitted as text
        }
    }

    for (const auto& tok : trace.tokens) trace.text += tok;
    return trace;
}

TraceStats trace_stats(const std::vector<DecodeTrace>& traces) {
    TraceStats stats;
    stats.total = traces.size();
    for (const auto& tr : traces) {
        if (!tr.events.empty()) ++stats.with_calls;
        for (const auto& ev : tr.events) ++stats.calls_per_tool[ev.call.tool];
    }
    return stats;
}

std::string render_trace_stats(const TraceStats& stats) {
    std::ostringstream out;
    out << "traces: " << stats.total << "  with calls: " << stats.with_calls
        << "  without: " << stats.without_calls() << "  call rate: ";
    out.precision(1);
    out << std::fixed << 100.0 * stats.call_fraction() << "%\n";
    for (const auto& [tool, n] : stats.calls_per_tool)
        out << "  " << tool << ": " << n << '\n';
    return out.str();
}

}  // namespace toolweave
