#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "toolweave/filtering.hpp"
#include "toolweave/lm.hpp"
#include "toolweave/sampling.hpp"
#include "toolweave/tool_registry.hpp"
#include "toolweave/types.hpp"

namespace toolweave {

inline constexpr const char* kVersion = "0.1.0";

// Everything a run needs, loadable from one JSON document. Unknown keys are
// rejected so a typo cannot silently fall back to a default.
struct PipelineConfig {
    std::string corpus;
    std::string output_dir = "out";
    uint64_t seed = 42;
    size_t workers = 1;
    size_t window_tokens = 1024;  // documents are annotated in independent windows
    std::vector<std::string> tools = {"QA", "Calculator", "WikiSearch", "MT", "Calendar"};

    std::string lm_path;     // serialized reference n-gram model
    std::string index_path;  // serialized search index
    std::string qa_endpoint;
    std::string mt_endpoint;
    std::string qa_fixture;  // JSONL {input, output} mock responses
    std::string mt_fixture;
    double mt_min_confidence = 0.8;

    SamplingConfig sampling;
    std::map<std::string, SamplingConfig> sampling_overrides;
    FilterConfig filter;

    PipelineConfig();  // installs the standard Calculator/MT overrides

    const SamplingConfig& sampling_for(const std::string& tool) const;

    static PipelineConfig from_json(const std::string& text);
    static PipelineConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

// One manifest per stage invocation: the full config, input hash, counts,
// and wall-clock time. Timing lives only here so data files stay
// byte-reproducible.
struct RunManifest {
    std::string stage;
    std::string status = "ok";
    uint64_t input_hash = 0;
    std::map<std::string, size_t> counts;
    double wall_seconds = 0.0;
    std::string config_json;

    std::string to_json() const;
};

// Index-ordered parallel map: output[i] is fn(items[i]) regardless of the
// worker count, so parallelism can never change a result.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, size_t workers, Fn fn)
    -> std::vector<decltype(fn(items.front()))> {
    using Out = decltype(fn(items.front()));
    std::vector<Out> out(items.size());
    if (items.empty()) return out;
    workers = std::max<size_t>(1, std::min(workers, items.size()));
    if (workers == 1) {
        for (size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
        return out;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1))
                out[i] = fn(items[i]);
        });
    for (auto& t : pool) t.join();
    return out;
}

// --- corpus and stage I/O ---------------------------------------------------

std::vector<Document> read_corpus(const std::string& path);

// JSONL with a schema header line; loaders verify the schema name.
void write_records(const std::string& path, const std::string& schema,
                   const std::vector<std::string>& lines);
std::vector<std::string> read_records(const std::string& path, const std::string& schema);

// --- in-memory stages (file-free, used by the runners and by tests) ---------

std::vector<CandidateRecord> annotate_documents(const std::vector<Document>& docs,
                                                const LmInterface& lm,
                                                const PipelineConfig& cfg,
                                                const LangId* langid = nullptr);

std::vector<ExecutedRecord> execute_candidates(const std::vector<CandidateRecord>& candidates,
                                               const ToolRegistry& registry,
                                               const PipelineConfig& cfg);

std::vector<ScoredRecord> score_candidates(const std::vector<Document>& docs,
                                           const std::vector<ExecutedRecord>& executed,
                                           const LmInterface& lm, const PipelineConfig& cfg);

// --- file-level stage runners -----------------------------------------------

struct StageResult {
    size_t in = 0;
    size_t out = 0;
    std::string output_path;
};

// corpus → candidates.jsonl
StageResult run_annotate(const PipelineConfig& cfg, const LmInterface& lm,
                         const LangId* langid = nullptr);
// candidates.jsonl → executed.jsonl
StageResult run_execute(const PipelineConfig& cfg, const ToolRegistry& registry);
// executed.jsonl → scored.jsonl + dataset.jsonl + stats.{txt,json}
StageResult run_filter(const PipelineConfig& cfg, const LmInterface& lm);
// scored.jsonl → stats re-render (stdout text returned)
std::string run_stats(const PipelineConfig& cfg);

// Builds the registry a run needs from the config: always Calculator and
// Calendar, plus WikiSearch/QA/MT when an index/endpoint/fixture is given.
// Endpoint environment overrides are applied by the CLI before this call.
struct RuntimeBundle {
    std::shared_ptr<const SearchIndex> index;
    std::shared_ptr<const LangId> langid;
    ToolRegistry registry;
};
RuntimeBundle make_runtime(const PipelineConfig& cfg);

}  // namespace toolweave
