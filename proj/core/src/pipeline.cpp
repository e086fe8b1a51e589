#include "toolweave/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "toolweave/calls.hpp"
#include "toolweave/ngram_lm.hpp"
#include "toolweave/prompts.hpp"
#include "toolweave/tokenizer.hpp"

namespace toolweave {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kCandidateSchema = "toolweave.candidates.v1";
constexpr const char* kExecutedSchema = "toolweave.executed.v1";
constexpr const char* kScoredSchema = "toolweave.scored.v1";

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known)
            throw std::runtime_error("config: unknown key \"" + key + "\" in " + where);
    }
}

SamplingConfig parse_sampling(const json& j, SamplingConfig base, const std::string& where) {
    reject_unknown_keys(j,
                        {"api_prob_threshold", "max_positions", "calls_per_position",
                         "temperature", "max_call_len"},
                        where);
    if (j.contains("api_prob_threshold"))
        base.api_prob_threshold = j.at("api_prob_threshold").get<double>();
    if (j.contains("max_positions")) base.max_positions = j.at("max_positions").get<size_t>();
    if (j.contains("calls_per_position"))
        base.calls_per_position = j.at("calls_per_position").get<size_t>();
    if (j.contains("temperature")) base.temperature = j.at("temperature").get<double>();
    if (j.contains("max_call_len")) base.max_call_len = j.at("max_call_len").get<size_t>();
    return base;
}

ordered_json sampling_to_json(const SamplingConfig& s) {
    ordered_json j;
    j["api_prob_threshold"] = s.api_prob_threshold;
    j["max_positions"] = s.max_positions;
    j["calls_per_position"] = s.calls_per_position;
    j["temperature"] = s.temperature;
    j["max_call_len"] = s.max_call_len;
    return j;
}

uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return 0;
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64(buf.str());
}

void write_manifest(const PipelineConfig& cfg, RunManifest manifest) {
    std::filesystem::create_directories(cfg.output_dir);
    manifest.config_json = cfg.to_json();
    std::ofstream out(cfg.output_dir + "/" + manifest.stage + "_manifest.json");
    out << manifest.to_json() << '\n';
}

class StageTimer {
public:
    StageTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

PipelineConfig::PipelineConfig() {
    // The calculator and translation gates pass few documents, so those two
    // tools sample harder and keep more.
    SamplingConfig aggressive;
    aggressive.api_prob_threshold = 0.0;
    aggressive.max_positions = 20;
    aggressive.calls_per_position = 10;
    sampling_overrides["Calculator"] = aggressive;
    sampling_overrides["MT"] = aggressive;
    filter.min_gain_per_tool["Calculator"] = 0.5;
    filter.min_gain_per_tool["MT"] = 0.5;
}

const SamplingConfig& PipelineConfig::sampling_for(const std::string& tool) const {
    auto it = sampling_overrides.find(tool);
    return it == sampling_overrides.end() ? sampling : it->second;
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    reject_unknown_keys(j,
                        {"corpus", "output_dir", "seed", "workers", "window_tokens", "tools",
                         "lm_path", "index_path", "qa_endpoint", "mt_endpoint", "qa_fixture",
                         "mt_fixture", "mt_min_confidence", "sampling", "sampling_overrides",
                         "min_gain", "min_gain_overrides", "example_cap"},
                        "top level");
    PipelineConfig cfg;
    if (j.contains("corpus")) cfg.corpus = j.at("corpus").get<std::string>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<size_t>();
    if (j.contains("window_tokens")) cfg.window_tokens = j.at("window_tokens").get<size_t>();
    if (j.contains("tools")) cfg.tools = j.at("tools").get<std::vector<std::string>>();
    if (j.contains("lm_path")) cfg.lm_path = j.at("lm_path").get<std::string>();
    if (j.contains("index_path")) cfg.index_path = j.at("index_path").get<std::string>();
    if (j.contains("qa_endpoint")) cfg.qa_endpoint = j.at("qa_endpoint").get<std::string>();
    if (j.contains("mt_endpoint")) cfg.mt_endpoint = j.at("mt_endpoint").get<std::string>();
    if (j.contains("qa_fixture")) cfg.qa_fixture = j.at("qa_fixture").get<std::string>();
    if (j.contains("mt_fixture")) cfg.mt_fixture = j.at("mt_fixture").get<std::string>();
    if (j.contains("mt_min_confidence"))
        cfg.mt_min_confidence = j.at("mt_min_confidence").get<double>();
    if (j.contains("sampling"))
        cfg.sampling = parse_sampling(j.at("sampling"), cfg.sampling, "sampling");
    if (j.contains("sampling_overrides")) {
        cfg.sampling_overrides.clear();
        for (const auto& [tool, obj] : j.at("sampling_overrides").items())
            cfg.sampling_overrides[tool] =
                parse_sampling(obj, cfg.sampling, "sampling_overrides." + tool);
    }
    if (j.contains("min_gain")) cfg.filter.default_min_gain = j.at("min_gain").get<double>();
    if (j.contains("min_gain_overrides")) {
        cfg.filter.min_gain_per_tool.clear();
        for (const auto& [tool, v] : j.at("min_gain_overrides").items())
            cfg.filter.min_gain_per_tool[tool] = v.get<double>();
    }
    if (j.contains("example_cap")) cfg.filter.example_cap = j.at("example_cap").get<size_t>();
    if (cfg.window_tokens == 0) throw std::runtime_error("config: window_tokens must be >= 1");
    return cfg;
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::string PipelineConfig::to_json() const {
    ordered_json j;
    j["corpus"] = corpus;
    j["output_dir"] = output_dir;
    j["seed"] = seed;
    j["workers"] = workers;
    j["window_tokens"] = window_tokens;
    j["tools"] = tools;
    j["lm_path"] = lm_path;
    j["index_path"] = index_path;
    j["qa_endpoint"] = qa_endpoint;
    j["mt_endpoint"] = mt_endpoint;
    j["qa_fixture"] = qa_fixture;
    j["mt_fixture"] = mt_fixture;
    j["mt_min_confidence"] = mt_min_confidence;
    j["sampling"] = sampling_to_json(sampling);
    ordered_json overrides = ordered_json::object();
    for (const auto& [tool, s] : sampling_overrides) overrides[tool] = sampling_to_json(s);
    j["sampling_overrides"] = std::move(overrides);
    j["min_gain"] = filter.default_min_gain;
    ordered_json gains = ordered_json::object();
    for (const auto& [tool, g] : filter.min_gain_per_tool) gains[tool] = g;
    j["min_gain_overrides"] = std::move(gains);
    j["example_cap"] = filter.example_cap;
    return j.dump(2);
}

std::string RunManifest::to_json() const {
    ordered_json j;
    j["schema"] = "toolweave.manifest.v1";
    j["version"] = kVersion;
    j["stage"] = stage;
    j["status"] = status;
    std::ostringstream hash;
    hash << std::hex << input_hash;
    j["input_hash"] = hash.str();
    ordered_json counts_json = ordered_json::object();
    for (const auto& [k, v] : counts) counts_json[k] = v;
    j["counts"] = std::move(counts_json);
    j["wall_seconds"] = wall_seconds;
    j["config"] = json::parse(config_json.empty() ? "{}" : config_json);
    return j.dump(2);
}

// --- corpus and stage I/O ---------------------------------------------------

std::vector<Document> read_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("corpus: cannot read " + path);
    std::vector<Document> docs;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            // Tolerate a schema header on corpus files.
            auto j = json::parse(line, nullptr, false);
            if (j.is_object() && j.contains("schema") && !j.contains("id")) continue;
        }
        docs.push_back(document_from_jsonl(line));
    }
    return docs;
}

void write_records(const std::string& path, const std::string& schema,
                   const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "{\"schema\":\"" << schema << "\"}\n";
    for (const auto& line : lines) out << line << '\n';
}

std::vector<std::string> read_records(const std::string& path, const std::string& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing schema header");
    auto header = json::parse(line, nullptr, false);
    if (!header.is_object() || header.value("schema", "") != schema)
        throw std::runtime_error(path + ": expected schema " + schema);
    std::vector<std::string> out;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

// --- in-memory stages --------------------------------------------------------

std::vector<CandidateRecord> annotate_documents(const std::vector<Document>& docs,
                                                const LmInterface& lm,
                                                const PipelineConfig& cfg,
                                                const LangId* langid) {
    static const TrigramLangId default_langid;
    if (!langid) langid = &default_langid;

    auto work = [&](const Document& doc) {
        std::vector<CandidateRecord> recs;
        auto doc_tokens = Tokenizer::split(doc.text);
        for (const auto& tool : cfg.tools) {
            auto pre = prefilter(doc, tool, cfg.seed, langid);
            if (!pre.keep) continue;
            const auto& scfg = cfg.sampling_for(tool);
            const auto& prompt = builtin_prompt(tool);
            Rng rng(derive_seed(derive_seed(cfg.seed, doc.id), "annotate:" + tool));
            for (size_t w0 = 0; w0 < doc_tokens.size(); w0 += cfg.window_tokens) {
                size_t w1 = std::min(doc_tokens.size(), w0 + cfg.window_tokens);
                std::string window_text;
                for (size_t i = w0; i < w1; ++i) window_text += doc_tokens[i];
                auto ctx = make_context(prompt, window_text);
                for (const auto& cp : sample_positions(lm, ctx, scfg)) {
                    for (auto& call : sample_calls(lm, ctx, cp.position, tool, scfg, rng)) {
                        size_t abs_pos = w0 + cp.position;
                        // A translation the text never needed before the call
                        // would teach hindsight-only calls; drop it now.
                        if (tool == "MT" && !mt_postfilter(doc_tokens, call, abs_pos))
                            continue;
                        CandidateRecord rec;
                        rec.doc_id = doc.id;
                        rec.position = abs_pos;
                        rec.call = std::move(call);
                        if (tool == "Calendar" && pre.doc_date)
                            rec.doc_date = pre.doc_date->iso();
                        recs.push_back(std::move(rec));
                    }
                }
            }
        }
        return recs;
    };

    auto per_doc = parallel_map(docs, cfg.workers, work);
    std::vector<CandidateRecord> out;
    for (auto& recs : per_doc)
        out.insert(out.end(), std::make_move_iterator(recs.begin()),
                   std::make_move_iterator(recs.end()));
    return out;
}

std::vector<ExecutedRecord> execute_candidates(const std::vector<CandidateRecord>& candidates,
                                               const ToolRegistry& registry,
                                               const PipelineConfig& cfg) {
    auto work = [&](const CandidateRecord& cand) {
        ExecutedRecord rec;
        rec.doc_id = cand.doc_id;
        rec.position = cand.position;
        rec.executed.call = cand.call;
        rec.doc_date = cand.doc_date;
        ToolContext ctx;
        if (cand.doc_date) ctx.today = Date::from_iso(*cand.doc_date);
        rec.executed.result = registry.execute(cand.call, ctx);
        return rec;
    };
    return parallel_map(candidates, cfg.workers, work);
}

std::vector<ScoredRecord> score_candidates(const std::vector<Document>& docs,
                                           const std::vector<ExecutedRecord>& executed,
                                           const LmInterface& lm, const PipelineConfig& cfg) {
    std::map<std::string, std::vector<const ExecutedRecord*>> by_doc;
    for (const auto& rec : executed) by_doc[rec.doc_id].push_back(&rec);

    const WeightScheme scheme;
    auto work = [&](const Document& doc) {
        std::vector<ScoredRecord> out;
        auto it = by_doc.find(doc.id);
        if (it == by_doc.end()) return out;
        auto doc_tokens = Tokenizer::split(doc.text);
        const size_t n = doc_tokens.size();
        const size_t W = cfg.window_tokens;

        std::map<size_t, double> empty_loss;  // per position, shared across calls
        std::map<size_t, std::vector<std::string>> windows;
        for (const ExecutedRecord* rec : it->second) {
            if (rec->position >= n) continue;  // nothing left to predict; discard
            size_t w0 = (rec->position / W) * W;
            auto& window = windows[w0];
            if (window.empty())
                window.assign(doc_tokens.begin() + w0,
                              doc_tokens.begin() + std::min(n, w0 + W));
            size_t local = rec->position - w0;
            auto cached = empty_loss.find(rec->position);
            if (cached == empty_loss.end())
                cached = empty_loss
                             .emplace(rec->position,
                                      weighted_loss(lm, {}, window, local, scheme))
                             .first;
            ScoredRecord scored = score_call(lm, doc.id, window, rec->executed, local,
                                             scheme, &cached->second);
            scored.position = rec->position;  // back to document coordinates
            out.push_back(std::move(scored));
        }
        return out;
    };

    auto per_doc = parallel_map(docs, cfg.workers, work);
    std::vector<ScoredRecord> out;
    for (auto& recs : per_doc)
        out.insert(out.end(), std::make_move_iterator(recs.begin()),
                   std::make_move_iterator(recs.end()));
    return out;
}

// --- file-level stage runners -----------------------------------------------

StageResult run_annotate(const PipelineConfig& cfg, const LmInterface& lm,
                         const LangId* langid) {
    StageTimer timer;
    RunManifest manifest;
    manifest.stage = "annotate";
    manifest.input_hash = hash_file(cfg.corpus);

    std::vector<Document> docs;
    try {
        docs = read_corpus(cfg.corpus);
    } catch (const std::exception&) {
        manifest.status = "failed";
        manifest.wall_seconds = timer.seconds();
        write_manifest(cfg, manifest);
        throw;
    }

    auto candidates = annotate_documents(docs, lm, cfg, langid);
    std::vector<std::string> lines;
    lines.reserve(candidates.size());
    for (const auto& rec : candidates) lines.push_back(to_jsonl(rec));

    StageResult result;
    result.in = docs.size();
    result.out = candidates.size();
    result.output_path = cfg.output_dir + "/candidates.jsonl";
    std::filesystem::create_directories(cfg.output_dir);
    write_records(result.output_path, kCandidateSchema, lines);

    manifest.counts["documents"] = docs.size();
    manifest.counts["candidates"] = candidates.size();
    manifest.wall_seconds = timer.seconds();
    write_manifest(cfg, manifest);
    return result;
}

StageResult run_execute(const PipelineConfig& cfg, const ToolRegistry& registry) {
    StageTimer timer;
    const std::string in_path = cfg.output_dir + "/candidates.jsonl";
    RunManifest manifest;
    manifest.stage = "execute";
    manifest.input_hash = hash_file(in_path);

    std::vector<CandidateRecord> candidates;
    for (const auto& line : read_records(in_path, kCandidateSchema))
        candidates.push_back(candidate_from_jsonl(line));

    auto executed = execute_candidates(candidates, registry, cfg);
    std::vector<std::string> lines;
    lines.reserve(executed.size());
    size_t with_result = 0;
    for (const auto& rec : executed) {
        if (rec.executed.result) ++with_result;
        lines.push_back(to_jsonl(rec));
    }

    StageResult result;
    result.in = candidates.size();
    result.out = executed.size();
    result.output_path = cfg.output_dir + "/executed.jsonl";
    write_records(result.output_path, kExecutedSchema, lines);

    manifest.counts["candidates"] = candidates.size();
    manifest.counts["executed"] = executed.size();
    manifest.counts["with_result"] = with_result;
    manifest.wall_seconds = timer.seconds();
    write_manifest(cfg, manifest);
    return result;
}

StageResult run_filter(const PipelineConfig& cfg, const LmInterface& lm) {
    StageTimer timer;
    const std::string in_path = cfg.output_dir + "/executed.jsonl";
    RunManifest manifest;
    manifest.stage = "filter";
    manifest.input_hash = hash_file(in_path);

    auto docs = read_corpus(cfg.corpus);
    std::vector<ExecutedRecord> executed;
    for (const auto& line : read_records(in_path, kExecutedSchema))
        executed.push_back(executed_from_jsonl(line));

    auto scored = score_candidates(docs, executed, lm, cfg);
    std::vector<std::string> scored_lines;
    scored_lines.reserve(scored.size());
    for (const auto& rec : scored) scored_lines.push_back(to_jsonl(rec));
    write_records(cfg.output_dir + "/scored.jsonl", kScoredSchema, scored_lines);

    DatasetStats stats;
    auto examples = build_dataset(docs, scored, cfg.filter, &stats);
    {
        std::ofstream out(cfg.output_dir + "/dataset.jsonl", std::ios::binary);
        for (const auto& ex : examples) out << to_jsonl(ex) << '\n';
    }
    {
        std::ofstream out(cfg.output_dir + "/stats.txt", std::ios::binary);
        out << stats.table();
    }
    {
        std::ofstream out(cfg.output_dir + "/stats.json", std::ios::binary);
        out << stats.to_json() << '\n';
    }

    StageResult result;
    result.in = executed.size();
    result.out = examples.size();
    result.output_path = cfg.output_dir + "/dataset.jsonl";

    manifest.counts["executed"] = executed.size();
    manifest.counts["scored"] = scored.size();
    manifest.counts["examples"] = examples.size();
    manifest.wall_seconds = timer.seconds();
    write_manifest(cfg, manifest);
    return result;
}

std::string run_stats(const PipelineConfig& cfg) {
    auto docs = read_corpus(cfg.corpus);
    std::vector<ScoredRecord> scored;
    for (const auto& line : read_records(cfg.output_dir + "/scored.jsonl", kScoredSchema))
        scored.push_back(scored_from_jsonl(line));
    DatasetStats stats;
    build_dataset(docs, scored, cfg.filter, &stats);
    return stats.table();
}

RuntimeBundle make_runtime(const PipelineConfig& cfg) {
    RuntimeBundle bundle;
    if (!cfg.index_path.empty())
        bundle.index = std::make_shared<SearchIndex>(SearchIndex::load(cfg.index_path));
    bundle.langid = std::make_shared<TrigramLangId>();

    RegistryConfig rc;
    rc.index = bundle.index;
    rc.langid = bundle.langid;
    rc.mt_min_confidence = cfg.mt_min_confidence;
    if (!cfg.qa_fixture.empty())
        rc.qa_client = std::make_shared<FixtureClient>(FixtureClient::from_jsonl(cfg.qa_fixture));
    else if (!cfg.qa_endpoint.empty())
        rc.qa_client = std::make_shared<HttpClient>(cfg.qa_endpoint);
    if (!cfg.mt_fixture.empty())
        rc.mt_client = std::make_shared<FixtureClient>(FixtureClient::from_jsonl(cfg.mt_fixture));
    else if (!cfg.mt_endpoint.empty())
        rc.mt_client = std::make_shared<HttpClient>(cfg.mt_endpoint);
    bundle.registry = standard_registry(rc);
    return bundle;
}

}  // namespace toolweave
