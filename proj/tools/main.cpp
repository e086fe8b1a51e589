// toolweave CLI: corpus annotation pipeline, tool-intercepting generation,
// search index construction, and evaluation utilities.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "toolweave/decoding.hpp"
#include "toolweave/evalgen.hpp"
#include "toolweave/ngram_lm.hpp"
#include "toolweave/pipeline.hpp"
#include "toolweave/prompts.hpp"
#include "toolweave/search.hpp"

using namespace toolweave;

namespace {

PipelineConfig load_config(const std::string& path) {
    PipelineConfig cfg = path.empty() ? PipelineConfig{} : PipelineConfig::from_json_file(path);
    if (const char* qa = std::getenv("TOOLWEAVE_QA_ENDPOINT")) cfg.qa_endpoint = qa;
    if (const char* mt = std::getenv("TOOLWEAVE_MT_ENDPOINT")) cfg.mt_endpoint = mt;
    return cfg;
}

// Loads the serialized reference model, or trains one on the corpus plus the
// annotation prompts (so the call markers are in-vocabulary) when no model
// file is configured.
LmPtr load_or_train_lm(const PipelineConfig& cfg) {
    if (!cfg.lm_path.empty())
        return std::make_shared<ReferenceNgramLm>(ReferenceNgramLm::load(cfg.lm_path));
    if (cfg.corpus.empty())
        throw std::runtime_error("no lm_path configured and no corpus to train on");
    auto lm = std::make_shared<ReferenceNgramLm>();
    for (const auto& doc : read_corpus(cfg.corpus)) lm->train_text(doc.text);
    for (const auto& tool : builtin_prompt_tools())
        lm->train_text(builtin_prompt(tool).template_text);
    return lm;
}

std::string read_stream(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Date today_from_clock() {
    auto now = std::chrono::system_clock::now();
    auto days = std::chrono::duration_cast<std::chrono::hours>(now.time_since_epoch()).count() / 24;
    return civil_from_days(days);
}

struct LoadedEvalItem {
    EvalItem item;
    std::optional<Date> current_date;
};

LoadedEvalItem parse_eval_line(const std::string& line, size_t index) {
    auto j = nlohmann::json::parse(line);
    LoadedEvalItem out;
    if (j.contains("template_family")) {  // temporal question file
        auto d = dateset_from_jsonl(line);
        out.item.id = "item-" + std::to_string(index);
        out.item.family = "temporal";
        out.item.question = d.question;
        out.item.golds = {d.gold};
        out.item.current_date = d.current_date.iso();
        out.current_date = d.current_date;
        return out;
    }
    out.item.id = j.value("id", "item-" + std::to_string(index));
    out.item.family = j.at("family").get<std::string>();
    out.item.context = j.value("context", "");
    out.item.question = j.value("question", "");
    if (j.contains("golds"))
        out.item.golds = j.at("golds").get<std::vector<std::string>>();
    else
        out.item.golds = {j.at("gold").get<std::string>()};
    if (j.contains("current_date")) {
        out.item.current_date = j.at("current_date").get<std::string>();
        out.current_date = Date::from_iso(out.item.current_date);
    }
    return out;
}

int cmd_index(const std::string& input, const std::string& output) {
    auto pages = load_kilt_jsonl(input);
    auto index = SearchIndex::build(pages);
    index.save(output);
    std::cout << "indexed " << pages.size() << " pages into " << output << '\n';
    return 0;
}

int cmd_dateset(uint64_t seed, const std::string& output) {
    auto items = generate_dateset(seed);
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + output);
    for (const auto& item : items) out << to_jsonl(item) << '\n';
    std::cout << "wrote " << items.size() << " questions to " << output << '\n';
    return 0;
}

int cmd_generate(const std::string& config_path, const std::string& lm_path,
                 std::string prompt, const std::string& prompt_file, size_t k_api,
                 size_t max_calls, size_t max_tokens, bool disable_tools,
                 const std::string& date_override, const std::string& trace_path) {
    PipelineConfig cfg = load_config(config_path);
    if (!lm_path.empty()) cfg.lm_path = lm_path;
    LmPtr lm = load_or_train_lm(cfg);
    RuntimeBundle bundle = make_runtime(cfg);

    if (!prompt_file.empty()) {
        std::ifstream in(prompt_file, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read " + prompt_file);
        prompt = read_stream(in);
    }
    if (prompt.empty()) prompt = read_stream(std::cin);
    if (prompt.empty()) throw std::runtime_error("empty prompt");

    DecodeConfig dc;
    dc.k_api = k_api;
    dc.max_api_calls_per_input = max_calls;
    dc.api_disabled = disable_tools;
    dc.max_tokens = max_tokens;
    dc.registry = &bundle.registry;
    if (!date_override.empty()) {
        auto d = Date::from_iso(date_override);
        if (!d) throw std::runtime_error("bad --date-override (want yyyy-mm-dd)");
        dc.tool_context.today = *d;
    } else {
        dc.tool_context.today = today_from_clock();
    }

    DecodeTrace trace = generate(*lm, prompt, dc);
    std::cout << trace.text << '\n';

    if (!trace_path.empty()) {
        nlohmann::ordered_json j;
        j["prompt"] = trace.prompt;
        j["text"] = trace.text;
        j["termination"] = trace.termination;
        auto events = nlohmann::ordered_json::array();
        for (const auto& ev : trace.events) {
            nlohmann::ordered_json e;
            e["position"] = ev.position;
            e["tool"] = ev.call.tool;
            e["input"] = ev.call.input;
            e["result"] = ev.result ? nlohmann::ordered_json(*ev.result)
                                    : nlohmann::ordered_json(nullptr);
            e["latency_ms"] = ev.latency_ms;
            events.push_back(std::move(e));
        }
        j["events"] = std::move(events);
        std::ofstream out(trace_path, std::ios::binary);
        out << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_eval(const std::string& items_path, const std::string& predictions_path,
             const std::string& emit_prompts) {
    std::ifstream items_in(items_path);
    if (!items_in) throw std::runtime_error("cannot read " + items_path);
    std::vector<LoadedEvalItem> items;
    std::string line;
    while (std::getline(items_in, line)) {
        if (line.empty()) continue;
        items.push_back(parse_eval_line(line, items.size()));
    }

    if (!emit_prompts.empty()) {
        std::ofstream out(emit_prompts, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + emit_prompts);
        for (const auto& it : items) {
            nlohmann::ordered_json j;
            j["id"] = it.item.id;
            j["prompt"] = build_prompt(it.item.family, it.item.context, it.item.question);
            if (!it.item.current_date.empty()) j["current_date"] = it.item.current_date;
            out << j.dump() << '\n';
        }
        std::cout << "wrote " << items.size() << " prompts to " << emit_prompts << '\n';
        return 0;
    }

    std::ifstream preds_in(predictions_path);
    if (!preds_in) throw std::runtime_error("cannot read " + predictions_path);
    struct Prediction {
        std::string text;
        std::optional<size_t> api_calls;
    };
    std::vector<Prediction> preds;
    while (std::getline(preds_in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        Prediction p;
        if (j.is_string()) {
            p.text = j.get<std::string>();
        } else {
            p.text = j.at("prediction").get<std::string>();
            if (j.contains("api_calls")) p.api_calls = j.at("api_calls").get<size_t>();
        }
        preds.push_back(std::move(p));
    }
    if (preds.size() != items.size())
        throw std::runtime_error("prediction count " + std::to_string(preds.size()) +
                                 " != item count " + std::to_string(items.size()));

    struct Tally {
        size_t total = 0, correct = 0;
    };
    std::map<std::string, Tally> by_family;
    Tally all, with_calls, without_calls;
    bool have_call_info = false;
    for (size_t i = 0; i < items.size(); ++i) {
        bool ok = item_match(items[i].item.family, preds[i].text, items[i].item.golds);
        auto& fam = by_family[items[i].item.family];
        ++fam.total;
        ++all.total;
        if (ok) {
            ++fam.correct;
            ++all.correct;
        }
        if (preds[i].api_calls) {
            have_call_info = true;
            auto& side = *preds[i].api_calls > 0 ? with_calls : without_calls;
            ++side.total;
            if (ok) ++side.correct;
        }
    }

    auto pct = [](const Tally& t) {
        return t.total == 0 ? 0.0 : 100.0 * static_cast<double>(t.correct) / t.total;
    };
    std::cout.precision(1);
    std::cout << std::fixed;
    for (const auto& [family, t] : by_family)
        std::cout << family << ": " << t.correct << "/" << t.total << " (" << pct(t)
                  << "%)\n";
    std::cout << "all: " << all.correct << "/" << all.total << " (" << pct(all) << "%)\n";
    if (have_call_info) {
        double call_rate = all.total == 0 ? 0.0
                                          : 100.0 * static_cast<double>(with_calls.total) /
                                                static_cast<double>(all.total);
        std::cout << "AC: " << with_calls.correct << "/" << with_calls.total << " ("
                  << pct(with_calls) << "%)  NC: " << without_calls.correct << "/"
                  << without_calls.total << " (" << pct(without_calls)
                  << "%)  calls: " << call_rate << "%\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-annotating tool-use corpus pipeline"};
    app.require_subcommand(1);

    // index
    std::string index_input, index_output;
    auto* index_cmd = app.add_subcommand("index", "build a search index from KILT-style JSONL");
    index_cmd->add_option("--input", index_input, "KILT-style pages JSONL")->required();
    index_cmd->add_option("--output", index_output, "index file to write")->required();

    // annotate / execute / filter / stats share --config
    std::string config_path;
    auto* annotate_cmd = app.add_subcommand("annotate", "sample candidate calls over the corpus");
    annotate_cmd->add_option("--config", config_path, "pipeline config JSON")->required();
    auto* execute_cmd = app.add_subcommand("execute", "run the tools on sampled candidates");
    execute_cmd->add_option("--config", config_path, "pipeline config JSON")->required();
    auto* filter_cmd = app.add_subcommand("filter", "score, filter, and merge into a dataset");
    filter_cmd->add_option("--config", config_path, "pipeline config JSON")->required();
    auto* stats_cmd = app.add_subcommand("stats", "re-render dataset statistics");
    stats_cmd->add_option("--config", config_path, "pipeline config JSON")->required();

    // generate
    std::string gen_config, gen_lm, gen_prompt, gen_prompt_file, gen_date, gen_trace;
    size_t gen_k_api = 10, gen_max_calls = 1, gen_max_tokens = 128;
    bool gen_disable = false;
    auto* gen_cmd = app.add_subcommand("generate", "greedy generation with tool interception");
    gen_cmd->add_option("--config", gen_config, "pipeline config JSON (tools/model)");
    gen_cmd->add_option("--lm", gen_lm, "serialized model file (overrides config)");
    gen_cmd->add_option("--prompt", gen_prompt, "prompt text");
    gen_cmd->add_option("--prompt-file", gen_prompt_file, "read prompt from file");
    gen_cmd->add_option("--k-api", gen_k_api, "call-trigger rank threshold");
    gen_cmd->add_option("--max-calls", gen_max_calls, "API call budget per input");
    gen_cmd->add_option("--max-tokens", gen_max_tokens, "generation budget");
    gen_cmd->add_flag("--disable-tools", gen_disable, "zero the call-start token");
    gen_cmd->add_option("--date-override", gen_date, "Calendar date, yyyy-mm-dd");
    gen_cmd->add_option("--trace-json", gen_trace, "write the full trace as JSON");

    // dateset
    uint64_t ds_seed = 42;
    std::string ds_output = "dateset.jsonl";
    auto* ds_cmd = app.add_subcommand("dateset", "generate the temporal question set");
    ds_cmd->add_option("--seed", ds_seed, "generation seed");
    ds_cmd->add_option("--output", ds_output, "output JSONL path");

    // eval
    std::string eval_items, eval_preds, eval_emit;
    auto* eval_cmd = app.add_subcommand("eval", "score predictions with the lenient matchers");
    eval_cmd->add_option("--items", eval_items, "evaluation items JSONL")->required();
    eval_cmd->add_option("--predictions", eval_preds, "predictions JSONL");
    eval_cmd->add_option("--emit-prompts", eval_emit, "write built prompts and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*index_cmd) return cmd_index(index_input, index_output);
        if (*annotate_cmd) {
            auto cfg = load_config(config_path);
            auto lm = load_or_train_lm(cfg);
            auto result = run_annotate(cfg, *lm);
            std::cout << "annotate: " << result.in << " documents -> " << result.out
                      << " candidates (" << result.output_path << ")\n";
            return 0;
        }
        if (*execute_cmd) {
            auto cfg = load_config(config_path);
            auto bundle = make_runtime(cfg);
            auto result = run_execute(cfg, bundle.registry);
            std::cout << "execute: " << result.in << " candidates -> " << result.out
                      << " executed (" << result.output_path << ")\n";
            return 0;
        }
        if (*filter_cmd) {
            auto cfg = load_config(config_path);
            auto lm = load_or_train_lm(cfg);
            auto result = run_filter(cfg, *lm);
            std::cout << "filter: " << result.in << " executed -> " << result.out
                      << " examples (" << result.output_path << ")\n";
            return 0;
        }
        if (*stats_cmd) {
            auto cfg = load_config(config_path);
            std::cout << run_stats(cfg);
            return 0;
        }
        if (*gen_cmd)
            return cmd_generate(gen_config, gen_lm, gen_prompt, gen_prompt_file, gen_k_api,
                                gen_max_calls, gen_max_tokens, gen_disable, gen_date,
                                gen_trace);
        if (*ds_cmd) return cmd_dateset(ds_seed, ds_output);
        if (*eval_cmd) {
            if (eval_preds.empty() && eval_emit.empty())
                throw std::runtime_error("eval needs --predictions or --emit-prompts");
            return cmd_eval(eval_items, eval_preds, eval_emit);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
