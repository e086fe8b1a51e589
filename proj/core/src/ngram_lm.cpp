#include "toolweave/ngram_lm.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "toolweave/tokenizer.hpp"

namespace toolweave {

namespace {

// Length-prefixed concatenation; unambiguous for arbitrary token bytes.
std::string encode_context(const std::vector<std::string>& tokens, size_t begin, size_t end) {
    std::string key;
    for (size_t i = begin; i < end; ++i) {
        key += std::to_string(tokens[i].size());
        key += ':';
        key += tokens[i];
    }
    return key;
}

}  // namespace

ReferenceNgramLm::ReferenceNgramLm(size_t order, double alpha)
    : order_(order), alpha_(alpha), tables_(order) {
    if (order_ < 1) throw std::invalid_argument("ngram order must be >= 1");
    if (alpha_ <= 0.0) throw std::invalid_argument("smoothing alpha must be > 0");
    vocab_.push_back(kUnknown);
    vocab_index_.emplace(kUnknown, 0);
}

void ReferenceNgramLm::train(const std::vector<std::string>& tokens) {
    for (const auto& tok : tokens) {
        if (!vocab_index_.count(tok)) {
            vocab_index_.emplace(tok, vocab_.size());
            vocab_.push_back(tok);
        }
    }
    for (size_t j = 0; j < tokens.size(); ++j) {
        const size_t max_len = std::min(order_ - 1, j);
        for (size_t len = 0; len <= max_len; ++len) {
            auto& ctx = tables_[len][encode_context(tokens, j - len, j)];
            ++ctx.counts[tokens[j]];
            ++ctx.total;
        }
    }
}

void ReferenceNgramLm::train_text(std::string_view text) {
    train(Tokenizer::split(text));
}

std::string ReferenceNgramLm::tokenizer_id() const {
    return Tokenizer().id();
}

const std::string& ReferenceNgramLm::map_unknown(const std::string& token) const {
    return vocab_index_.count(token) ? token : vocab_.front();
}

const ReferenceNgramLm::ContextCounts* ReferenceNgramLm::find_context(
    const std::vector<std::string>& context, size_t* context_len) const {
    const size_t len = std::min(order_ - 1, context.size());
    if (context_len) *context_len = len;
    std::vector<std::string> mapped;
    mapped.reserve(len);
    for (size_t i = context.size() - len; i < context.size(); ++i)
        mapped.push_back(map_unknown(context[i]));
    auto it = tables_[len].find(encode_context(mapped, 0, mapped.size()));
    return it == tables_[len].end() ? nullptr : &it->second;
}

double ReferenceNgramLm::token_prob(const std::vector<std::string>& context,
                                    std::string_view token) const {
    const ContextCounts* ctx = find_context(context, nullptr);
    const std::string& tok = map_unknown(std::string(token));
    int64_t count = 0;
    int64_t total = 0;
    if (ctx) {
        total = ctx->total;
        auto it = ctx->counts.find(tok);
        if (it != ctx->counts.end()) count = it->second;
    }
    const double v = static_cast<double>(vocab_.size());
    return (static_cast<double>(count) + alpha_) / (static_cast<double>(total) + alpha_ * v);
}

std::vector<TokenProb> ReferenceNgramLm::next_distribution(
    const std::vector<std::string>& context) const {
    const ContextCounts* ctx = find_context(context, nullptr);
    std::vector<std::string> sorted = vocab_;
    std::sort(sorted.begin(), sorted.end());
    const double v = static_cast<double>(vocab_.size());
    const double denom = (ctx ? static_cast<double>(ctx->total) : 0.0) + alpha_ * v;
    std::vector<TokenProb> out;
    out.reserve(sorted.size());
    for (auto& tok : sorted) {
        int64_t count = 0;
        if (ctx) {
            auto it = ctx->counts.find(tok);
            if (it != ctx->counts.end()) count = it->second;
        }
        out.push_back({std::move(tok), (static_cast<double>(count) + alpha_) / denom});
    }
    return out;
}

void ReferenceNgramLm::save(const std::string& path) const {
    using ordered_json = nlohmann::ordered_json;
    ordered_json j;
    j["schema"] = "toolweave.ngram.v1";
    j["tokenizer_id"] = tokenizer_id();
    j["order"] = order_;
    j["alpha"] = alpha_;
    j["vocab"] = vocab_;
    ordered_json tables = ordered_json::array();
    for (size_t len = 0; len < tables_.size(); ++len) {
        // Re-sort by encoded key for a stable dump.
        std::vector<const std::pair<const std::string, ContextCounts>*> entries;
        entries.reserve(tables_[len].size());
        for (const auto& kv : tables_[len]) entries.push_back(&kv);
        std::sort(entries.begin(), entries.end(),
                  [](const auto* a, const auto* b) { return a->first < b->first; });
        ordered_json table;
        table["context_len"] = len;
        ordered_json list = ordered_json::array();
        for (const auto* kv : entries) {
            ordered_json entry;
            entry["ctx"] = kv->first;
            ordered_json counts = ordered_json::array();
            for (const auto& [tok, n] : kv->second.counts)
                counts.push_back(ordered_json::array({tok, n}));
            entry["counts"] = std::move(counts);
            list.push_back(std::move(entry));
        }
        table["entries"] = std::move(list);
        tables.push_back(std::move(table));
    }
    j["tables"] = std::move(tables);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump() << '\n';
}

ReferenceNgramLm ReferenceNgramLm::load(const std::string& path) {
    using ordered_json = nlohmann::ordered_json;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    ordered_json j = ordered_json::parse(in, nullptr, false);
    if (j.is_discarded() || j.value("schema", "") != "toolweave.ngram.v1")
        throw std::runtime_error("not a toolweave.ngram.v1 file: " + path);
    ReferenceNgramLm lm(j.at("order").get<size_t>(), j.at("alpha").get<double>());
    if (j.at("tokenizer_id").get<std::string>() != lm.tokenizer_id())
        throw std::runtime_error("tokenizer mismatch in " + path);
    lm.vocab_.clear();
    lm.vocab_index_.clear();
    for (const auto& v : j.at("vocab")) {
        std::string tok = v.get<std::string>();
        lm.vocab_index_.emplace(tok, lm.vocab_.size());
        lm.vocab_.push_back(std::move(tok));
    }
    if (lm.vocab_.empty() || lm.vocab_.front() != kUnknown)
        throw std::runtime_error("vocab must start with " + std::string(kUnknown));
    for (const auto& table : j.at("tables")) {
        const size_t len = table.at("context_len").get<size_t>();
        if (len >= lm.order_) throw std::runtime_error("context_len exceeds order");
        for (const auto& entry : table.at("entries")) {
            ContextCounts& ctx = lm.tables_[len][entry.at("ctx").get<std::string>()];
            for (const auto& pair : entry.at("counts")) {
                const int64_t n = pair.at(1).get<int64_t>();
                ctx.counts[pair.at(0).get<std::string>()] = n;
                ctx.total += n;
            }
        }
    }
    return lm;
}

}  // namespace toolweave
