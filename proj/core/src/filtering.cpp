#include "toolweave/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "toolweave/calls.hpp"
#include "toolweave/tokenizer.hpp"

namespace toolweave {

std::vector<Fraction> WeightScheme::weights() const {
    if (decay.num <= 0 || decay.den <= 0) throw std::invalid_argument("decay must be positive");
    std::vector<Fraction> raw;
    Fraction one{1, 1};
    for (std::int64_t t = 0;; ++t) {
        Fraction w = one - decay * Fraction{t, 1};
        if (w.num <= 0) break;
        raw.push_back(w);
    }
    Fraction sum{0, 1};
    for (const auto& w : raw) sum = sum + w;
    for (auto& w : raw) w = w / sum;
    return raw;
}

std::vector<double> WeightScheme::weight_values() const {
    std::vector<double> out;
    for (const auto& w : weights()) out.push_back(w.value());
    return out;
}

double FilterConfig::min_gain(const std::string& tool) const {
    auto it = min_gain_per_tool.find(tool);
    return it == min_gain_per_tool.end() ? default_min_gain : it->second;
}

double weighted_loss(const LmInterface& lm, const std::vector<std::string>& prefix,
                     const std::vector<std::string>& doc_tokens, size_t position,
                     const WeightScheme& scheme) {
    if (position > doc_tokens.size()) throw std::out_of_range("loss position past end");
    const auto weights = scheme.weight_values();
    std::vector<std::string> context = prefix;
    context.insert(context.end(), doc_tokens.begin(), doc_tokens.begin() + position);
    double loss = 0.0;
    for (size_t j = position; j < doc_tokens.size(); ++j) {
        size_t t = j - position;
        if (t >= weights.size()) break;  // zero weight from here on
        double p = lm.token_prob(context, doc_tokens[j]);
        loss += weights[t] * (p > 0.0 ? -std::log(p) : std::numeric_limits<double>::infinity());
        context.push_back(doc_tokens[j]);
    }
    return loss;
}

ScoredRecord score_call(const LmInterface& lm, const std::string& doc_id,
                        const std::vector<std::string>& doc_tokens,
                        const ExecutedCall& executed, size_t position,
                        const WeightScheme& scheme, const double* loss_empty) {
    // A call whose execution produced nothing renders the same as the
    // result-free branch, so its gain can never clear a positive threshold.
    std::string with_result =
        linearize_with_result(executed.call, executed.result ? *executed.result : "");
    std::string without_result = linearize_with_result(executed.call, "");

    double l_plus = weighted_loss(lm, Tokenizer::split(with_result), doc_tokens, position, scheme);
    double l_none = loss_empty ? *loss_empty
                               : weighted_loss(lm, {}, doc_tokens, position, scheme);
    double l_bare = with_result == without_result
                        ? l_plus
                        : weighted_loss(lm, Tokenizer::split(without_result), doc_tokens,
                                        position, scheme);

    ScoredRecord rec;
    rec.doc_id = doc_id;
    rec.position = position;
    rec.executed = executed;
    rec.l_plus = l_plus;
    rec.l_minus = std::min(l_none, l_bare);
    rec.gain = rec.l_minus - rec.l_plus;
    return rec;
}

namespace {

// Collision order: best candidate first within one (document, position).
bool better_candidate(const ScoredRecord& a, const ScoredRecord& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    if (a.executed.call.tool != b.executed.call.tool)
        return a.executed.call.tool < b.executed.call.tool;
    return a.executed.call.input < b.executed.call.input;
}

}  // namespace

std::vector<ScoredRecord> filter_calls(std::vector<ScoredRecord> scored,
                                       const FilterConfig& cfg) {
    std::erase_if(scored, [&](const ScoredRecord& r) {
        return r.gain < cfg.min_gain(r.executed.call.tool);
    });
    std::stable_sort(scored.begin(), scored.end(),
                     [](const ScoredRecord& a, const ScoredRecord& b) {
                         if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
                         if (a.position != b.position) return a.position < b.position;
                         return better_candidate(a, b);
                     });
    std::vector<ScoredRecord> kept;
    for (auto& rec : scored) {
        if (!kept.empty() && kept.back().doc_id == rec.doc_id &&
            kept.back().position == rec.position)
            continue;  // a better call already occupies this position
        kept.push_back(std::move(rec));
    }
    return kept;
}

std::string DatasetStats::table() const {
    std::ostringstream out;
    out << "tool          ";
    for (double tau : kReportThresholds) {
        std::ostringstream h;
        h << "gain>=" << tau;
        out << ' ' << h.str();
        for (size_t i = h.str().size(); i < 10; ++i) out << ' ';
    }
    out << " kept capped\n";
    for (const auto& [tool, counts] : kept_at_threshold) {
        out << tool;
        for (size_t i = tool.size(); i < 14; ++i) out << ' ';
        for (size_t c = 0; c < counts.size(); ++c) {
            std::string n = std::to_string(counts[c]);
            out << ' ' << n;
            for (size_t i = n.size(); i < 10; ++i) out << ' ';
        }
        auto kept_it = kept_calls.find(tool);
        auto cap_it = capped_calls.find(tool);
        out << ' ' << (kept_it == kept_calls.end() ? 0 : kept_it->second);
        out << ' ' << (cap_it == capped_calls.end() ? 0 : cap_it->second) << '\n';
    }
    out << "documents in: " << input_documents
        << ", annotated examples: " << annotated_examples << '\n';
    return out.str();
}

std::string DatasetStats::to_json() const {
    nlohmann::ordered_json j;
    j["input_documents"] = input_documents;
    j["annotated_examples"] = annotated_examples;
    nlohmann::ordered_json tools = nlohmann::ordered_json::object();
    for (const auto& [tool, counts] : kept_at_threshold) {
        nlohmann::ordered_json row;
        for (size_t c = 0; c < kReportThresholds.size(); ++c) {
            std::ostringstream key;
            key << "kept_at_" << kReportThresholds[c];
            row[key.str()] = counts[c];
        }
        auto kept_it = kept_calls.find(tool);
        auto cap_it = capped_calls.find(tool);
        row["kept"] = kept_it == kept_calls.end() ? 0 : kept_it->second;
        row["after_cap"] = cap_it == capped_calls.end() ? 0 : cap_it->second;
        tools[tool] = std::move(row);
    }
    j["tools"] = std::move(tools);
    return j.dump(2);
}

std::vector<AnnotatedExample> build_dataset(const std::vector<Document>& docs,
                                            const std::vector<ScoredRecord>& scored,
                                            const FilterConfig& cfg, DatasetStats* stats) {
    std::vector<ScoredRecord> kept = filter_calls(scored, cfg);

    if (stats) {
        *stats = DatasetStats{};
        stats->input_documents = docs.size();
        for (const auto& rec : scored) {
            auto& row = stats->kept_at_threshold[rec.executed.call.tool];
            for (size_t c = 0; c < DatasetStats::kReportThresholds.size(); ++c)
                if (rec.gain >= DatasetStats::kReportThresholds[c]) ++row[c];
        }
        for (const auto& rec : kept) {
            stats->kept_at_threshold.try_emplace(rec.executed.call.tool);
            ++stats->kept_calls[rec.executed.call.tool];
        }
    }

    // Per-tool cap: highest gain first, ties broken by document/position so
    // reruns keep the same calls.
    std::map<std::string, std::vector<size_t>> by_tool;
    for (size_t i = 0; i < kept.size(); ++i)
        by_tool[kept[i].executed.call.tool].push_back(i);
    std::vector<bool> survives(kept.size(), true);
    for (auto& [tool, indices] : by_tool) {
        if (indices.size() <= cfg.example_cap) continue;
        std::sort(indices.begin(), indices.end(), [&](size_t a, size_t b) {
            if (kept[a].gain != kept[b].gain) return kept[a].gain > kept[b].gain;
            if (kept[a].doc_id != kept[b].doc_id) return kept[a].doc_id < kept[b].doc_id;
            return kept[a].position < kept[b].position;
        });
        for (size_t r = cfg.example_cap; r < indices.size(); ++r) survives[indices[r]] = false;
    }

    std::map<std::string, std::vector<const ScoredRecord*>> by_doc;
    for (size_t i = 0; i < kept.size(); ++i) {
        if (!survives[i]) continue;
        by_doc[kept[i].doc_id].push_back(&kept[i]);
        if (stats) ++stats->capped_calls[kept[i].executed.call.tool];
    }

    std::vector<AnnotatedExample> examples;
    for (const auto& doc : docs) {
        auto it = by_doc.find(doc.id);
        if (it == by_doc.end()) continue;  // nothing kept; document dropped

        auto offset_tokens = Tokenizer::split_with_offsets(doc.text);
        std::vector<std::string> tokens;
        tokens.reserve(offset_tokens.size());
        for (const auto& t : offset_tokens) tokens.push_back(t.text);

        AnnotatedExample ex;
        ex.doc_id = doc.id;
        std::vector<std::pair<size_t, std::string>> splices;
        for (const ScoredRecord* rec : it->second) {
            Insertion ins;
            ins.token_pos = rec->position;
            ins.char_pos = rec->position < offset_tokens.size()
                               ? offset_tokens[rec->position].offset
                               : doc.text.size();
            ins.tool = rec->executed.call.tool;
            ins.input = rec->executed.call.input;
            ins.result = rec->executed.result ? *rec->executed.result : "";
            ins.gain = rec->gain;
            splices.emplace_back(rec->position,
                                 linearize_with_result(rec->executed.call, ins.result));
            ex.insertions.push_back(std::move(ins));
        }
        std::sort(ex.insertions.begin(), ex.insertions.end(),
                  [](const Insertion& a, const Insertion& b) { return a.token_pos < b.token_pos; });
        ex.text = splice_many(tokens, std::move(splices));
        examples.push_back(std::move(ex));
    }
    if (stats) stats->annotated_examples = examples.size();
    return examples;
}

}  // namespace toolweave
