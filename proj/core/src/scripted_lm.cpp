#include "toolweave/scripted_lm.hpp"

#include <algorithm>
#include <stdexcept>

#include "toolweave/tokenizer.hpp"

namespace toolweave {

void ScriptedLm::add_rule(std::string context_suffix, std::vector<TokenProb> dist) {
    double sum = 0.0;
    for (const auto& tp : dist) {
        if (tp.prob < 0.0) throw std::invalid_argument("scripted probability < 0");
        sum += tp.prob;
    }
    if (sum > 1.0 + 1e-9) throw std::invalid_argument("scripted probabilities exceed 1");
    rules_[std::move(context_suffix)] = std::move(dist);
}

std::string ScriptedLm::tokenizer_id() const {
    return Tokenizer().id();
}

std::vector<TokenProb> ScriptedLm::next_distribution(
    const std::vector<std::string>& context) const {
    std::string text;
    for (const auto& tok : context) text += tok;

    const std::vector<TokenProb>* rule = nullptr;
    size_t best_len = 0;
    for (const auto& [suffix, dist] : rules_) {
        if (suffix.size() > text.size()) continue;
        if (text.compare(text.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
        if (!rule || suffix.size() >= best_len) {
            rule = &dist;
            best_len = suffix.size();
        }
    }

    std::map<std::string, double> probs;
    double assigned = 0.0;
    if (rule) {
        for (const auto& tp : *rule) {
            probs[tp.token] += tp.prob;
            assigned += tp.prob;
        }
    }
    double missing = 1.0 - assigned;
    if (missing > 1e-12) {
        std::vector<const std::string*> spill;
        for (const auto& tok : fallback_)
            if (!probs.count(tok)) spill.push_back(&tok);
        if (spill.empty()) {
            // Nothing scripted for this context and nowhere to spill: the
            // session simply has no continuation. A matched rule that leaves
            // mass unassigned, though, is a bug in the script.
            if (!rule) return {};
            throw std::logic_error("ScriptedLm: unassigned mass but no fallback tokens");
        }
        for (const auto* tok : spill) probs[*tok] = missing / static_cast<double>(spill.size());
    }

    std::vector<TokenProb> out;
    out.reserve(probs.size());
    for (auto& [tok, p] : probs) out.push_back({tok, p});
    return out;
}

}  // namespace toolweave
