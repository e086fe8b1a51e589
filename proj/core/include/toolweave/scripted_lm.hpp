#pragma once

#include <map>
#include <string>
#include <vector>

#include "toolweave/lm.hpp"

namespace toolweave {

// Test double: explicit next-token distributions keyed by a suffix of the
// detokenized context. The longest matching suffix wins; probability mass a
// rule leaves unassigned is spread uniformly over fallback tokens the rule
// does not mention. With no matching rule the distribution is uniform over
// the fallback vocabulary. Fully deterministic.
class ScriptedLm final : public LmInterface {
public:
    ScriptedLm() = default;
    explicit ScriptedLm(std::vector<std::string> fallback_vocab)
        : fallback_(std::move(fallback_vocab)) {}

    void set_fallback(std::vector<std::string> vocab) { fallback_ = std::move(vocab); }
    void add_rule(std::string context_suffix, std::vector<TokenProb> dist);

    std::string tokenizer_id() const override;
    std::vector<TokenProb> next_distribution(
        const std::vector<std::string>& context) const override;

private:
    std::map<std::string, std::vector<TokenProb>> rules_;
    std::vector<std::string> fallback_;
};

}  // namespace toolweave
