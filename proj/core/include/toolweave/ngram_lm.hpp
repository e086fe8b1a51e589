#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "toolweave/lm.hpp"

namespace toolweave {

// Deterministic additive-smoothing n-gram model over token strings. Counts
// are kept for every context length 0..order-1 and the longest available
// context is used directly (no interpolation), so every probability is a
// plain (count + alpha) / (total + alpha * |V|) ratio that can be checked by
// hand. Unknown tokens map to "<unk>".
class ReferenceNgramLm final : public LmInterface {
public:
    static constexpr const char* kUnknown = "<unk>";

    explicit ReferenceNgramLm(size_t order = 3, double alpha = 0.1);

    // Accumulates counts from one token sequence; contexts never span calls,
    // so train once per document.
    void train(const std::vector<std::string>& tokens);
    void train_text(std::string_view text);

    std::string tokenizer_id() const override;
    std::vector<TokenProb> next_distribution(
        const std::vector<std::string>& context) const override;
    double token_prob(const std::vector<std::string>& context,
                      std::string_view token) const override;

    size_t order() const { return order_; }
    double alpha() const { return alpha_; }
    // First entry is always kUnknown; trained types follow in first-seen order.
    const std::vector<std::string>& vocab() const { return vocab_; }

    // JSON persistence with deterministic ordering; load checks the embedded
    // tokenizer_id.
    void save(const std::string& path) const;
    static ReferenceNgramLm load(const std::string& path);

private:
    struct ContextCounts {
        std::map<std::string, int64_t> counts;
        int64_t total = 0;
    };

    const std::string& map_unknown(const std::string& token) const;
    const ContextCounts* find_context(const std::vector<std::string>& context,
                                      size_t* context_len) const;

    size_t order_;
    double alpha_;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, size_t> vocab_index_;
    // tables_[L] maps an encoded length-L context to its counts.
    std::vector<std::unordered_map<std::string, ContextCounts>> tables_;
};

}  // namespace toolweave
