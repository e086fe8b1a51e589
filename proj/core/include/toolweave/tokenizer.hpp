#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace toolweave {

using TokenId = int32_t;

// A token with its byte offset in the source text.
struct OffsetToken {
    std::string text;
    size_t offset = 0;
};

struct TokenSequence {
    std::vector<TokenId> ids;
    std::string tokenizer_id;

    size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }
};

// Reference tokenizer: whitespace-and-punctuation splitting where every
// token carries its leading whitespace, so concatenating tokens always
// reproduces the input byte-for-byte. "->" is kept as a single symbol;
// non-ASCII bytes are treated as word characters.
//
// Token ids are interned per instance. An optional frozen vocabulary turns
// unknown tokens into per-byte fallback tokens (all 256 single bytes are
// always present in a frozen vocabulary).
class Tokenizer {
public:
    Tokenizer() = default;

    std::string id() const { return "toolweave-word-v1"; }

    // Pure splitting, no interning. Concatenation of the result equals text.
    static std::vector<std::string> split(std::string_view text);
    static std::vector<OffsetToken> split_with_offsets(std::string_view text);

    // The surface token that opens an API call: first token of " [".
    static const std::string& api_open_token();
    // The closing marker and the result arrow, compared ignoring leading whitespace.
    static bool is_api_close(std::string_view token);
    static bool is_result_arrow(std::string_view token);

    TokenSequence encode(std::string_view text);
    std::string decode(const TokenSequence& seq) const;

    std::string token_text(TokenId id) const;
    std::vector<std::string> texts_of(const TokenSequence& seq) const;
    TokenSequence encode_tokens(const std::vector<std::string>& tokens);

    // Freezes the id space to the currently interned tokens plus all single
    // bytes; encode() then splits unknown tokens into their bytes.
    void freeze();
    bool frozen() const;

    size_t vocab_size() const;

private:
    TokenId intern(const std::string& tok);

    mutable std::mutex mu_;
    std::unordered_map<std::string, TokenId> ids_;
    std::vector<std::string> texts_;
    bool frozen_ = false;
};

using TokenizerPtr = std::shared_ptr<Tokenizer>;

}  // namespace toolweave
