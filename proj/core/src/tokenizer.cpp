#include "toolweave/tokenizer.hpp"

#include <stdexcept>

#include "toolweave/util.hpp"

namespace toolweave {

namespace {

bool is_word_byte(unsigned char c) {
    return is_ascii_alnum(static_cast<char>(c)) || c >= 0x80;
}

}  // namespace

std::vector<OffsetToken> Tokenizer::split_with_offsets(std::string_view text) {
    std::vector<OffsetToken> out;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        size_t start = i;
        while (i < n && is_ascii_space(text[i])) ++i;
        if (i == n) {
            // Trailing whitespace forms its own token.
            out.push_back({std::string(text.substr(start)), start});
            break;
        }
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_word_byte(c)) {
            size_t w = i;
            while (w < n && is_word_byte(static_cast<unsigned char>(text[w]))) ++w;
            i = w;
        } else if (text[i] == '-' && i + 1 < n && text[i + 1] == '>') {
            i += 2;
        } else {
            ++i;
        }
        out.push_back({std::string(text.substr(start, i - start)), start});
    }
    return out;
}

std::vector<std::string> Tokenizer::split(std::string_view text) {
    std::vector<std::string> out;
    for (auto& t : split_with_offsets(text)) out.push_back(std::move(t.text));
    return out;
}

const std::string& Tokenizer::api_open_token() {
    static const std::string tok = " [";
    return tok;
}

bool Tokenizer::is_api_close(std::string_view token) {
    return trim(token) == "]";
}

bool Tokenizer::is_result_arrow(std::string_view token) {
    return trim(token) == "->";
}

TokenId Tokenizer::intern(const std::string& tok) {
    auto it = ids_.find(tok);
    if (it != ids_.end()) return it->second;
    if (frozen_) return -1;
    TokenId id = static_cast<TokenId>(texts_.size());
    texts_.push_back(tok);
    ids_.emplace(tok, id);
    return id;
}

TokenSequence Tokenizer::encode(std::string_view text) {
    return encode_tokens(split(text));
}

TokenSequence Tokenizer::encode_tokens(const std::vector<std::string>& tokens) {
    std::lock_guard<std::mutex> lock(mu_);
    TokenSequence seq;
    seq.tokenizer_id = id();
    seq.ids.reserve(tokens.size());
    for (const auto& tok : tokens) {
        TokenId tid = intern(tok);
        if (tid >= 0) {
            seq.ids.push_back(tid);
            continue;
        }
        // Frozen vocabulary: fall back to single bytes, which are always present.
        for (char c : tok) {
            auto it = ids_.find(std::string(1, c));
            if (it == ids_.end()) throw std::logic_error("frozen vocabulary lacks byte token");
            seq.ids.push_back(it->second);
        }
    }
    return seq;
}

std::string Tokenizer::decode(const TokenSequence& seq) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::string out;
    for (TokenId id : seq.ids) {
        if (id < 0 || static_cast<size_t>(id) >= texts_.size())
            throw std::out_of_range("token id out of range");
        out += texts_[static_cast<size_t>(id)];
    }
    return out;
}

std::string Tokenizer::token_text(TokenId id) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (id < 0 || static_cast<size_t>(id) >= texts_.size())
        throw std::out_of_range("token id out of range");
    return texts_[static_cast<size_t>(id)];
}

std::vector<std::string> Tokenizer::texts_of(const TokenSequence& seq) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<std::string> out;
    out.reserve(seq.ids.size());
    for (TokenId id : seq.ids) {
        if (id < 0 || static_cast<size_t>(id) >= texts_.size())
            throw std::out_of_range("token id out of range");
        out.push_back(texts_[static_cast<size_t>(id)]);
    }
    return out;
}

void Tokenizer::freeze() {
    std::lock_guard<std::mutex> lock(mu_);
    for (int b = 0; b < 256; ++b) {
        std::string s(1, static_cast<char>(b));
        if (!ids_.count(s)) {
            TokenId id = static_cast<TokenId>(texts_.size());
            texts_.push_back(s);
            ids_.emplace(std::move(s), id);
        }
    }
    frozen_ = true;
}

bool Tokenizer::frozen() const {
    std::lock_guard<std::mutex> lock(mu_);
    return frozen_;
}

size_t Tokenizer::vocab_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return texts_.size();
}

}  // namespace toolweave
