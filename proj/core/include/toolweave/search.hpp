#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace toolweave {

struct WikiSection {
    std::string heading;  // may be empty (lead section)
    std::string text;
};

struct WikiPage {
    std::string id;
    std::string title;
    std::vector<WikiSection> sections;
};

// Okapi BM25 over (page, section) units, so every hit can be rendered as a
// "Title > heading > text" snippet. Immutable after build; rebuilding from
// the same corpus yields identical state.
class SearchIndex {
public:
    struct Params {
        double k1 = 1.2;
        double b = 0.75;
        size_t snippet_chars = 320;
    };

    static SearchIndex build(const std::vector<WikiPage>& pages, Params params);
    static SearchIndex build(const std::vector<WikiPage>& pages) {
        return build(pages, Params());
    }

    // Lowercased word terms as used for both indexing and queries.
    static std::vector<std::string> analyze(std::string_view text);

    // BM25 score of one section for the given terms (with multiplicity):
    // sum of idf(t) * tf*(k1+1) / (tf + k1*(1 - b + b*len/avglen)) with
    // idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)).
    double score(const std::vector<std::string>& terms, size_t section) const;

    // Best-scoring section, ties broken by lower index; nothing when no term
    // occurs anywhere.
    std::optional<size_t> top1(const std::vector<std::string>& terms) const;

    // Top-1 rendered as a single-line snippet, truncated at a word boundary.
    std::optional<std::string> search(std::string_view query) const;

    std::string snippet(size_t section) const;
    size_t section_count() const { return sections_.size(); }
    const Params& params() const { return params_; }

    void save(const std::string& path) const;
    static SearchIndex load(const std::string& path);

private:
    struct Section {
        std::string title;
        std::string heading;
        std::string text;
        size_t length = 0;  // in terms
        std::unordered_map<std::string, int32_t> tf;
    };

    Params params_;
    std::vector<Section> sections_;
    std::unordered_map<std::string, std::vector<uint32_t>> postings_;  // term -> section ids
    double avg_length_ = 0.0;
};

// KILT-style corpus: JSONL of {id, title, sections: [{heading, text}]}.
std::vector<WikiPage> load_kilt_jsonl(const std::string& path);

}  // namespace toolweave
