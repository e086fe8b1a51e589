#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

namespace toolweave {

struct LangIdResult {
    std::string language;  // ISO 639-1 code, or "und" when there is no signal
    double confidence = 0.0;
};

// Pluggable detector interface; deployments may wrap an external classifier.
class LangId {
public:
    virtual ~LangId() = default;
    virtual LangIdResult detect(std::string_view text) const = 0;
};

// Byte-trigram frequency profiles with additive smoothing; the confidence is
// the softmax posterior over the registered languages. Ships with small
// embedded profiles for en, fr, de, es, pt, zh — adequate for prefilter
// heuristics and tests, not a production classifier.
class TrigramLangId final : public LangId {
public:
    explicit TrigramLangId(double alpha = 0.5);

    // A detector with no embedded profiles (register your own).
    static TrigramLangId without_builtin(double alpha = 0.5);

    void add_language(const std::string& code, std::string_view sample_text);

    LangIdResult detect(std::string_view text) const override;

private:
    struct Profile {
        std::unordered_map<uint32_t, int64_t> counts;
        int64_t total = 0;
    };

    double alpha_;
    std::unordered_map<std::string, Profile> profiles_;
    std::set<uint32_t> seen_trigrams_;
};

}  // namespace toolweave
