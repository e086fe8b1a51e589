#include "toolweave/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "toolweave/calls.hpp"
#include "toolweave/tokenizer.hpp"

namespace toolweave {

AnnotationContext make_context(const ToolPrompt& prompt, std::string_view doc_text) {
    AnnotationContext ctx;
    ctx.prompt_tokens = Tokenizer::split(prompt.instantiate(doc_text));
    ctx.doc_tokens = Tokenizer::split(doc_text);
    return ctx;
}

std::vector<CandidatePosition> sample_positions(const LmInterface& lm,
                                                const AnnotationContext& ctx,
                                                const SamplingConfig& cfg) {
    std::vector<CandidatePosition> above;
    std::vector<std::string> context = ctx.prompt_tokens;
    for (size_t i = 0; i < ctx.doc_tokens.size(); ++i) {
        if (i > 0) context.push_back(ctx.doc_tokens[i - 1]);
        const double p = api_token_prob(lm, context);
        if (p > cfg.api_prob_threshold) above.push_back({i, p});
    }
    if (above.size() > cfg.max_positions) {
        // Top k by probability; equal probabilities keep the earlier position.
        std::stable_sort(above.begin(), above.end(),
                         [](const CandidatePosition& a, const CandidatePosition& b) {
                             return a.prob > b.prob;
                         });
        above.resize(cfg.max_positions);
        std::sort(above.begin(), above.end(),
                  [](const CandidatePosition& a, const CandidatePosition& b) {
                      return a.position < b.position;
                  });
    }
    return above;
}

std::vector<ApiCall> sample_calls(const LmInterface& lm, const AnnotationContext& ctx,
                                  size_t position, const std::string& tool,
                                  const SamplingConfig& cfg, Rng& rng) {
    std::vector<std::string> prefix = ctx.prompt_tokens;
    prefix.insert(prefix.end(), ctx.doc_tokens.begin(),
                  ctx.doc_tokens.begin() + static_cast<ptrdiff_t>(position));
    prefix.push_back(Tokenizer::api_open_token());

    const auto sequences = sample_until(lm, prefix, "]", cfg.calls_per_position,
                                        cfg.max_call_len, cfg.temperature, rng);
    std::vector<ApiCall> calls;
    for (const auto& seq : sequences) {
        std::string body;
        for (size_t t = 0; t + 1 < seq.size(); ++t) body += seq[t];  // drop the "]"
        auto call = parse_call(body);
        if (!call || call->tool != tool) continue;
        if (std::find(calls.begin(), calls.end(), *call) == calls.end())
            calls.push_back(std::move(*call));
    }
    return calls;
}

namespace {

constexpr size_t kNumberWindowTokens = 100;
constexpr double kArithmeticTolerance = 1e-6;

bool roughly_equal(double a, double b) {
    return std::fabs(a - b) <= kArithmeticTolerance * std::max({std::fabs(a), std::fabs(b), 1.0});
}

// Does any number in [first, last] equal another pair combined with one of
// the four operations?
bool arithmetic_triple_in(const std::vector<double>& values, size_t first, size_t last) {
    for (size_t a = first; a <= last; ++a) {
        for (size_t b = first; b <= last; ++b) {
            if (a == b) continue;
            double results[4];
            size_t n = 0;
            results[n++] = values[a] + values[b];
            results[n++] = values[a] - values[b];
            results[n++] = values[a] * values[b];
            if (values[b] != 0.0) results[n++] = values[a] / values[b];
            for (size_t c = first; c <= last; ++c) {
                if (c == a || c == b) continue;
                for (size_t r = 0; r < n; ++r)
                    if (roughly_equal(values[c], results[r])) return true;
            }
        }
    }
    return false;
}

// Token index of the token covering byte offset `byte`.
size_t token_index_at(const std::vector<OffsetToken>& tokens, size_t byte) {
    size_t lo = 0, hi = tokens.size();
    while (lo + 1 < hi) {
        size_t mid = (lo + hi) / 2;
        if (tokens[mid].offset <= byte)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

bool marker_followed_by_number(const std::string& text,
                               const std::vector<NumberMatch>& numbers) {
    static const std::vector<std::string> markers = {"=", "equals", "equal to",
                                                     "total of", "average of"};
    const std::string lowered = lower_ascii(text);
    for (const auto& marker : markers) {
        size_t pos = 0;
        while ((pos = lowered.find(marker, pos)) != std::string::npos) {
            const size_t end = pos + marker.size();
            // Word markers must not sit inside a larger word.
            const bool wordlike = is_ascii_alpha(marker.front());
            const bool boundary_ok =
                !wordlike || ((pos == 0 || !is_ascii_alnum(lowered[pos - 1])) &&
                              (end == lowered.size() || !is_ascii_alnum(lowered[end])));
            if (boundary_ok) {
                size_t next = end;
                while (next < text.size() && is_ascii_space(text[next])) ++next;
                for (const auto& num : numbers) {
                    if (num.begin > next) break;
                    if (num.begin == next && num.begin >= end) return true;
                }
            }
            pos += 1;
        }
    }
    return false;
}

PrefilterResult calculator_prefilter(const Document& doc, uint64_t global_seed) {
    PrefilterResult res;
    const auto numbers = extract_numbers(doc.text);
    if (numbers.size() >= 3) {
        const auto tokens = Tokenizer::split_with_offsets(doc.text);
        std::vector<double> values;
        std::vector<size_t> token_pos;
        values.reserve(numbers.size());
        for (const auto& num : numbers) {
            values.push_back(num.value);
            token_pos.push_back(token_index_at(tokens, num.begin));
        }
        // Criterion (i): an arithmetic triple inside a 100-token window.
        for (size_t first = 0; first < values.size(); ++first) {
            size_t last = first;
            while (last + 1 < values.size() &&
                   token_pos[last + 1] - token_pos[first] < kNumberWindowTokens)
                ++last;
            if (last - first >= 2 && arithmetic_triple_in(values, first, last)) {
                res.keep = true;
                return res;
            }
        }
    }
    // Criterion (ii): an equality/aggregation marker followed by a number.
    if (!numbers.empty() && marker_followed_by_number(doc.text, numbers)) {
        res.keep = true;
        return res;
    }
    // Criterion (iii): three or more numbers anywhere, 1% lottery.
    if (numbers.size() >= 3) {
        const uint64_t ticket =
            splitmix64(derive_seed(global_seed, doc.id) ^ fnv1a64("calculator-lottery"));
        res.keep = ticket % 10000 < 100;
    }
    return res;
}

bool chunk_is_wordless(const std::vector<std::string>& tokens, size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
        for (char c : tokens[i]) {
            unsigned char b = static_cast<unsigned char>(c);
            if (is_ascii_alpha(c) || b >= 0x80) return false;
        }
    return true;
}

PrefilterResult mt_prefilter(const Document& doc, const LangId& langid) {
    PrefilterResult res;
    const auto tokens = Tokenizer::split(doc.text);
    constexpr size_t kChunk = 10;
    const size_t n_chunks = (tokens.size() + kChunk - 1) / kChunk;
    if (n_chunks < 3) return res;

    auto chunk_text = [&](size_t c) {
        std::string text;
        const size_t begin = c * kChunk;
        const size_t end = std::min(tokens.size(), begin + kChunk);
        for (size_t i = begin; i < end; ++i) text += tokens[i];
        return text;
    };
    auto is_english = [&](size_t c) { return langid.detect(chunk_text(c)).language == "en"; };

    for (size_t c = 1; c + 1 < n_chunks; ++c) {
        const size_t begin = c * kChunk;
        const size_t end = std::min(tokens.size(), begin + kChunk);
        if (chunk_is_wordless(tokens, begin, end)) continue;
        const LangIdResult det = langid.detect(chunk_text(c));
        if (det.language == "en" || det.language == "und" || det.confidence < 0.8) continue;
        if (!is_english(c - 1) || !is_english(c + 1)) continue;
        res.foreign_chunks.emplace_back(begin, end);
    }
    res.keep = !res.foreign_chunks.empty();
    return res;
}

}  // namespace

std::optional<Date> date_from_url(std::string_view url) {
    // /yyyy/mm/dd/ style segments or an inline yyyy-mm-dd.
    for (size_t i = 0; i + 10 <= url.size() || i + 8 <= url.size(); ++i) {
        if (!is_ascii_digit(url[i])) continue;
        if (i > 0 && is_ascii_digit(url[i - 1])) continue;
        if (i + 4 > url.size()) break;
        int year = 0;
        bool four_digits = true;
        for (size_t k = 0; k < 4; ++k) {
            if (i + k >= url.size() || !is_ascii_digit(url[i + k])) {
                four_digits = false;
                break;
            }
            year = year * 10 + (url[i + k] - '0');
        }
        if (!four_digits || year < 1900 || year > 2099) continue;
        size_t p = i + 4;
        if (p >= url.size()) break;
        const char sep = url[p];
        if (sep != '/' && sep != '-' && sep != '_' && sep != '.') continue;
        ++p;
        auto read_part = [&](int max_digits) -> int {
            int v = 0, digits = 0;
            while (p < url.size() && is_ascii_digit(url[p]) && digits < max_digits) {
                v = v * 10 + (url[p] - '0');
                ++p;
                ++digits;
            }
            return digits == 0 ? -1 : v;
        };
        const int month = read_part(2);
        if (month < 0 || p >= url.size() || url[p] != sep) continue;
        ++p;
        const int day = read_part(2);
        if (day < 0) continue;
        if (p < url.size() && is_ascii_digit(url[p])) continue;  // e.g. 2017-03-091
        if (Date::valid(year, month, day)) return Date{year, month, day};
    }
    return std::nullopt;
}

PrefilterResult prefilter(const Document& doc, std::string_view tool,
                          uint64_t global_seed, const LangId* langid) {
    if (tool == "Calculator") return calculator_prefilter(doc, global_seed);
    if (tool == "Calendar") {
        PrefilterResult res;
        if (doc.url) res.doc_date = date_from_url(*doc.url);
        res.keep = res.doc_date.has_value();
        return res;
    }
    if (tool == "MT") {
        if (!langid) throw std::invalid_argument("MT prefilter needs a language detector");
        return mt_prefilter(doc, *langid);
    }
    PrefilterResult res;
    res.keep = true;  // QA / WikiSearch: no heuristic
    return res;
}

bool mt_postfilter(const std::vector<std::string>& doc_tokens, const ApiCall& call,
                   size_t position) {
    std::string before, after;
    for (size_t i = 0; i < doc_tokens.size(); ++i)
        (i < position ? before : after) += doc_tokens[i];
    if (before.find(call.input) != std::string::npos) return true;
    return after.find(call.input) == std::string::npos;
}

}  // namespace toolweave
