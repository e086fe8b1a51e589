#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "toolweave/calendar_date.hpp"

namespace toolweave {

// One zero-shot evaluation instance. `family` picks the prompt builder and
// the lenient matcher: lama | math | qa | mlqa | temporal.
struct EvalItem {
    std::string id;
    std::string family;
    std::string context;                // x (may be empty)
    std::string question;               // q (may be empty)
    std::vector<std::string> golds;
    std::string current_date;           // ISO, temporal items only
};

// Exact template substitution per family. QA questions get a trailing "?"
// when missing; temporal items use the QA template when a question is
// present and the completion template otherwise.
std::string build_prompt(const std::string& family, const std::string& context,
                         const std::string& question);

// Matcher word = maximal non-whitespace run, minus leading ASCII
// punctuation; runs that were punctuation only are dropped.
std::vector<std::string> match_words(std::string_view text);

// Gold appears (case-insensitive) within the first five predicted words.
bool lama_match(std::string_view prediction, std::string_view gold);

// First predicted number — or, when the prediction opens with an equation
// "a op b = c (= d)*", the number after its last '=' — equals gold ± 1e-6.
bool math_match(std::string_view prediction, double gold);

// Any gold appears (case-insensitive) within the first `cap` words.
bool qa_match(std::string_view prediction, const std::vector<std::string>& golds,
              size_t cap);

// Dispatches on family: lama/temporal → 5-word containment, math → number
// extraction, qa → 20-word cap, mlqa → 10-word cap.
bool item_match(const std::string& family, std::string_view prediction,
                const std::vector<std::string>& golds);

// --- temporal question set -------------------------------------------------

struct DatesetItem {
    std::string question;
    std::string gold;
    Date current_date;           // the presumed "today" for the Calendar tool
    std::string template_family; // which template row produced the item
};

// The 11 United States federal holidays for `year`, chronological. Fixed
// statutory dates/rules; no observed-day shifting.
struct Holiday {
    std::string name;
    Date date;
};
std::vector<Holiday> federal_holidays(int year);

// Deterministically builds the 9,400-item temporal question set: 500 random
// current dates, each with one past and one future date within four years,
// substituted into seven template rows with fixed sizes
// 400/800/800/400/4000/1800/1200. Every gold is recomputable from the
// question text and current date alone.
std::vector<DatesetItem> generate_dateset(uint64_t seed);

// One JSON object per line: {question, gold, current_date, template_family}.
std::string to_jsonl(const DatesetItem& item);
DatesetItem dateset_from_jsonl(const std::string& line);

}  // namespace toolweave
