#include "toolweave/evalgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "toolweave/util.hpp"

namespace toolweave {

namespace {

std::string qa_prompt(const std::string& question) {
    std::string q = question;
    if (q.empty() || q.back() != '?') q += '?';
    return "Answer the following question: " + q;
}

std::string completion_prompt(const std::string& context) {
    return "Please complete the following text so that it is factually correct: " + context;
}

}  // namespace

std::string build_prompt(const std::string& family, const std::string& context,
                         const std::string& question) {
    if (family == "lama") return completion_prompt(context);
    if (family == "math") {
        std::string joined = context;
        if (!question.empty()) {
            if (!joined.empty()) joined += ' ';
            joined += question;
        }
        if (joined.empty()) return "The answer is";
        return joined + " The answer is";
    }
    if (family == "qa") return qa_prompt(question);
    if (family == "mlqa")
        return "Your task is to answer a question based on the following paragraph: " +
               context + " Now answer the following question in English: " + question;
    if (family == "temporal")
        return question.empty() ? completion_prompt(context) : qa_prompt(question);
    throw std::invalid_argument("unknown eval family: " + family);
}

std::vector<std::string> match_words(std::string_view text) {
    std::vector<std::string> words;
    for (auto& w : split_words(text)) {
        size_t b = 0;
        while (b < w.size() && static_cast<unsigned char>(w[b]) < 0x80 &&
               !is_ascii_alnum(w[b]))
            ++b;
        if (b < w.size()) words.push_back(w.substr(b));
    }
    return words;
}

namespace {

std::string join_first_words(std::string_view text, size_t cap) {
    auto words = match_words(text);
    if (words.size() > cap) words.resize(cap);
    std::string joined;
    for (const auto& w : words) {
        if (!joined.empty()) joined += ' ';
        joined += w;
    }
    return joined;
}

}  // namespace

bool lama_match(std::string_view prediction, std::string_view gold) {
    return contains_ci(join_first_words(prediction, 5), gold);
}

bool math_match(std::string_view prediction, double gold) {
    auto nums = extract_numbers(prediction);
    if (nums.empty()) return false;

    auto separator = [&](size_t i) {
        return std::string(
            trim(prediction.substr(nums[i].end, nums[i + 1].begin - nums[i].end)));
    };
    double value = nums[0].value;
    if (nums.size() >= 3) {
        std::string op = separator(0);
        bool is_op = op == "+" || op == "-" || op == "*" || op == "/" || op == "x" ||
                     op == "×";
        if (is_op && separator(1) == "=") {
            size_t last = 2;
            while (last + 1 < nums.size() && separator(last) == "=") ++last;
            value = nums[last].value;
        }
    }
    return std::abs(value - gold) <= 1e-6;
}

bool qa_match(std::string_view prediction, const std::vector<std::string>& golds,
              size_t cap) {
    std::string joined = join_first_words(prediction, cap);
    for (const auto& gold : golds)
        if (contains_ci(joined, gold)) return true;
    return false;
}

bool item_match(const std::string& family, std::string_view prediction,
                const std::vector<std::string>& golds) {
    if (family == "lama" || family == "temporal") {
        for (const auto& gold : golds)
            if (lama_match(prediction, gold)) return true;
        return false;
    }
    if (family == "math") {
        for (const auto& gold : golds) {
            char* end = nullptr;
            double g = std::strtod(gold.c_str(), &end);
            if (end == gold.c_str()) continue;  // non-numeric gold
            if (math_match(prediction, g)) return true;
        }
        return false;
    }
    if (family == "qa") return qa_match(prediction, golds, 20);
    if (family == "mlqa") return qa_match(prediction, golds, 10);
    throw std::invalid_argument("unknown eval family: " + family);
}

// --- temporal question set -------------------------------------------------

namespace {

Date nth_weekday(int year, int month, int weekday, int n) {
    int first = weekday_index(Date{year, month, 1});
    int day = 1 + (weekday - first + 7) % 7 + 7 * (n - 1);
    return Date{year, month, day};
}

Date last_weekday(int year, int month, int weekday) {
    int last = days_in_month(year, month);
    int w = weekday_index(Date{year, month, last});
    return Date{year, month, last - (w - weekday + 7) % 7};
}

constexpr int kMonday = 1;
constexpr int kThursday = 4;

}  // namespace

std::vector<Holiday> federal_holidays(int year) {
    return {
        {"New Year's Day", Date{year, 1, 1}},
        {"Martin Luther King Jr. Day", nth_weekday(year, 1, kMonday, 3)},
        {"Washington's Birthday", nth_weekday(year, 2, kMonday, 3)},
        {"Memorial Day", last_weekday(year, 5, kMonday)},
        {"Juneteenth National Independence Day", Date{year, 6, 19}},
        {"Independence Day", Date{year, 7, 4}},
        {"Labor Day", nth_weekday(year, 9, kMonday, 1)},
        {"Columbus Day", nth_weekday(year, 10, kMonday, 2)},
        {"Veterans Day", Date{year, 11, 11}},
        {"Thanksgiving Day", nth_weekday(year, 11, kThursday, 4)},
        {"Christmas Day", Date{year, 12, 25}},
    };
}

namespace {

const std::vector<std::string> kFields = {"day of the week", "day of the month",
                                          "month", "year"};
const std::vector<std::string> kUnits = {"days", "weeks", "months", "years"};

std::string field_of(const Date& d, const std::string& field) {
    if (field == "day of the week") return weekday_name(d);
    if (field == "day of the month") return std::to_string(d.day);
    if (field == "month") return month_name(d.month);
    return std::to_string(d.year);
}

template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = rng.uniform_index(i);
        std::swap(v[i - 1], v[j]);
    }
}

struct DateTriple {
    Date current;
    Date past;
    Date future;
};

// Delta from current in the given unit, and the date the question actually
// refers to once the delta is rounded to that unit. Golds come from the
// referent so every answer is recomputable from the question text alone.
struct UnitDelta {
    int64_t n = 0;
    Date referent;
};

UnitDelta unit_delta_back(const Date& current, const Date& past, const std::string& unit) {
    int64_t days = days_from_civil(current) - days_from_civil(past);
    if (unit == "days") return {days, past};
    if (unit == "weeks") {
        int64_t n = std::llround(static_cast<double>(days) / 7.0);
        return {n, add_days(current, -7 * n)};
    }
    if (unit == "months") {
        int64_t n = whole_month_diff(past, current);
        return {n, add_months_clamped(current, static_cast<int>(-n))};
    }
    int64_t n = whole_year_diff(past, current);
    return {n, add_years_clamped(current, static_cast<int>(-n))};
}

int64_t unit_distance(const Date& from, const Date& to, const std::string& unit) {
    int64_t days = days_from_civil(to) - days_from_civil(from);
    if (unit == "days") return days;
    if (unit == "weeks") return std::llround(static_cast<double>(days) / 7.0);
    if (unit == "months") return whole_month_diff(from, to);
    return whole_year_diff(from, to);
}

}  // namespace

std::vector<DatesetItem> generate_dateset(uint64_t seed) {
    // 500 distinct current dates across 2000..2029, then one past and one
    // future companion each, 1..1460 days away.
    const int64_t lo = days_from_civil(Date{2000, 1, 1});
    const int64_t hi = days_from_civil(Date{2029, 12, 31});
    std::vector<int64_t> all_days(hi - lo + 1);
    std::iota(all_days.begin(), all_days.end(), lo);
    Rng date_rng(derive_seed(seed, "dateset-dates"));
    shuffle_vec(all_days, date_rng);
    all_days.resize(500);
    std::sort(all_days.begin(), all_days.end());

    std::vector<DateTriple> triples;
    for (int64_t d : all_days) {
        DateTriple t;
        t.current = civil_from_days(d);
        t.past = add_days(t.current, -static_cast<int64_t>(date_rng.uniform_index(1460) + 1));
        t.future = add_days(t.current, static_cast<int64_t>(date_rng.uniform_index(1460) + 1));
        triples.push_back(t);
    }

    std::vector<DatesetItem> out;
    auto take = [&](std::vector<DatesetItem> items, size_t n, const char* tag) {
        Rng rng(derive_seed(seed, tag));
        shuffle_vec(items, rng);
        if (items.size() < n)
            throw std::runtime_error(std::string("dateset: too few combinations for ") + tag);
        items.resize(n);
        out.insert(out.end(), std::make_move_iterator(items.begin()),
                   std::make_move_iterator(items.end()));
    };
    auto item = [](const DateTriple& t, std::string question, std::string gold,
                   const char* family) {
        return DatesetItem{std::move(question), std::move(gold), t.current, family};
    };

    {  // How many days {ago was, are there until} {past, future}?
        std::vector<DatesetItem> row;
        for (const auto& t : triples) {
            int64_t back = days_from_civil(t.current) - days_from_civil(t.past);
            int64_t ahead = days_from_civil(t.future) - days_from_civil(t.current);
            row.push_back(item(t, "How many days ago was " + long_date(t.past) + "?",
                               std::to_string(back), "days_distance"));
            row.push_back(item(t,
                               "How many days are there until " + long_date(t.future) + "?",
                               std::to_string(ahead), "days_distance"));
        }
        take(std::move(row), 400, "dateset-row-1");
    }

    {  // What {field} was it N {unit} ago?
        std::vector<DatesetItem> row;
        for (const auto& t : triples)
            for (const auto& field : kFields)
                for (const auto& unit : kUnits) {
                    UnitDelta d = unit_delta_back(t.current, t.past, unit);
                    if (d.n == 0) continue;
                    row.push_back(item(t,
                                       "What " + field + " was it " + std::to_string(d.n) +
                                           " " + unit + " ago?",
                                       field_of(d.referent, field), "field_delta_ago"));
                }
        take(std::move(row), 800, "dateset-row-2");
    }

    {  // What {field} will it be in N days?
        std::vector<DatesetItem> row;
        for (const auto& t : triples) {
            int64_t ahead = days_from_civil(t.future) - days_from_civil(t.current);
            for (const auto& field : kFields)
                row.push_back(item(t,
                                   "What " + field + " will it be in " +
                                       std::to_string(ahead) + " days?",
                                   field_of(t.future, field), "field_in_days"));
        }
        take(std::move(row), 800, "dateset-row-3");
    }

    {  // What day of the week {is, was} it on {date}?
        std::vector<DatesetItem> row;
        for (const auto& t : triples) {
            row.push_back(item(t,
                               "What day of the week was it on " + long_date(t.past) + "?",
                               weekday_name(t.past), "weekday_of_date"));
            row.push_back(item(t,
                               "What day of the week is it on " + long_date(t.future) + "?",
                               weekday_name(t.future), "weekday_of_date"));
        }
        take(std::move(row), 400, "dateset-row-4");
    }

    {  // What {field} {is, was} it {relative day}?
        struct Term {
            const char* text;
            const char* verb;
            int offset;
        };
        const Term terms[] = {{"the day before yesterday", "was", -2},
                              {"yesterday", "was", -1},
                              {"today", "is", 0},
                              {"tomorrow", "is", 1},
                              {"the day after tomorrow", "is", 2}};
        std::vector<DatesetItem> row;
        for (const auto& t : triples)
            for (const auto& field : kFields)
                for (const auto& term : terms)
                    row.push_back(item(t,
                                       "What " + field + " " + term.verb + " it " +
                                           term.text + "?",
                                       field_of(add_days(t.current, term.offset), field),
                                       "field_relative_day"));
        take(std::move(row), 4000, "dateset-row-5");
    }

    {  // What {field} {is, was} {holiday} this year?
        std::vector<DatesetItem> row;
        for (const auto& t : triples) {
            auto holidays = federal_holidays(t.current.year);
            for (size_t f = 0; f < 3; ++f)  // no "year": it is asked in-year
                for (const auto& h : holidays) {
                    const char* verb = h.date < t.current ? "was" : "is";
                    row.push_back(item(t,
                                       "What " + kFields[f] + " " + verb + " " + h.name +
                                           " this year?",
                                       field_of(h.date, kFields[f]), "holiday_field"));
                }
        }
        take(std::move(row), 1800, "dateset-row-6");
    }

    {  // How many {unit} {ago was, are there until} {holiday} this year?
        std::vector<DatesetItem> row;
        for (const auto& t : triples) {
            auto holidays = federal_holidays(t.current.year);
            for (const auto& unit : kUnits)
                for (const auto& h : holidays) {
                    bool past = h.date < t.current;
                    int64_t n = past ? unit_distance(h.date, t.current, unit)
                                     : unit_distance(t.current, h.date, unit);
                    if (n == 0) continue;  // degenerate "0 units" questions
                    const char* verb = past ? "ago was" : "are there until";
                    row.push_back(item(t,
                                       "How many " + unit + " " + verb + " " + h.name +
                                           " this year?",
                                       std::to_string(n), "holiday_distance"));
                }
        }
        take(std::move(row), 1200, "dateset-row-7");
    }

    return out;
}

std::string to_jsonl(const DatesetItem& item) {
    nlohmann::ordered_json j;
    j["question"] = item.question;
    j["gold"] = item.gold;
    j["current_date"] = item.current_date.iso();
    j["template_family"] = item.template_family;
    return j.dump();
}

DatesetItem dateset_from_jsonl(const std::string& line) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("question") || !j.contains("gold") ||
        !j.contains("current_date") || !j.contains("template_family"))
        throw std::runtime_error("malformed dateset record: " + line);
    DatesetItem item;
    item.question = j.at("question").get<std::string>();
    item.gold = j.at("gold").get<std::string>();
    auto date = Date::from_iso(j.at("current_date").get<std::string>());
    if (!date) throw std::runtime_error("dateset line: bad current_date");
    item.current_date = *date;
    item.template_family = j.at("template_family").get<std::string>();
    return item;
}

}  // namespace toolweave
