#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "toolweave/evalgen.hpp"

using namespace toolweave;

TEST_CASE("build_prompt fills the per-family templates") {
    CHECK(build_prompt("lama", "The capital of France is", "") ==
          "Please complete the following text so that it is factually correct: "
          "The capital of France is");

    CHECK(build_prompt("math", "Joe has 7 apples and eats 3.", "How many are left?") ==
          "Joe has 7 apples and eats 3. How many are left? The answer is");
    CHECK(build_prompt("math", "", "What is 2+2?") == "What is 2+2? The answer is");
    CHECK(build_prompt("math", "", "") == "The answer is");

    CHECK(build_prompt("qa", "", "Who wrote Dracula?") ==
          "Answer the following question: Who wrote Dracula?");
    CHECK(build_prompt("qa", "", "Who wrote Dracula") ==
          "Answer the following question: Who wrote Dracula?");

    CHECK(build_prompt("mlqa", "Ein Absatz.", "What is this?") ==
          "Your task is to answer a question based on the following paragraph: "
          "Ein Absatz. Now answer the following question in English: What is this?");

    // Temporal items borrow the completion template unless they ask a question.
    CHECK(build_prompt("temporal", "The current day of the week is", "") ==
          "Please complete the following text so that it is factually correct: "
          "The current day of the week is");
    CHECK(build_prompt("temporal", "", "What day is it") ==
          "Answer the following question: What day is it?");

    CHECK_THROWS_AS(build_prompt("riddles", "", "x"), std::invalid_argument);
}

TEST_CASE("match_words strips leading punctuation only") {
    auto w = match_words("  \"Paris\" -- (1889) ... done.");
    REQUIRE(w.size() == 3);  // punctuation-only runs vanish
    CHECK(w[0] == "Paris\"");
    CHECK(w[1] == "1889)");
    CHECK(w[2] == "done.");
}

TEST_CASE("lama_match looks at the first five words") {
    CHECK(lama_match("one two three four Paris and more", "paris"));
    CHECK_FALSE(lama_match("one two three four five Paris", "Paris"));
    // Case-insensitive substring of the joined window.
    CHECK(lama_match("the EIFFEL tower", "eiffel"));
    CHECK(lama_match("New York City", "new york"));
    CHECK_FALSE(lama_match("", "x"));
}

TEST_CASE("math_match reads equations and plain numbers") {
    CHECK(math_match("8", 8.0));
    CHECK(math_match("The answer is 8 apples", 8.0));
    CHECK(math_match("The correct answer is 5+3=8", 8.0));
    CHECK_FALSE(math_match("The correct answer is 5+3=8", 5.0));
    CHECK(math_match("4 x 2 = 8", 8.0));
    CHECK(math_match("2 + 3 = 5 = 5.0", 5.0));
    // A list is not an equation; the first number wins.
    CHECK(math_match("5, 3, 8", 5.0));
    CHECK_FALSE(math_match("5, 3, 8", 8.0));
    CHECK(math_match("roughly 3.1415927", 3.14159265));  // within 1e-6
    CHECK_FALSE(math_match("roughly 3.15", 3.14159265));
    CHECK_FALSE(math_match("no digits here", 0.0));
}

TEST_CASE("qa_match respects the word cap") {
    std::string nineteen;
    for (int i = 0; i < 19; ++i) nineteen += "w ";
    CHECK(qa_match(nineteen + "Stoker", {"stoker"}, 20));
    CHECK_FALSE(qa_match(nineteen + "pad Stoker", {"stoker"}, 20));
    CHECK(qa_match("Bram Stoker wrote it", {"nope", "bram stoker"}, 20));

    std::string nine;
    for (int i = 0; i < 9; ++i) nine += "w ";
    CHECK(qa_match(nine + "Stoker", {"stoker"}, 10));
    CHECK_FALSE(qa_match(nine + "pad Stoker", {"stoker"}, 10));
}

TEST_CASE("item_match dispatches on the family") {
    CHECK(item_match("lama", "It is Paris of course", {"Paris"}));
    CHECK_FALSE(item_match("lama", "one two three four five Paris", {"Paris"}));
    CHECK(item_match("temporal", "Monday comes first", {"Monday"}));

    // Non-numeric golds are skipped, not matched.
    CHECK(item_match("math", "the answer is 8", {"eight", "8"}));
    CHECK_FALSE(item_match("math", "the answer is 8", {"eight"}));

    std::string nineteen;
    for (int i = 0; i < 19; ++i) nineteen += "w ";
    CHECK(item_match("qa", nineteen + "Stoker", {"Stoker"}));
    CHECK_FALSE(item_match("mlqa", nineteen + "Stoker", {"Stoker"}));
}

TEST_CASE("federal holidays follow the statutory rules") {
    auto h2020 = federal_holidays(2020);
    REQUIRE(h2020.size() == 11);
    for (size_t i = 1; i < h2020.size(); ++i) CHECK(h2020[i - 1].date < h2020[i].date);

    std::map<std::string, Date> byname;
    for (const auto& h : h2020) byname[h.name] = h.date;
    CHECK(byname.at("New Year's Day") == Date{2020, 1, 1});
    CHECK(byname.at("Martin Luther King Jr. Day") == Date{2020, 1, 20});
    CHECK(byname.at("Washington's Birthday") == Date{2020, 2, 17});
    CHECK(byname.at("Memorial Day") == Date{2020, 5, 25});
    CHECK(byname.at("Juneteenth National Independence Day") == Date{2020, 6, 19});
    CHECK(byname.at("Independence Day") == Date{2020, 7, 4});
    CHECK(byname.at("Labor Day") == Date{2020, 9, 7});
    CHECK(byname.at("Columbus Day") == Date{2020, 10, 12});
    CHECK(byname.at("Veterans Day") == Date{2020, 11, 11});
    CHECK(byname.at("Thanksgiving Day") == Date{2020, 11, 26});
    CHECK(byname.at("Christmas Day") == Date{2020, 12, 25});

    auto find = [](const std::vector<Holiday>& hs, std::string_view name) {
        for (const auto& h : hs)
            if (h.name == name) return h.date;
        return Date{};
    };
    CHECK(find(federal_holidays(2021), "Martin Luther King Jr. Day") == Date{2021, 1, 18});
    CHECK(find(federal_holidays(2021), "Columbus Day") == Date{2021, 10, 11});
    CHECK(find(federal_holidays(2023), "Labor Day") == Date{2023, 9, 4});
    CHECK(find(federal_holidays(2023), "Thanksgiving Day") == Date{2023, 11, 23});
}

TEST_CASE("generate_dateset is deterministic with fixed row sizes") {
    auto items = generate_dateset(42);
    REQUIRE(items.size() == 9400);

    std::map<std::string, size_t> counts;
    std::set<std::string> dates;
    for (const auto& it : items) {
        ++counts[it.template_family];
        dates.insert(it.current_date.iso());
        CHECK_FALSE(it.question.empty());
        CHECK_FALSE(it.gold.empty());
    }
    CHECK(counts["days_distance"] == 400);
    CHECK(counts["field_delta_ago"] == 800);
    CHECK(counts["field_in_days"] == 800);
    CHECK(counts["weekday_of_date"] == 400);
    CHECK(counts["field_relative_day"] == 4000);
    CHECK(counts["holiday_field"] == 1800);
    CHECK(counts["holiday_distance"] == 1200);
    CHECK(counts.size() == 7);
    CHECK(dates.size() == 500);
    for (const auto& iso : dates) {
        auto d = Date::from_iso(iso);
        REQUIRE(d);
        CHECK(d->year >= 2000);
        CHECK(d->year <= 2029);
    }

    auto again = generate_dateset(42);
    REQUIRE(again.size() == items.size());
    for (size_t i = 0; i < items.size(); ++i) {
        CHECK(again[i].question == items[i].question);
        CHECK(again[i].gold == items[i].gold);
        CHECK(again[i].current_date == items[i].current_date);
        CHECK(again[i].template_family == items[i].template_family);
    }

    auto other = generate_dateset(7);
    bool differs = false;
    for (size_t i = 0; i < items.size() && !differs; ++i)
        differs = other[i].question != items[i].question;
    CHECK(differs);
}

TEST_CASE("weekday questions carry their own answer") {
    // Spot-check golds that are recomputable from the question alone.
    auto items = generate_dateset(42);
    size_t checked = 0;
    for (const auto& it : items) {
        if (it.template_family != "weekday_of_date") continue;
        // "What day of the week was it on January 3, 2015?" — recover the
        // long date, then compare the gold against the calendar.
        auto on = it.question.rfind(" on ");
        REQUIRE(on != std::string::npos);
        std::string longform = it.question.substr(on + 4);
        REQUIRE(longform.back() == '?');
        longform.pop_back();

        Date d{};
        bool parsed = false;
        for (int m = 1; m <= 12; ++m) {
            const std::string prefix = month_name(m) + " ";
            if (longform.rfind(prefix, 0) != 0) continue;
            size_t comma = longform.find(',');
            REQUIRE(comma != std::string::npos);
            d.month = m;
            d.day = std::stoi(longform.substr(prefix.size(), comma - prefix.size()));
            d.year = std::stoi(longform.substr(comma + 2));
            parsed = true;
        }
        REQUIRE(parsed);
        CHECK(it.gold == weekday_name(d));
        ++checked;
    }
    CHECK(checked == 400);
}

TEST_CASE("dateset items survive a JSONL round trip") {
    DatesetItem item{"How many days ago was March 1, 2020?", "31", Date{2020, 4, 1},
                     "days_distance"};
    auto line = to_jsonl(item);
    auto back = dateset_from_jsonl(line);
    CHECK(back.question == item.question);
    CHECK(back.gold == item.gold);
    CHECK(back.current_date == item.current_date);
    CHECK(back.template_family == item.template_family);
    CHECK_THROWS_AS(dateset_from_jsonl("{no json"), std::runtime_error);
}
