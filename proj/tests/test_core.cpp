#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "toolweave/calendar_date.hpp"
#include "toolweave/calls.hpp"
#include "toolweave/tokenizer.hpp"
#include "toolweave/types.hpp"
#include "toolweave/util.hpp"

using namespace toolweave;

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("splitmix64 matches the reference sequence") {
    // First outputs of the reference generator for seeds 0 and 1.
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(1) == 0x910a2dec89025cc1ULL);
}

TEST_CASE("derive_seed is stable and key-sensitive") {
    CHECK(derive_seed(42, "doc-1") == derive_seed(42, "doc-1"));
    CHECK(derive_seed(42, "doc-1") != derive_seed(42, "doc-2"));
    CHECK(derive_seed(42, "doc-1") != derive_seed(43, "doc-1"));
}

TEST_CASE("Rng wraps mt19937_64 deterministically") {
    Rng a(42), b(42);
    std::mt19937_64 ref(42);
    for (int i = 0; i < 5; ++i) {
        uint64_t v = a.next_u64();
        CHECK(v == b.next_u64());
        CHECK(v == ref());
    }
    Rng c(7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(c.uniform_index(10) < 10);
        double r = c.uniform_real();
        CHECK(r >= 0.0);
        CHECK(r < 1.0);
    }
    CHECK_THROWS_AS(c.uniform_index(0), std::invalid_argument);
}

TEST_CASE("Fraction arithmetic is exact and canonical") {
    CHECK(Fraction(1, 3) + Fraction(4, 15) == Fraction(3, 5));
    CHECK(Fraction(1, 2) - Fraction(1, 3) == Fraction(1, 6));
    CHECK(Fraction(2, 3) * Fraction(3, 4) == Fraction(1, 2));
    CHECK(Fraction(1, 2) / Fraction(1, 4) == Fraction(2, 1));
    CHECK(Fraction(2, -4).num == -1);
    CHECK(Fraction(2, -4).den == 2);
    CHECK(Fraction(0, 5) == Fraction(0, 1));
    CHECK(Fraction(1, 3) < Fraction(2, 5));
    CHECK(Fraction(1, 4).value() == doctest::Approx(0.25));
    CHECK_THROWS_AS(Fraction(1, 0), std::domain_error);
    CHECK_THROWS_AS(Fraction(1, 2) / Fraction(0, 1), std::domain_error);
    CHECK_THROWS_AS(Fraction(INT64_MAX, 1) * Fraction(3, 1), std::overflow_error);
}

TEST_CASE("string helpers") {
    CHECK(trim("  a b \n") == "a b");
    CHECK(lower_ascii("AbC1") == "abc1");
    CHECK(contains_ci("The Answer", "answer"));
    CHECK_FALSE(contains_ci("The Answer", "question"));
    CHECK(single_line("a\nb\r\n  c\t d") == "a b c d");
    CHECK(split_words(" a  bb\tc ") == std::vector<std::string>{"a", "bb", "c"});
}

TEST_CASE("extract_numbers finds standalone decimal literals") {
    auto nums = extract_numbers("27 + 4 * 2");
    REQUIRE(nums.size() == 3);
    CHECK(nums[0].value == 27.0);
    CHECK(nums[1].value == 4.0);
    CHECK(nums[2].value == 2.0);
    CHECK(nums[0].begin == 0);
    CHECK(nums[0].end == 2);

    nums = extract_numbers("price 1,234.50 total");
    REQUIRE(nums.size() == 1);
    CHECK(nums[0].value == doctest::Approx(1234.5));
    CHECK(nums[0].raw == "1,234.50");

    // Malformed grouping is split at the comma.
    nums = extract_numbers("1,23");
    REQUIRE(nums.size() == 2);
    CHECK(nums[0].value == 1.0);
    CHECK(nums[1].value == 23.0);

    // Digits inside identifiers are not numbers.
    CHECK(extract_numbers("abc123 and x9").empty());

    // Signs only bind after a boundary.
    nums = extract_numbers("x=-5 and 3-4");
    REQUIRE(nums.size() == 3);
    CHECK(nums[0].value == -5.0);
    CHECK(nums[1].value == 3.0);
    CHECK(nums[2].value == 4.0);
}

TEST_CASE("tokenizer splits losslessly with attached whitespace") {
    CHECK(Tokenizer::split("A total of 252 matches") ==
          std::vector<std::string>{"A", " total", " of", " 252", " matches"});
    CHECK(Tokenizer::split(" [QA(x) -> 12]") ==
          std::vector<std::string>{" [", "QA", "(", "x", ")", " ->", " 12", "]"});
    CHECK(Tokenizer::split("a->b") == std::vector<std::string>{"a", "->", "b"});
    CHECK(Tokenizer::split("a ") == std::vector<std::string>{"a", " "});
    CHECK(Tokenizer::api_open_token() == " [");
    CHECK(Tokenizer::is_result_arrow(" ->"));
    CHECK(Tokenizer::is_result_arrow("->"));
    CHECK_FALSE(Tokenizer::is_result_arrow(" - >"));
    CHECK(Tokenizer::is_api_close(" ]"));
    CHECK(Tokenizer::is_api_close("]"));

    // Concatenation reproduces the input byte for byte.
    std::mt19937_64 rng(7);
    const std::string alphabet = " \t\nabzAZ09()[]->.,;\xc3\xa9\xe4\xb8\xad";
    for (int trial = 0; trial < 500; ++trial) {
        std::string text;
        size_t len = rng() % 40;
        for (size_t i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
        std::string joined;
        for (const auto& tok : Tokenizer::split(text)) joined += tok;
        CHECK(joined == text);
    }
}

TEST_CASE("tokenizer offsets point at token starts") {
    auto toks = Tokenizer::split_with_offsets("ab cd  ef");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0].offset == 0);
    CHECK(toks[1].offset == 2);
    CHECK(toks[1].text == " cd");
    CHECK(toks[2].offset == 5);
    CHECK(toks[2].text == "  ef");
}

TEST_CASE("tokenizer interning and frozen fallback") {
    Tokenizer tok;
    auto seq = tok.encode("hello world");
    CHECK(tok.decode(seq) == "hello world");
    CHECK(seq.tokenizer_id == tok.id());
    tok.freeze();
    CHECK(tok.frozen());
    // Unknown tokens split into single bytes after freezing.
    auto seq2 = tok.encode("hello unseen");
    CHECK(tok.decode(seq2) == "hello unseen");
}

TEST_CASE("call linearization round-trips through the parser") {
    ApiCall call{"QA", "Where was Ada born?"};
    CHECK(linearize(call) == " [QA(Where was Ada born?)]");
    CHECK(linearize_with_result(call, "London") == " [QA(Where was Ada born?) -> London]");
    CHECK(linearize_with_result(call, "") == " [QA(Where was Ada born?) -> ]");

    auto parsed = parse_call("QA(Where was Ada born?)");
    REQUIRE(parsed);
    CHECK(*parsed == call);

    parsed = parse_call("  Calculator( 1 + 1 )  ");
    REQUIRE(parsed);
    CHECK(parsed->tool == "Calculator");
    CHECK(parsed->input == "1 + 1");

    parsed = parse_call("QA(\"quoted input\")");
    REQUIRE(parsed);
    CHECK(parsed->input == "quoted input");

    parsed = parse_call("Calculator((1 + 2) * 3)");
    REQUIRE(parsed);
    CHECK(parsed->input == "(1 + 2) * 3");

    CHECK(parse_call("Calendar()")->input.empty());
    CHECK_FALSE(parse_call("NoParen"));
    CHECK_FALSE(parse_call(")("));
    CHECK_FALSE(parse_call("Bad Name(x)"));
    CHECK_FALSE(parse_call("QA(x) junk"));
    CHECK_FALSE(parse_call("(x)"));

    std::vector<std::string> registered = {"Calculator", "QA"};
    CHECK(parse_call("QA(x)", registered));
    CHECK_FALSE(parse_call("WikiSearch(x)", registered));
}

TEST_CASE("splice inserts rendered text before a token") {
    auto tokens = Tokenizer::split("The capital of France is Paris.");
    CHECK(splice(tokens, 5, " [QA(q) -> Paris]") ==
          "The capital of France is [QA(q) -> Paris] Paris.");
    CHECK(splice(tokens, 0, "X") == "XThe capital of France is Paris.");
    CHECK(splice(tokens, tokens.size(), "X") == "The capital of France is Paris.X");
    CHECK_THROWS_AS(splice(tokens, tokens.size() + 1, "X"), std::out_of_range);

    CHECK(splice_many(tokens, {{5, "A"}, {1, "B"}}) ==
          "TheB capital of France isA Paris.");
    CHECK_THROWS(splice_many(tokens, {{1, "A"}, {1, "B"}}));
}

TEST_CASE("record JSONL round-trips preserve every field") {
    Document doc{"d1", "some text", std::string("http://x/2017/03/09/p"), std::nullopt};
    CHECK(document_from_jsonl(to_jsonl(doc)).id == "d1");
    CHECK(*document_from_jsonl(to_jsonl(doc)).url == "http://x/2017/03/09/p");

    CandidateRecord cand{"d1", 4, {"QA", "why?"}, std::string("2017-03-09")};
    auto cand2 = candidate_from_jsonl(to_jsonl(cand));
    CHECK(cand2.doc_id == "d1");
    CHECK(cand2.position == 4);
    CHECK(cand2.call == cand.call);
    CHECK(*cand2.doc_date == "2017-03-09");

    ExecutedRecord ex{"d1", 4, {{"QA", "why?"}, std::string("because")}, std::nullopt};
    auto ex2 = executed_from_jsonl(to_jsonl(ex));
    CHECK(*ex2.executed.result == "because");

    ExecutedRecord none{"d1", 4, {{"QA", "why?"}, std::nullopt}, std::nullopt};
    CHECK_FALSE(executed_from_jsonl(to_jsonl(none)).executed.result.has_value());

    ScoredRecord sc{"d1", 4, {{"QA", "why?"}, std::string("because")}, 1.25, 2.5, 1.25};
    auto sc2 = scored_from_jsonl(to_jsonl(sc));
    CHECK(sc2.l_plus == doctest::Approx(1.25));
    CHECK(sc2.gain == doctest::Approx(1.25));

    AnnotatedExample ann;
    ann.doc_id = "d1";
    ann.text = "x [QA(q) -> r] y";
    ann.insertions.push_back({2, 1, "QA", "q", "r", 1.5});
    auto ann2 = annotated_from_jsonl(to_jsonl(ann));
    CHECK(ann2.text == ann.text);
    REQUIRE(ann2.insertions.size() == 1);
    CHECK(ann2.insertions[0].char_pos == 2);
    CHECK(ann2.insertions[0].result == "r");

    CHECK_THROWS(document_from_jsonl("{not json"));
}

TEST_CASE("serialization is deterministic") {
    ScoredRecord sc{"d1", 4, {{"QA", "why?"}, std::string("because")}, 1.25, 2.5, 1.25};
    CHECK(to_jsonl(sc) == to_jsonl(sc));
}

TEST_CASE("calendar fundamentals") {
    CHECK(days_from_civil(Date{1970, 1, 1}) == 0);
    CHECK(days_from_civil(Date{1970, 1, 2}) == 1);
    CHECK(days_from_civil(Date{1969, 12, 31}) == -1);
    CHECK(weekday_index(Date{2000, 1, 1}) == 6);  // Saturday
    CHECK(weekday_index(Date{1970, 1, 1}) == 4);  // Thursday
    CHECK(weekday_name(Date{2020, 11, 20}) == "Friday");

    CHECK(is_leap_year(2000));
    CHECK_FALSE(is_leap_year(1900));
    CHECK(is_leap_year(2024));
    CHECK(days_in_month(2020, 2) == 29);
    CHECK(days_in_month(2021, 2) == 28);

    // Round trip across a wide range.
    for (int64_t d = -200000; d <= 200000; d += 997)
        CHECK(days_from_civil(civil_from_days(d)) == d);
}

TEST_CASE("calendar arithmetic clamps month ends") {
    CHECK(add_days(Date{2020, 2, 28}, 1) == Date{2020, 2, 29});
    CHECK(add_days(Date{2020, 1, 1}, -1) == Date{2019, 12, 31});
    CHECK(add_months_clamped(Date{2020, 1, 31}, 1) == Date{2020, 2, 29});
    CHECK(add_months_clamped(Date{2019, 1, 31}, 1) == Date{2019, 2, 28});
    CHECK(add_months_clamped(Date{2020, 3, 31}, -1) == Date{2020, 2, 29});
    CHECK(add_months_clamped(Date{2020, 6, 15}, -18) == Date{2018, 12, 15});
    CHECK(add_years_clamped(Date{2020, 2, 29}, 1) == Date{2021, 2, 28});
    CHECK(add_years_clamped(Date{2020, 2, 29}, 4) == Date{2024, 2, 29});

    CHECK(whole_month_diff(Date{2020, 1, 15}, Date{2020, 3, 14}) == 1);
    CHECK(whole_month_diff(Date{2020, 1, 15}, Date{2020, 3, 15}) == 2);
    CHECK(whole_month_diff(Date{2020, 1, 31}, Date{2020, 2, 28}) == 0);
    CHECK(whole_year_diff(Date{2000, 6, 15}, Date{2010, 6, 14}) == 9);
    CHECK(whole_year_diff(Date{2000, 6, 15}, Date{2010, 6, 15}) == 10);
}

TEST_CASE("date parsing and rendering") {
    auto d = Date::from_iso("2017-03-09");
    REQUIRE(d);
    CHECK(*d == Date{2017, 3, 9});
    CHECK(d->iso() == "2017-03-09");
    CHECK_FALSE(Date::from_iso("2017-13-01"));
    CHECK_FALSE(Date::from_iso("2017-02-30"));
    CHECK_FALSE(Date::from_iso("2017-3-9"));
    CHECK(long_date(Date{2023, 1, 30}) == "January 30, 2023");
    CHECK(calendar_line(Date{2023, 1, 30}) == "Today is Monday, January 30, 2023.");
    CHECK(month_name(11) == "November");
}
