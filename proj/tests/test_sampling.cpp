#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "toolweave/langid.hpp"
#include "toolweave/sampling.hpp"
#include "toolweave/scripted_lm.hpp"
#include "toolweave/tokenizer.hpp"

using namespace toolweave;

namespace {

const ToolPrompt kTestPrompt{"QA", "Do it.\nInput: x\nOutput:"};

SamplingConfig config(double threshold, size_t k, size_t m = 5) {
    SamplingConfig cfg;
    cfg.api_prob_threshold = threshold;
    cfg.max_positions = k;
    cfg.calls_per_position = m;
    return cfg;
}

}  // namespace

TEST_CASE("make_context tokenizes prompt and document compatibly") {
    for (const char* doc : {"a b c", " leading space", "Joe Biden was born in Scranton."}) {
        auto ctx = make_context(kTestPrompt, doc);
        std::string prompt_text;
        for (const auto& t : ctx.prompt_tokens) prompt_text += t;
        CHECK(prompt_text == kTestPrompt.instantiate(doc));
        std::string doc_text;
        for (const auto& t : ctx.doc_tokens) doc_text += t;
        CHECK(doc_text == doc);

        // Scoring concatenates the two token streams; that must equal
        // tokenizing the concatenated text (no cross-boundary merge).
        auto joined = Tokenizer::split(kTestPrompt.instantiate(doc) + doc);
        std::vector<std::string> stitched = ctx.prompt_tokens;
        stitched.insert(stitched.end(), ctx.doc_tokens.begin(), ctx.doc_tokens.end());
        CHECK(joined == stitched);
    }
}

TEST_CASE("sample_positions keeps positions above the threshold") {
    // Doc "a b c": candidate positions 0,1,2 with scripted p(" [") of
    // 0.30 / 0.10 / 0.20.
    ScriptedLm lm({" a", " other"});
    lm.add_rule("Output:", {{" [", 0.30}});
    lm.add_rule("Output:a", {{" [", 0.10}});
    lm.add_rule("Output:a b", {{" [", 0.20}});

    auto ctx = make_context(kTestPrompt, "a b c");
    auto all = sample_positions(lm, ctx, config(0.05, 5));
    REQUIRE(all.size() == 3);
    CHECK(all[0].position == 0);
    CHECK(all[0].prob == doctest::Approx(0.30));
    CHECK(all[2].prob == doctest::Approx(0.20));

    auto some = sample_positions(lm, ctx, config(0.15, 5));
    REQUIRE(some.size() == 2);
    CHECK(some[0].position == 0);
    CHECK(some[1].position == 2);

    // Top-k truncation keeps the most probable, re-sorted by position.
    auto topk = sample_positions(lm, ctx, config(0.05, 2));
    REQUIRE(topk.size() == 2);
    CHECK(topk[0].position == 0);
    CHECK(topk[1].position == 2);

    // The threshold is strict: p == threshold does not qualify.
    CHECK(sample_positions(lm, ctx, config(0.25, 5)).size() == 1);
    CHECK(sample_positions(lm, ctx, config(0.30, 5)).empty());
    CHECK(sample_positions(lm, ctx, config(0.35, 5)).empty());
}

TEST_CASE("sample_positions breaks probability ties toward earlier positions") {
    ScriptedLm lm({" a"});
    lm.add_rule("Output:", {{" [", 0.20}});
    lm.add_rule("Output:a", {{" [", 0.20}});
    lm.add_rule("Output:a b", {{" [", 0.30}});

    auto ctx = make_context(kTestPrompt, "a b c");
    auto top2 = sample_positions(lm, ctx, config(0.05, 2));
    REQUIRE(top2.size() == 2);
    CHECK(top2[0].position == 0);  // the 0.20 tie resolves to the earlier position
    CHECK(top2[1].position == 2);
}

TEST_CASE("sample_calls parses, filters by tool, and deduplicates") {
    ScriptedLm lm({" pad"});
    lm.add_rule(" [", {{"QA", 1.0}});
    lm.add_rule("QA", {{"(", 1.0}});
    lm.add_rule("(", {{"Paris", 1.0}});
    lm.add_rule("Paris", {{")", 1.0}});
    lm.add_rule(")", {{"]", 1.0}});

    auto ctx = make_context(kTestPrompt, "a b c");
    SamplingConfig cfg = config(0.0, 5, 3);
    cfg.temperature = 0.0;

    Rng rng(7);
    auto calls = sample_calls(lm, ctx, 2, "QA", cfg, rng);
    REQUIRE(calls.size() == 1);  // three identical samples collapse to one
    CHECK(calls[0] == ApiCall{"QA", "Paris"});

    Rng rng2(7);
    CHECK(sample_calls(lm, ctx, 2, "Calculator", cfg, rng2).empty());
}

TEST_CASE("sample_calls discards unterminated continuations") {
    ScriptedLm lm;
    lm.add_rule("", {{" on", 1.0}});  // never closes the call
    auto ctx = make_context(kTestPrompt, "a b c");
    SamplingConfig cfg = config(0.0, 5, 3);
    cfg.max_call_len = 6;
    Rng rng(7);
    CHECK(sample_calls(lm, ctx, 0, "QA", cfg, rng).empty());
}

TEST_CASE("calculator gate: arithmetic triple within a 100-token window") {
    Document doc{"d", "The 23 students and 19 teachers make 42 people.", {}, {}};
    CHECK(prefilter(doc, "Calculator", 42).keep);

    Document prod{"d", "6 boxes of 7 gives 42 items", {}, {}};
    CHECK(prefilter(prod, "Calculator", 42).keep);

    Document div{"d", "100 split 4 ways is 25 each", {}, {}};
    CHECK(prefilter(div, "Calculator", 42).keep);

    // Same numbers, but the first is pushed out of the 100-token window, and
    // the document id is chosen to lose the 1% lottery.
    std::string filler;
    for (int i = 0; i < 105; ++i) filler += " pad";
    std::string kept_id, dropped_id;
    for (int i = 0; i < 4000 && (kept_id.empty() || dropped_id.empty()); ++i) {
        std::string id = "probe-" + std::to_string(i);
        Document probe{id, "9 31 77", {}, {}};  // three unrelated numbers
        (prefilter(probe, "Calculator", 42).keep ? kept_id : dropped_id) = id;
    }
    REQUIRE_FALSE(kept_id.empty());     // the lottery admits about 1%
    REQUIRE_FALSE(dropped_id.empty());  // and rejects the rest

    Document split{dropped_id, "23" + filler + " 19 and 42 people", {}, {}};
    CHECK_FALSE(prefilter(split, "Calculator", 42).keep);
    Document close{dropped_id, "23 19 and 42 people", {}, {}};
    CHECK(prefilter(close, "Calculator", 42).keep);
}

TEST_CASE("calculator gate: equality markers need a following number") {
    CHECK(prefilter({"d", "the total of 23 things", {}, {}}, "Calculator", 42).keep);
    CHECK(prefilter({"d", "an average of 7", {}, {}}, "Calculator", 42).keep);
    CHECK(prefilter({"d", "x = 5", {}, {}}, "Calculator", 42).keep);
    CHECK(prefilter({"d", "that EQUALS 9 here", {}, {}}, "Calculator", 42).keep);
    CHECK(prefilter({"d", "equal to 7 apples", {}, {}}, "Calculator", 42).keep);

    // Marker inside a larger word does not count.
    CHECK_FALSE(prefilter({"d", "subtotal of 99", {}, {}}, "Calculator", 42).keep);
    // Marker not followed by a number.
    CHECK_FALSE(prefilter({"d", "the total of things was 1 only", {}, {}}, "Calculator", 42).keep);
    // No numbers at all.
    CHECK_FALSE(prefilter({"d", "totally equal opinions", {}, {}}, "Calculator", 42).keep);
}

TEST_CASE("calculator lottery is deterministic and roughly one percent") {
    size_t kept = 0;
    const size_t n = 3000;
    for (size_t i = 0; i < n; ++i) {
        Document doc{"lot-" + std::to_string(i), "9 31 77", {}, {}};
        if (prefilter(doc, "Calculator", 42).keep) ++kept;
    }
    CHECK(kept > 5);
    CHECK(kept < 90);
    // Same seed, same verdicts.
    size_t again = 0;
    for (size_t i = 0; i < n; ++i) {
        Document doc{"lot-" + std::to_string(i), "9 31 77", {}, {}};
        if (prefilter(doc, "Calculator", 42).keep) ++again;
    }
    CHECK(again == kept);
}

TEST_CASE("calendar gate extracts a date from the document URL") {
    Document doc{"d", "text", std::string("https://blog.example.com/2017/03/09/post.html"), {}};
    auto res = prefilter(doc, "Calendar", 42);
    CHECK(res.keep);
    REQUIRE(res.doc_date);
    CHECK(*res.doc_date == Date{2017, 3, 9});

    Document nodate{"d", "text", std::string("https://example.com/about"), {}};
    CHECK_FALSE(prefilter(nodate, "Calendar", 42).keep);
    Document nourl{"d", "text", {}, {}};
    CHECK_FALSE(prefilter(nourl, "Calendar", 42).keep);
}

TEST_CASE("date_from_url handles separators and rejects malformed dates") {
    CHECK(date_from_url("/2017/03/09/") == Date{2017, 3, 9});
    CHECK(date_from_url("x/2017-3-9b") == Date{2017, 3, 9});
    CHECK(date_from_url("a_2019_12_31_z") == Date{2019, 12, 31});
    CHECK(date_from_url("v2020.06.01") == Date{2020, 6, 1});
    CHECK_FALSE(date_from_url("/2017-03-091/"));   // trailing digit
    CHECK_FALSE(date_from_url("/2017-13-01/"));    // no such month
    CHECK_FALSE(date_from_url("/1899-05-05/"));    // before the window
    CHECK_FALSE(date_from_url("/20170309/"));      // no separators
    CHECK_FALSE(date_from_url("/2017-03/09/"));    // mixed separators
    CHECK(date_from_url("/2001/01/02/ or /2002/02/03/") == Date{2001, 1, 2});
}

TEST_CASE("MT gate wants a confident foreign chunk between English ones") {
    auto langid = TrigramLangId::without_builtin();
    langid.add_language("en", "the quick brown fox jumps over the lazy dog and then "
                              "the small black cat walks along the garden wall again");
    langid.add_language("fr", "le renard brun rapide saute par dessus le chien paresseux "
                              "puis le petit chat noir marche le long du mur du jardin");

    const std::string en10 = "the quick brown fox jumps over the lazy dog again";
    const std::string fr10 = "le renard brun saute par dessus le chien paresseux encore";
    REQUIRE(Tokenizer::split(en10).size() == 10);
    REQUIRE(Tokenizer::split(fr10).size() == 10);

    Document mixed{"d", en10 + " " + fr10 + " " + en10, {}, {}};
    auto res = prefilter(mixed, "MT", 42, &langid);
    CHECK(res.keep);
    REQUIRE(res.foreign_chunks.size() == 1);
    CHECK(res.foreign_chunks[0].first == 10);
    CHECK(res.foreign_chunks[0].second == 20);

    Document allen{"d", en10 + " " + en10 + " " + en10, {}, {}};
    CHECK_FALSE(prefilter(allen, "MT", 42, &langid).keep);

    // A foreign start has no English left neighbour; only middle chunks count.
    Document frfirst{"d", fr10 + " " + en10 + " " + en10, {}, {}};
    CHECK_FALSE(prefilter(frfirst, "MT", 42, &langid).keep);

    // Fewer than three chunks can never sandwich a foreign one.
    Document shortdoc{"d", en10 + " " + fr10, {}, {}};
    CHECK_FALSE(prefilter(shortdoc, "MT", 42, &langid).keep);

    CHECK_THROWS_AS(prefilter(mixed, "MT", 42, nullptr), std::invalid_argument);
}

TEST_CASE("QA and WikiSearch pass every document") {
    Document doc{"d", "anything at all", {}, {}};
    CHECK(prefilter(doc, "QA", 42).keep);
    CHECK(prefilter(doc, "WikiSearch", 42).keep);
}

TEST_CASE("MT hindsight rule keeps only already-visible inputs") {
    auto tokens = Tokenizer::split("alpha bonjour beta gamma bonjour delta");
    // Input seen before the call position: keep.
    CHECK(mt_postfilter(tokens, {"MT", "bonjour"}, 2));
    // Input only visible later: the call peeks ahead; drop.
    CHECK_FALSE(mt_postfilter(tokens, {"MT", "bonjour"}, 1));
    // Input absent from the document: keep.
    CHECK(mt_postfilter(tokens, {"MT", "zebra"}, 0));
    // Multi-token inputs compare against the detokenized halves.
    CHECK(mt_postfilter(tokens, {"MT", "beta gamma"}, 4));
    CHECK_FALSE(mt_postfilter(tokens, {"MT", "beta gamma"}, 2));
    // Splitting the phrase across the call position leaves it in neither half.
    CHECK(mt_postfilter(tokens, {"MT", "beta gamma"}, 3));
}
