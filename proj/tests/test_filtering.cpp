#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "toolweave/calls.hpp"
#include "toolweave/filtering.hpp"
#include "toolweave/ngram_lm.hpp"
#include "toolweave/scripted_lm.hpp"
#include "toolweave/tokenizer.hpp"

using namespace toolweave;

namespace {

// Cross-check: the same weighted cross-entropy, but with every probability
// looked up by scanning the full next-token distribution.
double naive_weighted_loss(const LmInterface& lm, const std::vector<std::string>& prefix,
                           const std::vector<std::string>& doc, size_t pos,
                           const WeightScheme& scheme) {
    auto w = scheme.weight_values();
    double loss = 0.0;
    for (size_t t = 0; pos + t < doc.size() && t < w.size(); ++t) {
        std::vector<std::string> ctx = prefix;
        ctx.insert(ctx.end(), doc.begin(), doc.begin() + pos + t);
        double p = 0.0, unk = 0.0;
        for (const auto& tp : lm.next_distribution(ctx)) {
            if (tp.token == doc[pos + t]) p = tp.prob;
            if (tp.token == "<unk>") unk = tp.prob;
        }
        if (p == 0.0) p = unk;  // out-of-vocabulary tokens score as the unknown class
        loss += w[t] * -std::log(p);
    }
    return loss;
}

ScoredRecord record(std::string doc, size_t pos, std::string tool, std::string input,
                    double gain) {
    ScoredRecord r;
    r.doc_id = std::move(doc);
    r.position = pos;
    r.executed = {{std::move(tool), std::move(input)}, std::string("res")};
    r.l_plus = 1.0;
    r.l_minus = 1.0 + gain;
    r.gain = gain;
    return r;
}

}  // namespace

TEST_CASE("weight scheme normalizes exactly in rationals") {
    WeightScheme scheme;  // default decay 1/5
    auto w = scheme.weights();
    REQUIRE(w.size() == 5);
    CHECK(w[0] == Fraction(1, 3));
    CHECK(w[1] == Fraction(4, 15));
    CHECK(w[2] == Fraction(1, 5));
    CHECK(w[3] == Fraction(2, 15));
    CHECK(w[4] == Fraction(1, 15));
    Fraction sum(0, 1);
    for (const auto& f : w) sum = sum + f;
    CHECK(sum == Fraction(1, 1));

    WeightScheme steep{Fraction(1, 3)};
    auto v = steep.weights();
    REQUIRE(v.size() == 3);
    CHECK(v[0] == Fraction(1, 2));
    CHECK(v[1] == Fraction(1, 3));
    CHECK(v[2] == Fraction(1, 6));

    WeightScheme point{Fraction(1, 1)};
    REQUIRE(point.weights().size() == 1);
    CHECK(point.weights()[0] == Fraction(1, 1));

    auto dv = scheme.weight_values();
    REQUIRE(dv.size() == 5);
    CHECK(dv[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(dv[4] == doctest::Approx(1.0 / 15.0).epsilon(1e-15));
}

TEST_CASE("weighted loss on a uniform model") {
    // Four fallback tokens, no rules: every conditional is 1/4.
    ScriptedLm lm({" a", " b", " c", " d"});
    std::vector<std::string> doc = {" a", " b", " c", " d"};
    WeightScheme scheme;

    // Weights 1/3..1/15 over four tokens: (1/3+4/15+1/5+2/15) * log 4.
    double expect = (14.0 / 15.0) * std::log(4.0);
    CHECK(weighted_loss(lm, {}, doc, 0, scheme) == doctest::Approx(expect).epsilon(1e-12));

    // With five or more tokens the full weight mass applies and the loss
    // saturates at exactly log 4.
    std::vector<std::string> longdoc = {" a", " b", " c", " d", " a", " b", " c", " d"};
    CHECK(weighted_loss(lm, {}, longdoc, 0, scheme) == doctest::Approx(std::log(4.0)));
    CHECK(weighted_loss(lm, {}, longdoc, 3, scheme) == doctest::Approx(std::log(4.0)));

    // Empty suffix scores zero; past-the-end positions are a caller bug.
    CHECK(weighted_loss(lm, {}, doc, doc.size(), scheme) == 0.0);
    CHECK_THROWS_AS(weighted_loss(lm, {}, doc, doc.size() + 1, scheme), std::out_of_range);
}

TEST_CASE("weighted loss agrees with a naive rescan") {
    ReferenceNgramLm lm(3);
    lm.train(Tokenizer::split("the cat sat on the mat and the cat ran off"));
    auto doc = Tokenizer::split("the cat sat on the mat again");
    auto prefix = Tokenizer::split(" [QA(where) -> mat]");
    WeightScheme scheme;
    for (size_t pos = 0; pos <= doc.size(); ++pos) {
        double got = weighted_loss(lm, prefix, doc, pos, scheme);
        double want = naive_weighted_loss(lm, prefix, doc, pos, scheme);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("score_call compares result, empty-result, and no-call prefixes") {
    // One-token document; only w0 = 1/3 is exercised, so the three branch
    // losses are (1/3) * -log p under three scripted contexts.
    std::vector<std::string> doc = {" x"};
    ExecutedCall executed{{"QA", "q"}, std::string("r")};

    ScriptedLm lm({" x", " y", " z", " w"});
    lm.add_rule("r]", {{" x", 0.5}, {" y", 0.5}});    // result prefix
    lm.add_rule("> ]", {{" x", 0.125}, {" y", 0.875}});  // call without result
    // No rule for the bare document: uniform 1/4.

    WeightScheme scheme;
    auto rec = score_call(lm, "doc", doc, executed, 0, scheme);
    const double third = 1.0 / 3.0;
    CHECK(rec.l_plus == doctest::Approx(third * std::log(2.0)));
    // The empty-result prefix (p=1/8) is worse than no call (p=1/4), so the
    // comparison loss is the no-call one.
    CHECK(rec.l_minus == doctest::Approx(third * std::log(4.0)));
    CHECK(rec.gain == doctest::Approx(third * std::log(2.0)));
    CHECK(rec.doc_id == "doc");
    CHECK(rec.executed.call == executed.call);

    // Flip the branch: make the result-free call the better baseline.
    ScriptedLm lm2({" x", " y", " z", " w"});
    lm2.add_rule("r]", {{" x", 0.5}, {" y", 0.5}});
    lm2.add_rule("> ]", {{" x", 0.9}, {" y", 0.1}});
    auto rec2 = score_call(lm2, "doc", doc, executed, 0, scheme);
    CHECK(rec2.l_minus == doctest::Approx(third * -std::log(0.9)));
    CHECK(rec2.gain < 0.0);  // result distracts relative to the bare call
}

TEST_CASE("score_call treats a missing result as the empty string") {
    std::vector<std::string> doc = {" x"};
    ExecutedCall failed{{"QA", "q"}, std::nullopt};
    ScriptedLm lm({" x", " y"});
    lm.add_rule("> ]", {{" x", 0.75}, {" y", 0.25}});

    WeightScheme scheme;
    auto rec = score_call(lm, "doc", doc, failed, 0, scheme);
    // With no result the with-result and result-free prefixes coincide, so
    // the gain can never be positive.
    CHECK(rec.l_plus == doctest::Approx((1.0 / 3.0) * -std::log(0.75)));
    CHECK(rec.l_minus <= rec.l_plus + 1e-12);
    CHECK(rec.gain <= 0.0);
}

TEST_CASE("score_call honours a precomputed no-prefix loss") {
    ReferenceNgramLm lm(3);
    lm.train(Tokenizer::split("alpha beta gamma alpha beta delta"));
    auto doc = Tokenizer::split("alpha beta gamma");
    ExecutedCall executed{{"QA", "q"}, std::string("beta")};
    WeightScheme scheme;

    auto plain = score_call(lm, "d", doc, executed, 1, scheme);
    double l_none = weighted_loss(lm, {}, doc, 1, scheme);
    auto seeded = score_call(lm, "d", doc, executed, 1, scheme, &l_none);
    CHECK(seeded.l_plus == plain.l_plus);
    CHECK(seeded.l_minus == plain.l_minus);
    CHECK(seeded.gain == plain.gain);
}

TEST_CASE("filter_calls applies per-tool thresholds inclusively") {
    FilterConfig cfg;
    cfg.default_min_gain = 1.0;
    cfg.min_gain_per_tool = {{"QA", 0.25}};
    CHECK(cfg.min_gain("QA") == 0.25);
    CHECK(cfg.min_gain("Calculator") == 1.0);

    std::vector<ScoredRecord> scored;
    scored.push_back(record("d1", 0, "QA", "a", 0.30));          // above QA threshold
    scored.push_back(record("d1", 2, "QA", "b", 0.25));          // exactly at it
    scored.push_back(record("d1", 4, "QA", "c", 0.24));          // just below
    scored.push_back(record("d2", 0, "Calculator", "1+1", 0.90));  // below default
    scored.push_back(record("d2", 2, "Calculator", "2+2", 1.00));  // at default

    auto kept = filter_calls(std::move(scored), cfg);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].doc_id == "d1");
    CHECK(kept[0].position == 0);
    CHECK(kept[1].position == 2);
    CHECK(kept[2].doc_id == "d2");
    CHECK(kept[2].position == 2);
}

TEST_CASE("filter_calls resolves same-position collisions after thresholding") {
    FilterConfig cfg;
    cfg.default_min_gain = 1.0;
    cfg.min_gain_per_tool = {{"QA", 0.25}};

    // The Calculator call has the larger gain but misses its own threshold;
    // it must not shadow the passing QA call at the same position.
    std::vector<ScoredRecord> scored;
    scored.push_back(record("d", 3, "Calculator", "2*2", 0.90));
    scored.push_back(record("d", 3, "QA", "a", 0.30));
    auto kept = filter_calls(scored, cfg);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].executed.call.tool == "QA");

    // Among passing calls the larger gain wins, then tool, then input.
    scored.clear();
    scored.push_back(record("d", 3, "QA", "low", 0.40));
    scored.push_back(record("d", 3, "QA", "high", 0.80));
    kept = filter_calls(scored, cfg);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].executed.call.input == "high");

    scored.clear();
    scored.push_back(record("d", 3, "WikiSearch", "t", 2.0));
    scored.push_back(record("d", 3, "QA", "t", 2.0));
    kept = filter_calls(scored, cfg);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].executed.call.tool == "QA");

    scored.clear();
    scored.push_back(record("d", 3, "QA", "bb", 2.0));
    scored.push_back(record("d", 3, "QA", "aa", 2.0));
    kept = filter_calls(scored, cfg);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].executed.call.input == "aa");
}

TEST_CASE("filter_calls output is sorted by document then position") {
    FilterConfig cfg;
    cfg.default_min_gain = 0.0;
    std::vector<ScoredRecord> scored;
    scored.push_back(record("z", 5, "QA", "a", 1.0));
    scored.push_back(record("a", 9, "QA", "b", 1.0));
    scored.push_back(record("a", 1, "QA", "c", 1.0));
    auto kept = filter_calls(scored, cfg);
    REQUIRE(kept.size() == 3);
    CHECK(kept[0].doc_id == "a");
    CHECK(kept[0].position == 1);
    CHECK(kept[1].position == 9);
    CHECK(kept[2].doc_id == "z");
}

TEST_CASE("build_dataset splices kept calls back into their documents") {
    std::vector<Document> docs = {{"d1", "Paris is big.", {}, {}},
                                  {"d2", "No call here.", {}, {}}};

    ScoredRecord r = record("d1", 1, "QA", "capital", 2.0);
    r.executed.result = "a city";

    FilterConfig cfg;
    cfg.default_min_gain = 0.5;
    DatasetStats stats;
    auto examples = build_dataset(docs, {r}, cfg, &stats);

    REQUIRE(examples.size() == 1);  // d2 kept nothing and is dropped
    CHECK(examples[0].doc_id == "d1");
    CHECK(examples[0].text == "Paris [QA(capital) -> a city] is big.");
    REQUIRE(examples[0].insertions.size() == 1);
    const auto& ins = examples[0].insertions[0];
    CHECK(ins.token_pos == 1);
    CHECK(ins.char_pos == 5);  // byte offset of " is"
    CHECK(ins.tool == "QA");
    CHECK(ins.input == "capital");
    CHECK(ins.result == "a city");
    CHECK(ins.gain == doctest::Approx(2.0));

    CHECK(stats.input_documents == 2);
    CHECK(stats.annotated_examples == 1);
}

TEST_CASE("build_dataset appends a call at the end-of-document position") {
    std::vector<Document> docs = {{"d", "One two", {}, {}}};
    ScoredRecord r = record("d", 2, "Calculator", "1 + 1", 1.5);
    r.executed.result = "2";
    FilterConfig cfg;
    cfg.default_min_gain = 0.5;
    DatasetStats stats;
    auto examples = build_dataset(docs, {r}, cfg, &stats);
    REQUIRE(examples.size() == 1);
    CHECK(examples[0].text == "One two [Calculator(1 + 1) -> 2]");
    CHECK(examples[0].insertions[0].char_pos == 7);
}

TEST_CASE("build_dataset caps per tool by gain and reports thresholds") {
    std::vector<Document> docs = {{"d1", "a b", {}, {}},
                                  {"d2", "c d", {}, {}},
                                  {"d3", "e f", {}, {}}};
    std::vector<ScoredRecord> scored = {record("d1", 0, "QA", "x", 3.0),
                                        record("d2", 0, "QA", "y", 2.0),
                                        record("d3", 0, "QA", "z", 1.5)};

    FilterConfig cfg;
    cfg.default_min_gain = 0.5;
    cfg.example_cap = 2;
    DatasetStats stats;
    auto examples = build_dataset(docs, scored, cfg, &stats);

    // The raw threshold table counts every scored record.
    REQUIRE(stats.kept_at_threshold.count("QA"));
    CHECK(stats.kept_at_threshold["QA"][0] == 3);  // gain >= 0.5
    CHECK(stats.kept_at_threshold["QA"][1] == 3);  // gain >= 1.0
    CHECK(stats.kept_at_threshold["QA"][2] == 2);  // gain >= 2.0
    CHECK(stats.kept_calls["QA"] == 3);
    CHECK(stats.capped_calls["QA"] == 2);

    // The cap keeps the two largest gains; d3 loses its only call.
    REQUIRE(examples.size() == 2);
    CHECK(examples[0].doc_id == "d1");
    CHECK(examples[1].doc_id == "d2");
    CHECK(stats.annotated_examples == 2);
    CHECK(stats.input_documents == 3);

    auto table = stats.table();
    CHECK(table.find("QA") != std::string::npos);
    CHECK(table.find("documents in: 3, annotated examples: 2") != std::string::npos);
    auto json = stats.to_json();
    CHECK(json.find("\"kept_at_0.5\": 3") != std::string::npos);
    CHECK(json.find("\"after_cap\": 2") != std::string::npos);
}
