#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "toolweave/calculator.hpp"
#include "toolweave/filtering.hpp"
#include "toolweave/ngram_lm.hpp"
#include "toolweave/search.hpp"
#include "toolweave/tokenizer.hpp"
#include "toolweave/util.hpp"

using namespace toolweave;

namespace {

std::string synthetic_text(uint64_t seed, size_t words) {
    const char* pool[16] = {"alpha", "beta",  "gamma", "delta", "epsilon", "zeta", "eta", "theta",
                            "iota",  "kappa", "lambda", "mu",   "nu",      "xi",   "pi",  "rho"};
    Rng rng(seed);
    std::string text;
    for (size_t i = 0; i < words; ++i) {
        if (i) text += ' ';
        text += pool[rng.uniform_index(16)];
    }
    return text;
}

void bm_tokenizer_split(benchmark::State& state) {
    const std::string text = synthetic_text(1, 2000);
    for (auto _ : state) {
        auto toks = Tokenizer::split(text);
        benchmark::DoNotOptimize(toks);
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(bm_tokenizer_split);

void bm_calc_eval(benchmark::State& state) {
    const char* exprs[4] = {"27 + 4 * 2", "735 / 499", "18 / 12 / 3 + 17 * 9 - 3",
                            "1,000 + 2,500 / 4"};
    size_t i = 0;
    for (auto _ : state) {
        auto r = calc_eval(exprs[i++ & 3]);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(bm_calc_eval);

void bm_weighted_loss(benchmark::State& state) {
    static const ReferenceNgramLm* lm = [] {
        auto* m = new ReferenceNgramLm(3);
        for (uint64_t d = 0; d < 50; ++d) m->train(Tokenizer::split(synthetic_text(d, 200)));
        return m;
    }();
    const auto doc = Tokenizer::split(synthetic_text(99, 200));
    const auto prefix = Tokenizer::split(" [QA(alpha) -> beta]");
    const WeightScheme scheme;
    size_t pos = 0;
    for (auto _ : state) {
        double loss = weighted_loss(*lm, prefix, doc, pos, scheme);
        benchmark::DoNotOptimize(loss);
        pos = (pos + 17) % doc.size();
    }
}
BENCHMARK(bm_weighted_loss);

void bm_bm25_top1(benchmark::State& state) {
    static const SearchIndex* index = [] {
        std::vector<WikiPage> pages;
        for (int p = 0; p < 200; ++p) {
            WikiPage page;
            page.id = "p" + std::to_string(p);
            page.title = "Page " + std::to_string(p);
            for (int s = 0; s < 5; ++s)
                page.sections.push_back(
                    {s ? "h" + std::to_string(s) : "",
                     synthetic_text(static_cast<uint64_t>(p * 5 + s), 120)});
            pages.push_back(std::move(page));
        }
        return new SearchIndex(SearchIndex::build(pages));
    }();
    const std::vector<std::vector<std::string>> queries = {
        {"alpha"}, {"kappa", "mu"}, {"zeta", "pi", "rho"}, {"missingterm", "beta"}};
    size_t i = 0;
    for (auto _ : state) {
        auto hit = index->top1(queries[i++ & 3]);
        benchmark::DoNotOptimize(hit);
    }
}
BENCHMARK(bm_bm25_top1);

}  // namespace

BENCHMARK_MAIN();
