#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "toolweave/lm.hpp"
#include "toolweave/types.hpp"
#include "toolweave/util.hpp"

namespace toolweave {

// Linearly decaying loss weights: w_t proportional to max(0, 1 - decay*t),
// normalized to sum exactly 1 over the finite support. Kept in exact
// rationals so the normalization is not a float approximation.
struct WeightScheme {
    Fraction decay{1, 5};

    std::vector<Fraction> weights() const;
    std::vector<double> weight_values() const;
};

struct FilterConfig {
    double default_min_gain = 1.0;                 // loss reduction threshold
    std::map<std::string, double> min_gain_per_tool;
    size_t example_cap = 25000;                    // kept calls per tool

    double min_gain(const std::string& tool) const;
};

// Weighted cross-entropy over the suffix starting at `position`, with
// `prefix` prepended before the whole document. Tokens beyond the weight
// support contribute nothing; an empty suffix scores 0.
double weighted_loss(const LmInterface& lm, const std::vector<std::string>& prefix,
                     const std::vector<std::string>& doc_tokens, size_t position,
                     const WeightScheme& scheme);

// Computes the with-result loss (call+result as prefix), the better of the
// no-call and result-free losses, and their difference. `loss_empty` may
// carry a precomputed no-prefix loss for this (document, position).
ScoredRecord score_call(const LmInterface& lm, const std::string& doc_id,
                        const std::vector<std::string>& doc_tokens,
                        const ExecutedCall& executed, size_t position,
                        const WeightScheme& scheme, const double* loss_empty = nullptr);

// Keeps calls whose gain meets the tool's threshold, resolves same-position
// collisions (larger gain wins; ties by tool then input), and sorts by
// (doc_id, position).
std::vector<ScoredRecord> filter_calls(std::vector<ScoredRecord> scored,
                                       const FilterConfig& cfg);

// Kept-call counts per tool at the three reporting thresholds.
struct DatasetStats {
    static constexpr std::array<double, 3> kReportThresholds = {0.5, 1.0, 2.0};

    std::map<std::string, std::array<size_t, 3>> kept_at_threshold;
    std::map<std::string, size_t> kept_calls;    // at the configured threshold
    std::map<std::string, size_t> capped_calls;  // after the per-tool cap
    size_t annotated_examples = 0;
    size_t input_documents = 0;

    std::string table() const;
    std::string to_json() const;
};

// Applies the per-tool cap (highest gain first) to already-filtered calls,
// splices them into their documents, and reports stats. `scored` is the full
// pre-threshold scoring output, used for the threshold table.
std::vector<AnnotatedExample> build_dataset(const std::vector<Document>& docs,
                                            const std::vector<ScoredRecord>& scored,
                                            const FilterConfig& cfg, DatasetStats* stats);

}  // namespace toolweave
