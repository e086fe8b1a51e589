#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "toolweave/util.hpp"

namespace toolweave {

struct TokenProb {
    std::string token;
    double prob = 0.0;
};

// Scoring/sampling contract every language model must satisfy. Contexts and
// tokens are token strings of the model's tokenizer; implementations must be
// deterministic and safe for concurrent read-only use.
class LmInterface {
public:
    virtual ~LmInterface() = default;

    virtual std::string tokenizer_id() const = 0;

    // Proper distribution over the next token (sums to 1 ± 1e-9). Entries
    // sorted by token string ascending.
    virtual std::vector<TokenProb> next_distribution(
        const std::vector<std::string>& context) const = 0;

    // Mass of one specific token; default scans next_distribution.
    // Implementations may override with a direct lookup.
    virtual double token_prob(const std::vector<std::string>& context,
                              std::string_view token) const;
};

using LmPtr = std::shared_ptr<const LmInterface>;

// Probability the model assigns to starting an API call, i.e. the mass of
// the " [" token as the next token.
double api_token_prob(const LmInterface& lm, const std::vector<std::string>& context);
double api_token_prob(const LmInterface& lm, std::string_view prefix_text);

// One log-probability per suffix token, conditioned on context + preceding
// suffix tokens.
std::vector<double> score_suffix(const LmInterface& lm,
                                 std::vector<std::string> context,
                                 const std::vector<std::string>& suffix);

// Rescales by p^(1/temperature) and renormalizes; temperature 0 collapses
// onto the argmax. Result sorted by (prob desc, token asc).
std::vector<TokenProb> apply_temperature(std::vector<TokenProb> dist, double temperature);

// The k most likely tokens, ranked by (prob desc, token asc).
std::vector<std::string> top_k_tokens(const std::vector<TokenProb>& dist, size_t k);

// Draws one token: argmax at temperature 0, otherwise inverse-CDF sampling
// over the temperature-scaled distribution.
std::string sample_token(const std::vector<TokenProb>& dist, double temperature, Rng& rng);

// Samples up to m continuations of the prefix, each ending at the first
// token equal (ignoring surrounding whitespace) to end_token. Continuations
// that do not reach end_token within max_len tokens are discarded; the end
// token is included in the returned sequences.
std::vector<std::vector<std::string>> sample_until(const LmInterface& lm,
                                                   const std::vector<std::string>& prefix,
                                                   const std::string& end_token, size_t m,
                                                   size_t max_len, double temperature,
                                                   Rng& rng);

}  // namespace toolweave
