#include "toolweave/lm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "toolweave/tokenizer.hpp"

namespace toolweave {

namespace {

bool rank_before(const TokenProb& a, const TokenProb& b) {
    if (a.prob != b.prob) return a.prob > b.prob;
    return a.token < b.token;
}

}  // namespace

double LmInterface::token_prob(const std::vector<std::string>& context,
                               std::string_view token) const {
    for (const auto& tp : next_distribution(context))
        if (tp.token == token) return tp.prob;
    return 0.0;
}

double api_token_prob(const LmInterface& lm, const std::vector<std::string>& context) {
    return lm.token_prob(context, Tokenizer::api_open_token());
}

double api_token_prob(const LmInterface& lm, std::string_view prefix_text) {
    return api_token_prob(lm, Tokenizer::split(prefix_text));
}

std::vector<double> score_suffix(const LmInterface& lm, std::vector<std::string> context,
                                 const std::vector<std::string>& suffix) {
    std::vector<double> out;
    out.reserve(suffix.size());
    for (const auto& tok : suffix) {
        double p = lm.token_prob(context, tok);
        out.push_back(std::log(p));
        context.push_back(tok);
    }
    return out;
}

std::vector<TokenProb> apply_temperature(std::vector<TokenProb> dist, double temperature) {
    if (temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
    std::sort(dist.begin(), dist.end(), rank_before);
    if (dist.empty()) return dist;
    if (temperature == 0.0) {
        dist[0].prob = 1.0;
        dist.resize(1);
        return dist;
    }
    if (temperature != 1.0) {
        double sum = 0.0;
        for (auto& tp : dist) {
            tp.prob = tp.prob > 0.0 ? std::pow(tp.prob, 1.0 / temperature) : 0.0;
            sum += tp.prob;
        }
        if (sum <= 0.0) throw std::domain_error("temperature scaling annihilated all mass");
        for (auto& tp : dist) tp.prob /= sum;
        std::sort(dist.begin(), dist.end(), rank_before);
    }
    return dist;
}

std::vector<std::string> top_k_tokens(const std::vector<TokenProb>& dist, size_t k) {
    std::vector<TokenProb> sorted = dist;
    std::sort(sorted.begin(), sorted.end(), rank_before);
    if (sorted.size() > k) sorted.resize(k);
    std::vector<std::string> out;
    out.reserve(sorted.size());
    for (auto& tp : sorted) out.push_back(std::move(tp.token));
    return out;
}

std::string sample_token(const std::vector<TokenProb>& dist, double temperature, Rng& rng) {
    if (dist.empty()) throw std::invalid_argument("sample_token: empty distribution");
    std::vector<TokenProb> scaled = apply_temperature(dist, temperature);
    if (temperature == 0.0) return scaled[0].token;
    double u = rng.uniform_real();
    double cum = 0.0;
    for (const auto& tp : scaled) {
        cum += tp.prob;
        if (u < cum) return tp.token;
    }
    return scaled.back().token;  // roundoff guard
}

std::vector<std::vector<std::string>> sample_until(const LmInterface& lm,
                                                   const std::vector<std::string>& prefix,
                                                   const std::string& end_token, size_t m,
                                                   size_t max_len, double temperature,
                                                   Rng& rng) {
    const std::string_view end = trim(end_token);
    std::vector<std::vector<std::string>> out;
    for (size_t s = 0; s < m; ++s) {
        std::vector<std::string> context = prefix;
        std::vector<std::string> sampled;
        bool terminated = false;
        while (sampled.size() < max_len) {
            std::string tok = sample_token(lm.next_distribution(context), temperature, rng);
            sampled.push_back(tok);
            context.push_back(std::move(tok));
            if (trim(sampled.back()) == end) {
                terminated = true;
                break;
            }
        }
        if (terminated) out.push_back(std::move(sampled));
    }
    return out;
}

}  // namespace toolweave
