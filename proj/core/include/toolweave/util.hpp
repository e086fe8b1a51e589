#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace toolweave {

// FNV-1a, stable across platforms and runs (std::hash is not).
inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-document seed so parallel scheduling cannot change sampling results.
inline uint64_t derive_seed(uint64_t global_seed, std::string_view key) {
    return splitmix64(global_seed ^ fnv1a64(key));
}

// Deterministic RNG wrapper. All draws go through hand-rolled mappings
// because the std distributions are implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, n) via rejection.
    uint64_t uniform_index(uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n == 0");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// Exact small-rational arithmetic for weight schemes. int64 is plenty for
// the tiny denominators involved; overflow throws rather than wrapping.
struct Fraction {
    int64_t num = 0;
    int64_t den = 1;

    Fraction() = default;
    Fraction(int64_t n, int64_t d) : num(n), den(d) { reduce(); }
    static Fraction of(int64_t n) { return Fraction(n, 1); }

    void reduce() {
        if (den == 0) throw std::domain_error("Fraction: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Fraction operator+(Fraction a, Fraction b) { return Fraction(checked(a.num, b.den) + checked(b.num, a.den), checked(a.den, b.den)); }
    friend Fraction operator-(Fraction a, Fraction b) { return Fraction(checked(a.num, b.den) - checked(b.num, a.den), checked(a.den, b.den)); }
    friend Fraction operator*(Fraction a, Fraction b) { return Fraction(checked(a.num, b.num), checked(a.den, b.den)); }
    friend Fraction operator/(Fraction a, Fraction b) {
        if (b.num == 0) throw std::domain_error("Fraction: division by zero");
        return Fraction(checked(a.num, b.den), checked(a.den, b.num));
    }
    friend bool operator==(const Fraction& a, const Fraction& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(const Fraction& a, const Fraction& b) { return checked(a.num, b.den) < checked(b.num, a.den); }

private:
    static int64_t checked(int64_t a, int64_t b) {
        int64_t r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Fraction overflow");
        return r;
    }
};

// --- small string helpers -------------------------------------------------

inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_ascii_alpha(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || is_ascii_digit(c); }

inline std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && is_ascii_space(s[b])) ++b;
    while (e > b && is_ascii_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

inline std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    std::string h = lower_ascii(haystack);
    std::string n = lower_ascii(needle);
    return h.find(n) != std::string::npos;
}

// Collapse newlines so a value fits on one JSONL line / one tool response.
std::string single_line(std::string_view s);

// Whitespace-delimited words.
std::vector<std::string> split_words(std::string_view s);

// --- number scanning ------------------------------------------------------

// A decimal literal found in text: optional sign, optional well-formed
// thousands separators, optional fraction. Byte offsets into the source.
struct NumberMatch {
    double value = 0.0;
    size_t begin = 0;
    size_t end = 0;
    std::string raw;
};

// Scans for decimal literals. A leading +/- counts as part of the number
// only at the start of text or after whitespace/'('/'='. Comma groups are
// accepted only in the strict 1,234,567 form.
std::vector<NumberMatch> extract_numbers(std::string_view text);

}  // namespace toolweave
