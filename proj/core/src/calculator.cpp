#include "toolweave/calculator.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include "toolweave/util.hpp"

namespace toolweave {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Recursive-descent evaluator. Parenthesis nesting is depth-limited so
// adversarial input cannot blow the stack.
class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    std::optional<Rational> run() {
        auto v = parse_expr(0);
        if (!v) return std::nullopt;
        skip_ws();
        if (pos_ != text_.size()) return std::nullopt;
        return v;
    }

private:
    static constexpr int kMaxDepth = 200;

    void skip_ws() {
        while (pos_ < text_.size() && is_ascii_space(text_[pos_])) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::optional<Rational> parse_expr(int depth) {
        auto lhs = parse_term(depth);
        if (!lhs) return std::nullopt;
        for (;;) {
            if (eat('+')) {
                auto rhs = parse_term(depth);
                if (!rhs) return std::nullopt;
                *lhs += *rhs;
            } else if (eat('-')) {
                auto rhs = parse_term(depth);
                if (!rhs) return std::nullopt;
                *lhs -= *rhs;
            } else {
                return lhs;
            }
        }
    }

    std::optional<Rational> parse_term(int depth) {
        auto lhs = parse_factor(depth);
        if (!lhs) return std::nullopt;
        for (;;) {
            if (eat('*')) {
                auto rhs = parse_factor(depth);
                if (!rhs) return std::nullopt;
                *lhs *= *rhs;
            } else if (eat('/')) {
                auto rhs = parse_factor(depth);
                if (!rhs) return std::nullopt;
                if (*rhs == 0) return std::nullopt;
                *lhs /= *rhs;
            } else {
                return lhs;
            }
        }
    }

    std::optional<Rational> parse_factor(int depth) {
        if (depth >= kMaxDepth) return std::nullopt;
        bool negate = false;
        while (true) {
            if (eat('-'))
                negate = !negate;
            else if (eat('+'))
                ;
            else
                break;
        }
        auto v = parse_primary(depth);
        if (!v) return std::nullopt;
        if (negate) *v = -*v;
        return v;
    }

    std::optional<Rational> parse_primary(int depth) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ++pos_;
            auto v = parse_expr(depth + 1);
            if (!v) return std::nullopt;
            if (!eat(')')) return std::nullopt;
            return v;
        }
        return parse_number();
    }

    std::optional<Rational> parse_number() {
        skip_ws();
        std::string digits;
        while (pos_ < text_.size() && is_ascii_digit(text_[pos_])) digits += text_[pos_++];
        if (digits.empty()) return std::nullopt;
        // Strict thousands grouping: 1,234,567.
        while (pos_ + 3 < text_.size() && text_[pos_] == ',' &&
               is_ascii_digit(text_[pos_ + 1]) && is_ascii_digit(text_[pos_ + 2]) &&
               is_ascii_digit(text_[pos_ + 3])) {
            if (pos_ + 4 < text_.size() && is_ascii_digit(text_[pos_ + 4]))
                return std::nullopt;  // malformed grouping such as 1,2345
            digits += text_[pos_ + 1];
            digits += text_[pos_ + 2];
            digits += text_[pos_ + 3];
            pos_ += 4;
        }
        BigInt scale = 1;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            size_t frac_start = pos_;
            while (pos_ < text_.size() && is_ascii_digit(text_[pos_])) {
                digits += text_[pos_++];
                scale *= 10;
            }
            if (pos_ == frac_start) return std::nullopt;  // "12." is not a number
        }
        // cpp_int reads a leading zero as an octal prefix; canonicalize first.
        const size_t nz = digits.find_first_not_of('0');
        return Rational(BigInt(nz == std::string::npos ? "0" : digits.substr(nz)), scale);
    }

    std::string_view text_;
    size_t pos_ = 0;
};

// Round half away from zero to hundredths and render.
std::string render_two_decimals(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r) * 100;
    BigInt den = boost::multiprecision::denominator(r);  // > 0 (canonical form)
    const bool negative = num < 0;
    if (negative) num = -num;
    BigInt cents = num / den;
    BigInt rem = num % den;
    if (rem * 2 >= den) ++cents;
    BigInt whole = cents / 100;
    BigInt frac = cents % 100;
    std::string out;
    if (negative && cents != 0) out += '-';
    out += whole.str();
    if (frac != 0) {
        std::string f = frac.str();
        out += '.';
        if (f.size() < 2) out += '0';
        out += f;
    }
    return out;
}

}  // namespace

std::optional<std::string> calc_eval(std::string_view expr) {
    auto value = Parser(expr).run();
    if (!value) return std::nullopt;
    return render_two_decimals(*value);
}

}  // namespace toolweave
