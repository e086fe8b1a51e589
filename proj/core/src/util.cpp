#include "toolweave/util.hpp"

#include <cstdlib>

namespace toolweave {

std::string single_line(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool last_space = false;
    for (char c : s) {
        if (c == '\n' || c == '\r' || c == '\t') c = ' ';
        if (c == ' ') {
            if (last_space) continue;
            last_space = true;
        } else {
            last_space = false;
        }
        out.push_back(c);
    }
    return std::string(trim(out));
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_ascii_space(s[i])) ++i;
        size_t b = i;
        while (i < s.size() && !is_ascii_space(s[i])) ++i;
        if (i > b) words.emplace_back(s.substr(b, i - b));
    }
    return words;
}

namespace {

// Parses digits with optional strict comma grouping starting at `i`.
// Returns one-past-the-end of the integer part, or begin on failure.
size_t scan_integer_part(std::string_view text, size_t i) {
    size_t b = i;
    while (i < text.size() && is_ascii_digit(text[i])) ++i;
    if (i == b) return b;
    if (i - b <= 3) {
        // Comma-grouped continuation: each comma must join exactly 3 digits.
        size_t j = i;
        while (j + 3 < text.size() && text[j] == ',' && is_ascii_digit(text[j + 1]) &&
               is_ascii_digit(text[j + 2]) && is_ascii_digit(text[j + 3])) {
            // A 4th digit after the group means the grouping is malformed.
            if (j + 4 < text.size() && is_ascii_digit(text[j + 4])) break;
            j += 4;
        }
        if (j > i) return j;
    }
    return i;
}

}  // namespace

std::vector<NumberMatch> extract_numbers(std::string_view text) {
    std::vector<NumberMatch> out;
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        char c = text[i];
        size_t start = i;
        bool signed_start = false;
        if ((c == '+' || c == '-') && i + 1 < n && is_ascii_digit(text[i + 1])) {
            bool boundary = (i == 0) || is_ascii_space(text[i - 1]) || text[i - 1] == '(' || text[i - 1] == '=';
            if (boundary) {
                signed_start = true;
            } else {
                ++i;
                continue;
            }
        } else if (!is_ascii_digit(c)) {
            ++i;
            continue;
        }
        // Digits inside identifiers ("abc123") are not numbers.
        if (!signed_start && i > 0) {
            char prev = text[i - 1];
            if (is_ascii_alpha(prev) || is_ascii_digit(prev) || static_cast<unsigned char>(prev) >= 0x80) {
                while (i < n && is_ascii_digit(text[i])) ++i;
                continue;
            }
        }
        size_t digits_begin = signed_start ? i + 1 : i;
        size_t int_end = scan_integer_part(text, digits_begin);
        if (int_end == digits_begin) {
            ++i;
            continue;
        }
        size_t end = int_end;
        if (end < n && text[end] == '.' && end + 1 < n && is_ascii_digit(text[end + 1])) {
            ++end;
            while (end < n && is_ascii_digit(text[end])) ++end;
        }
        NumberMatch m;
        m.begin = start;
        m.end = end;
        m.raw = std::string(text.substr(start, end - start));
        std::string plain;
        plain.reserve(m.raw.size());
        for (char d : m.raw)
            if (d != ',') plain.push_back(d);
        m.value = std::strtod(plain.c_str(), nullptr);
        out.push_back(std::move(m));
        i = end;
    }
    return out;
}

}  // namespace toolweave
