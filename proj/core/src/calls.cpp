#include "toolweave/calls.hpp"

#include <algorithm>
#include <stdexcept>

#include "toolweave/util.hpp"

namespace toolweave {

std::string linearize(const ApiCall& call) {
    std::string out = " [";
    out += call.tool;
    out += '(';
    out += call.input;
    out += ")]";
    return out;
}

std::string linearize_with_result(const ApiCall& call, std::string_view result) {
    std::string out = " [";
    out += call.tool;
    out += '(';
    out += call.input;
    out += ") -> ";
    out += result;
    out += ']';
    return out;
}

std::optional<ApiCall> parse_call(std::string_view body) {
    std::string_view s = trim(body);
    size_t open = s.find('(');
    if (open == std::string_view::npos) return std::nullopt;
    size_t close = s.rfind(')');
    if (close == std::string_view::npos || close < open) return std::nullopt;
    std::string_view name = trim(s.substr(0, open));
    if (name.empty()) return std::nullopt;
    for (char c : name)
        if (!is_ascii_alnum(c) && c != '_') return std::nullopt;
    if (!trim(s.substr(close + 1)).empty()) return std::nullopt;

    std::string_view input = trim(s.substr(open + 1, close - open - 1));
    if (input.size() >= 2 && input.front() == '"' && input.back() == '"')
        input = input.substr(1, input.size() - 2);
    return ApiCall{std::string(name), std::string(input)};
}

std::optional<ApiCall> parse_call(std::string_view body,
                                  const std::vector<std::string>& registered) {
    auto call = parse_call(body);
    if (!call) return std::nullopt;
    if (std::find(registered.begin(), registered.end(), call->tool) == registered.end())
        return std::nullopt;
    return call;
}

std::string splice(const std::vector<std::string>& tokens, size_t position,
                   std::string_view rendered) {
    if (position > tokens.size()) throw std::out_of_range("splice: position out of range");
    std::string out;
    for (size_t i = 0; i < position; ++i) out += tokens[i];
    out += rendered;
    for (size_t i = position; i < tokens.size(); ++i) out += tokens[i];
    return out;
}

std::string splice_many(const std::vector<std::string>& tokens,
                        std::vector<std::pair<size_t, std::string>> insertions) {
    std::sort(insertions.begin(), insertions.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < insertions.size(); ++i)
        if (insertions[i].first == insertions[i - 1].first)
            throw std::invalid_argument("splice_many: two insertions at one position");
    std::string out;
    auto it = insertions.begin();
    for (size_t i = 0; i <= tokens.size(); ++i) {
        if (it != insertions.end() && it->first == i) {
            out += it->second;
            ++it;
        }
        if (i < tokens.size()) out += tokens[i];
    }
    if (it != insertions.end()) throw std::out_of_range("splice_many: position out of range");
    return out;
}

}  // namespace toolweave
