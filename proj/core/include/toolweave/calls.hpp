#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolweave/types.hpp"

namespace toolweave {

// Textual rendering of a call without its result: " [Tool(input)]".
std::string linearize(const ApiCall& call);

// With a result: " [Tool(input) -> result]". An empty result keeps the
// arrow (" [Tool(input) -> ]") so the two loss branches render distinctly.
std::string linearize_with_result(const ApiCall& call, std::string_view result);

// Parses "Tool(input)" — the text between the call markers. Tolerates
// surrounding whitespace and strips one optional pair of double quotes
// around the input. Returns nothing when the name/parenthesis structure is
// missing.
std::optional<ApiCall> parse_call(std::string_view body);

// Same, but additionally fails when the tool is not in `registered`.
std::optional<ApiCall> parse_call(std::string_view body,
                                  const std::vector<std::string>& registered);

// Inserts rendered text before token `position` (0-based; == size() appends).
// Tokens carry their own whitespace, so the result is prefix + e + remainder.
std::string splice(const std::vector<std::string>& tokens, size_t position,
                   std::string_view rendered);

// Applies several insertions, right-to-left so earlier positions are
// unaffected. Pairs are (token position, rendered text); at most one per
// position.
std::string splice_many(const std::vector<std::string>& tokens,
                        std::vector<std::pair<size_t, std::string>> insertions);

}  // namespace toolweave
