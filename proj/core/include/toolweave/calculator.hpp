#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace toolweave {

// Evaluates an infix expression over +, -, *, / with standard precedence and
// parentheses, in exact rational arithmetic. The result is rounded half away
// from zero to two decimals; whole numbers render without a decimal point
// ("35"), fractional ones keep both decimals ("3.70"). Returns nothing on a
// syntax error or division by zero.
std::optional<std::string> calc_eval(std::string_view expr);

}  // namespace toolweave
