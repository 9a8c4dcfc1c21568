#ifndef GMWCS_FORMAT_HPP
#define GMWCS_FORMAT_HPP

#include <optional>
#include <string>
#include <string_view>

namespace gmwcs {

// Shortest decimal text that parses back to the same double. Negative zero
// prints as "0".
std::string format_real(double value);

// Strict decimal parse of the whole token; nullopt on trailing garbage,
// overflow or non-finite values.
std::optional<double> parse_real(std::string_view text);

}  // namespace gmwcs

#endif  // GMWCS_FORMAT_HPP
