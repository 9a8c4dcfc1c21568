#include "gmwcs/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

#include "gmwcs/result.hpp"

namespace gmwcs {

std::string format_real(double value) {
    if (value == 0.0) return "0";
    std::array<char, 64> buffer{};
    auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{}) return std::to_string(value);
    return {buffer.data(), end};
}

std::optional<double> parse_real(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') {
        text.remove_prefix(1);
        if (text.empty() || text.front() == '-') return std::nullopt;
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::string_view to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::timeout: return "timeout";
        case SolveStatus::infeasible_rooted: return "infeasible_rooted";
    }
    return "unknown";
}

}  // namespace gmwcs
