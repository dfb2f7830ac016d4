#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>

namespace erae {

// Library results are in bits; reporting layers convert once at the edge.
enum class LogBase { Two, E };

inline double rescale_bits(double bits, LogBase base) noexcept {
  return base == LogBase::Two ? bits : bits * std::numbers::ln2;
}

inline std::optional<LogBase> parse_log_base(std::string_view s) noexcept {
  if (s == "2") return LogBase::Two;
  if (s == "e") return LogBase::E;
  return std::nullopt;
}

}  // namespace erae
