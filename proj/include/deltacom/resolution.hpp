#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "deltacom/graph.hpp"

namespace deltacom {

/// Exact non-negative rational resolution value. Every resolution produced by
/// the agglomeration is e(C,C')*m / (k_C*k_C'), a ratio of integers, so
/// ordering and equality are decided without rounding.
struct Resolution {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Resolution make(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw Error("resolution with zero denominator");
    std::uint64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    return {num / g, den / g};
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend std::strong_ordering operator<=>(const Resolution& a, const Resolution& b) {
    using u128 = unsigned __int128;
    return static_cast<u128>(a.num) * b.den <=> static_cast<u128>(b.num) * a.den;
  }
  friend bool operator==(const Resolution& a, const Resolution& b) { return (a <=> b) == 0; }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  static Resolution parse(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) throw Error("malformed rational: " + std::string(s));
    try {
      std::size_t used = 0;
      std::string num_str(s.substr(0, slash));
      std::string den_str(s.substr(slash + 1));
      std::uint64_t num = std::stoull(num_str, &used);
      if (used != num_str.size()) throw Error("malformed rational: " + std::string(s));
      std::uint64_t den = std::stoull(den_str, &used);
      if (used != den_str.size()) throw Error("malformed rational: " + std::string(s));
      return make(num, den);
    } catch (const std::logic_error&) {
      throw Error("malformed rational: " + std::string(s));
    }
  }
};

}  // namespace deltacom
