#pragma once

#include <cstdint>
#include <compare>
#include <functional>
#include <iosfwd>
#include <numeric>
#include <stdexcept>
#include <string>

namespace marketgraph {

/// Exact rational on 64-bit numerator/denominator, always in canonical form
/// (gcd(num,den) == 1, den > 0).  Intermediate products run through 128-bit
/// arithmetic; results that do not fit in 64 bits throw overflow_error rather
/// than wrap.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rat(std::int64_t n, std::int64_t d);

  /// Parses "p", "-p" or "p/q".  Throws invalid_argument on malformed input.
  static Rat parse(const std::string& text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  Rat operator-() const;
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend Rat operator+(const Rat& a, const Rat& b);
  friend Rat operator-(const Rat& a, const Rat& b);
  friend Rat operator*(const Rat& a, const Rat& b);
  friend Rat operator/(const Rat& a, const Rat& b);

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

  Rat abs() const { return num_ < 0 ? -*this : *this; }

  /// Serializes as "p" for integers, "p/q" otherwise.
  std::string str() const;
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  static Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
  static Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

 private:
  static std::int64_t narrow(__int128 v);
  static Rat make(__int128 n, __int128 d);

  std::int64_t num_;
  std::int64_t den_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace marketgraph

template <>
struct std::hash<marketgraph::Rat> {
  std::size_t operator()(const marketgraph::Rat& r) const noexcept {
    std::size_t h = std::hash<std::int64_t>{}(r.num());
    return h ^ (std::hash<std::int64_t>{}(r.den()) + 0x9e3779b97f4a7c15ULL +
                (h << 6) + (h >> 2));
  }
};
