#include "marketgraph/rational.hpp"

#include <cctype>
#include <charconv>
#include <ostream>

namespace marketgraph {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

std::int64_t Rat::narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw std::overflow_error("rational arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

Rat Rat::make(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rat r;
  r.num_ = narrow(n);
  r.den_ = narrow(d);
  return r;
}

Rat::Rat(std::int64_t n, std::int64_t d) { *this = make(n, d); }

Rat Rat::operator-() const {
  Rat r;
  r.num_ = narrow(-static_cast<__int128>(num_));
  r.den_ = den_;
  return r;
}

Rat operator+(const Rat& a, const Rat& b) {
  return Rat::make(static_cast<__int128>(a.num_) * b.den_ +
                       static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
}

Rat operator-(const Rat& a, const Rat& b) {
  return Rat::make(static_cast<__int128>(a.num_) * b.den_ -
                       static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
}

Rat operator*(const Rat& a, const Rat& b) {
  return Rat::make(static_cast<__int128>(a.num_) * b.num_,
                   static_cast<__int128>(a.den_) * b.den_);
}

Rat operator/(const Rat& a, const Rat& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return Rat::make(static_cast<__int128>(a.num_) * b.den_,
                   static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rat Rat::parse(const std::string& text) {
  std::size_t slash = text.find('/');
  auto parse_int = [&](std::size_t begin, std::size_t end) {
    std::int64_t value = 0;
    const char* first = text.data() + begin;
    const char* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
      throw std::invalid_argument("bad rational literal: '" + text + "'");
    return value;
  };
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (slash == std::string::npos) return Rat(parse_int(0, text.size()));
  if (slash == 0 || slash + 1 == text.size())
    throw std::invalid_argument("bad rational literal: '" + text + "'");
  std::int64_t n = parse_int(0, slash);
  std::int64_t d = parse_int(slash + 1, text.size());
  return Rat(n, d);
}

std::string Rat::str() const {
  std::string s = std::to_string(num_);
  if (den_ != 1) {
    s += '/';
    s += std::to_string(den_);
  }
  return s;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.str();
}

}  // namespace marketgraph
