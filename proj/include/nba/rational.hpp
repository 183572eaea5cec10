#pragma once

#include <boost/rational.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "nba/errors.hpp"

namespace nba {

// All bandwidth and money quantities are exact rationals. Cost comparisons
// drive optimality proofs, so no floating point is allowed anywhere on the
// value path; solver equivalence tests rely on exact equality.
using Rat = boost::rational<long long>;

inline Rat rat(long long num, long long den = 1) { return Rat(num, den); }

inline bool is_integer(const Rat& r) { return r.denominator() == 1; }

// Floor of a rational, exact.
inline long long rat_floor(const Rat& r) {
  long long q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q;
}

// Canonical text form: "n" when integral, "n/d" otherwise.
inline std::string rat_str(const Rat& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) {
    s += '/';
    s += std::to_string(r.denominator());
  }
  return s;
}

namespace detail {

inline long long parse_ll(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

// Parses "n", "n/d", or a plain decimal like "0.95". Decimals are read
// digit-exactly (0.95 -> 19/20), never through a binary double.
inline Rat parse_rat(std::string_view s) {
  if (s.empty()) throw InputError("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    long long num = detail::parse_ll(s.substr(0, slash));
    long long den = detail::parse_ll(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + std::string(s) + "'");
    return Rat(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    bool neg = !s.empty() && s.front() == '-';
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (fp.empty()) throw InputError("trailing dot in '" + std::string(s) + "'");
    long long whole = ip.empty() || ip == "-" ? 0 : detail::parse_ll(ip);
    long long frac = detail::parse_ll(fp);
    if (frac < 0) throw InputError("malformed decimal '" + std::string(s) + "'");
    long long den = 1;
    for (size_t i = 0; i < fp.size(); ++i) {
      if (den > 900'000'000'000'000'000LL / 10) {
        throw InputError("decimal too long: '" + std::string(s) + "'");
      }
      den *= 10;
    }
    Rat mag = Rat(whole < 0 ? -whole : whole) + Rat(frac, den);
    return neg ? -mag : mag;
  }
  return Rat(detail::parse_ll(s));
}

// Decimal text for LP/MPS emission; requires a terminating expansion
// (denominator of the form 2^a * 5^b).
inline std::string rat_decimal(const Rat& r) {
  long long den = r.denominator();
  long long pow2 = 0, pow5 = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++pow2;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++pow5;
  }
  if (den != 1) {
    throw InputError("coefficient " + rat_str(r) +
                     " has no terminating decimal form required by the export format");
  }
  // Scale to an integer over a power of ten.
  boost::rational<long long> scaled = r;
  long long digits = pow2 > pow5 ? pow2 : pow5;
  for (long long i = 0; i < digits; ++i) scaled *= 10;
  long long v = scaled.numerator();
  bool neg = v < 0;
  std::string body = std::to_string(neg ? -v : v);
  if (digits > 0) {
    while (static_cast<long long>(body.size()) <= digits) body.insert(body.begin(), '0');
    body.insert(body.size() - static_cast<size_t>(digits), ".");
    while (body.back() == '0') body.pop_back();
    if (body.back() == '.') body.pop_back();
  }
  return neg ? "-" + body : body;
}

}  // namespace nba
