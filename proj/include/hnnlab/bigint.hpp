#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hnnlab {

using BigInt = boost::multiprecision::cpp_int;
using BigVector = std::vector<BigInt>;

/// Quotient rounded towards negative infinity. `b` must be nonzero.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

/// Residue in [0, |b|).
inline BigInt floor_mod(const BigInt& a, const BigInt& b) {
  BigInt r = a % b;
  if (r < 0) r += abs(b);
  return r;
}

inline bool is_zero(const BigVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline BigVector zero_vector(std::size_t n) { return BigVector(n, BigInt(0)); }

inline BigVector& operator+=(BigVector& a, const BigVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline BigVector& operator-=(BigVector& a, const BigVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline BigVector operator+(BigVector a, const BigVector& b) { return a += b; }
inline BigVector operator-(BigVector a, const BigVector& b) { return a -= b; }

inline BigVector operator-(BigVector a) {
  for (auto& x : a) x = -x;
  return a;
}

inline std::string to_string(const BigInt& x) { return x.str(); }

inline std::string to_string(const BigVector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].str();
  }
  return out + "]";
}

/// Parses an optionally signed decimal integer; throws std::invalid_argument.
inline BigInt parse_bigint(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) throw std::invalid_argument("empty integer literal");
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9')
      throw std::invalid_argument("bad integer literal: " + std::string(text));
  return BigInt(std::string(text));
}

inline std::size_t hash_combine(std::size_t seed, std::size_t h) {
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct BigVectorHash {
  std::size_t operator()(const BigVector& v) const {
    std::size_t seed = v.size();
    std::hash<BigInt> h;
    for (const auto& x : v) seed = hash_combine(seed, h(x));
    return seed;
  }
};

}  // namespace hnnlab
