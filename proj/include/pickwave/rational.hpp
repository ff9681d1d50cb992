#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pickwave {

// Exact rational on int64 with __int128 intermediates. Throws on overflow
// instead of silently wrapping; the values handled here (times, multipliers)
// stay far below the limits.
struct Rat {
  long long num = 0;
  long long den = 1;

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rat from128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 g = gcd128(a, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("rational overflow");
    Rat r;
    r.num = (long long)n;
    r.den = (long long)d;
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  Rat operator+(const Rat& o) const {
    return from128((__int128)num * o.den + (__int128)o.num * den,
                   (__int128)den * o.den);
  }
  Rat operator-(const Rat& o) const {
    return from128((__int128)num * o.den - (__int128)o.num * den,
                   (__int128)den * o.den);
  }
  Rat operator*(const Rat& o) const {
    return from128((__int128)num * o.num, (__int128)den * o.den);
  }
  Rat operator/(const Rat& o) const {
    if (o.num == 0) throw std::domain_error("rational division by zero");
    return from128((__int128)num * o.den, (__int128)den * o.num);
  }

  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const {
    return (__int128)num * o.den < (__int128)o.num * den;
  }
  bool operator<=(const Rat& o) const {
    return (__int128)num * o.den <= (__int128)o.num * den;
  }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  bool is_integer() const { return den == 1; }

  long long floor() const {
    long long q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q;
  }
  long long ceil() const {
    long long q = num / den;
    if (num % den != 0 && num > 0) ++q;
    return q;
  }

  double to_double() const { return (double)num / (double)den; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace pickwave
