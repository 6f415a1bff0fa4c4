#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace selfdecomp {
namespace detail {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kLogPi = 1.14472988584940017414342735135305871;
inline constexpr long double kPiL = 3.14159265358979323846264338327950288L;
inline constexpr long double kLogPiL = 1.14472988584940017414342735135305871L;

// sin(pi*x) with exact argument reduction; exactly zero at integers.
inline double sin_pi(double x) {
  const double n = std::nearbyint(x);
  const double r = x - n;  // exact for |x| < 2^52
  if (r == 0.0) return 0.0;
  const double s = std::sin(kPi * r);
  return (std::fmod(n, 2.0) != 0.0) ? -s : s;
}

inline long double sin_pi(long double x) {
  const long double n = std::nearbyint(x);
  const long double r = x - n;
  if (r == 0.0L) return 0.0L;
  const long double s = std::sin(kPiL * r);
  return (std::fmod(n, 2.0L) != 0.0L) ? -s : s;
}

// Neumaier-compensated accumulator.
template <class T>
struct CompensatedSum {
  T sum{};
  T comp{};

  void add(T term) {
    const T t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  T value() const { return sum + comp; }
};

}  // namespace detail
}  // namespace selfdecomp
