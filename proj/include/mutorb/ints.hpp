#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace mutorb {

// Exact integers everywhere. Mutation classes that are not finite blow up
// entry sizes quickly, so overflow has to be impossible, not detected.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline int sgn(const Int& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }

inline Int gcd_int(Int a, Int b) { return boost::multiprecision::gcd(a, b); }

inline Int lcm_int(const Int& a, const Int& b) {
  return boost::multiprecision::lcm(a, b);
}

// Floor of sqrt; second member reports whether the input was a perfect square.
inline std::pair<Int, bool> sqrt_exact(const Int& a) {
  if (a < 0) return {Int(0), false};
  Int r = boost::multiprecision::sqrt(a);
  return {r, r * r == a};
}

inline std::string to_string(const Int& a) { return a.str(); }

} // namespace mutorb
