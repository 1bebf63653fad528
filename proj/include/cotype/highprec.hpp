#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gmpxx.h>

#include <string>

namespace cotype {

/// 113-bit mantissa software float used for every Euler product and mass.
using HighFloat = boost::multiprecision::cpp_bin_float_quad;

inline HighFloat to_high(const mpz_class& z) { return HighFloat(z.get_str()); }
inline HighFloat to_high(const mpq_class& q) { return to_high(q.get_num()) / to_high(q.get_den()); }

/// Shortest round-trip decimal text, used in JSON output.
std::string format_high(const HighFloat& x, int digits = 20);

}  // namespace cotype
