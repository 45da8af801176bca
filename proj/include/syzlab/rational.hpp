#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace syzlab {

using Q = mpq_class;
using Z = mpz_class;

// Accepts "3", "-2/5", "0.125", "1e-3". Decimal input is converted exactly.
Q parse_rational(const std::string& text);
// Exact binary value of a finite double.
Q rational_from_double(double v);
std::string to_string(const Q& q);
std::size_t hash_value(const Q& q);
// Square root when q is the square of a rational, otherwise false.
bool exact_sqrt(const Q& q, Q& out);

}  // namespace syzlab
