#pragma once

// Exact rational scalars. Thin helpers over GMP's mpq_class: every value is
// kept canonical (lowest terms, positive denominator), and the text form is
// "p" or "p/q" accordingly.

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace gdf {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p" or "p/q" (optional sign, base 10). Throws std::invalid_argument
// on malformed input or a zero denominator.
inline Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  Rat q;
  if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + text);
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator in rational literal: " + text);
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

}  // namespace gdf
