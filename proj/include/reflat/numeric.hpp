#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace reflat {

using Int = mpz_class;
using Rat = mpq_class;
using ZVec = std::vector<Int>;
using QVec = std::vector<Rat>;

/** Thrown when a configurable search cap is exhausted. Maps to CLI exit code 3. */
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int floor_rat(const Rat& x) { return floor_div(x.get_num(), x.get_den()); }

inline Int ceil_rat(const Rat& x) { return ceil_div(x.get_num(), x.get_den()); }

// Reduces x into [0, period).
inline Rat mod_interval(const Rat& x, const Rat& period) {
  Rat r = x / period;
  return x - Rat(floor_rat(r)) * period;
}

inline long to_long(const Int& v, const char* what = "integer") {
  if (!v.fits_slong_p()) throw std::overflow_error(std::string(what) + " out of long range");
  return v.get_si();
}

inline bool is_integral(const Rat& x) { return x.get_den() == 1; }

inline Rat rat_from_string(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  r.canonicalize();
  return r;
}

inline std::string rat_to_string(const Rat& x) { return x.get_str(); }

}  // namespace reflat
