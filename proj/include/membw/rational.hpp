#pragma once

/// @file rational.hpp
/// @brief Exact rational arithmetic used throughout the stall analysis.
///
/// All stall rates, slopes and cumulative stalls are carried as GMP
/// rationals. The only integer projection in the analysis is the ceiling
/// applied when converting slots to regulation periods.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace membw {

using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1)
{
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    Rational r{mpz_class{static_cast<long>(num)}, mpz_class{static_cast<long>(den)}};
    r.canonicalize();
    return r;
}

inline std::int64_t to_int64(const mpz_class& z)
{
    if (!z.fits_slong_p())
        throw std::overflow_error("integer does not fit in 64 bits");
    return static_cast<std::int64_t>(z.get_si());
}

/// Smallest integer not below @p x.
inline std::int64_t ceil_int(const Rational& x)
{
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return to_int64(q);
}

/// Largest integer not above @p x.
inline std::int64_t floor_int(const Rational& x)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return to_int64(q);
}

inline double to_double(const Rational& x) { return x.get_d(); }

/// "n" for integers, "n/d" otherwise.
inline std::string to_string(const Rational& x) { return x.get_str(); }

} // namespace membw
