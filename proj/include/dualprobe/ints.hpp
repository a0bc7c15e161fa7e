#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dualprobe {

// Arbitrary-precision integers and exact rationals back every quantity the
// library promises to compute exactly (coordinates, horizons, densities).
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(Int num, Int den) {
    Rat q(std::move(num), std::move(den));
    q.canonicalize();
    return q;
}

inline Int pow2(unsigned long bits) {
    Int v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, bits);
    return v;
}

// floor(log2(v)) + 1 for v >= 1, i.e. the number of binary digits.
inline unsigned long bit_length(const Int& v) {
    if (v <= 0) return 0;
    return mpz_sizeinbase(v.get_mpz_t(), 2);
}

// Largest t >= 0 with base^t <= value. Requires base > 1 and value >= 1.
inline Int floor_log(const Rat& base, const Int& value) {
    if (base <= 1) throw std::invalid_argument("floor_log: base must exceed 1");
    if (value < 1) throw std::invalid_argument("floor_log: value must be >= 1");
    Int num = 1, den = 1, t = 0;
    const Int bnum = base.get_num(), bden = base.get_den();
    while (true) {
        num *= bnum;
        den *= bden;
        if (num > value * den) break;
        ++t;
    }
    return t;
}

inline std::uint64_t to_u64(const Int& v, const char* what) {
    if (v < 0 || !v.fits_ulong_p())
        throw std::invalid_argument(std::string(what) + ": value out of range: " + v.get_str());
    return static_cast<std::uint64_t>(v.get_ui());
}

inline std::size_t to_index(const Int& v, const char* what) {
    return static_cast<std::size_t>(to_u64(v, what));
}

inline Int ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace dualprobe
