#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "dualprobe/ints.hpp"

namespace dualprobe {

// Strictly increasing integer sequences with exact membership and counting.
// The same engine serves support generators on omega and the index sequences
// of characterized subgroups of the circle.

struct GeometricSeq {
    Int scale;  // c >= 1
    Int ratio;  // r >= 2
};

struct PolynomialSeq {
    std::vector<Int> coeffs;  // ascending degree; strictly increasing on j >= 0
};

struct FactorialSeq {
    unsigned long offset = 0;  // s_j = (j + offset)!
};

struct RecurrenceSeq {
    std::vector<Int> coeffs;   // s_{j+d} = coeffs[0]*s_{j+d-1} + ... + coeffs[d-1]*s_j
    std::vector<Int> initial;  // s_0 .. s_{d-1}, strictly increasing
};

struct ExplicitSeq {
    std::vector<Int> terms;  // strictly increasing
};

class MonotoneSequence {
public:
    using Family = std::variant<GeometricSeq, PolynomialSeq, FactorialSeq, RecurrenceSeq, ExplicitSeq>;

    // Validates family parameters and that terms start at or above min_first.
    // Polynomial monotonicity is certified by checking the difference
    // polynomial up to its Cauchy root bound; recurrences are only ever
    // verified over the ranges actually enumerated.
    MonotoneSequence(Family family, const Int& min_first);

    const Family& family() const { return family_; }
    const char* family_name() const;

    Int term(std::uint64_t j) const;
    std::optional<std::uint64_t> length() const;  // explicit lists only

    bool contains(const Int& n) const;
    Int count_below(const Int& k) const;
    void terms_below(const Int& k, const std::function<void(const Int&)>& fn) const;

    // term(j) mod q, computed along an independent route where the family
    // allows one (modular exponentiation for geometric, Horner mod q for
    // polynomials). q >= 1.
    Int term_mod(std::uint64_t j, const Int& q) const;

private:
    Family family_;
};

}  // namespace dualprobe
