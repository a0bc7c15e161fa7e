#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualprobe/ints.hpp"
#include "dualprobe/measure.hpp"
#include "dualprobe/sequences.hpp"

namespace dualprobe {

// Index sequence B = (n_k) of a characterized subgroup C_B of the circle:
// strictly increasing positive integers from one of the supported families.
class SequenceGen {
public:
    explicit SequenceGen(MonotoneSequence::Family family)
        : seq_(std::move(family), Int(1)) {}

    const MonotoneSequence& seq() const { return seq_; }
    Int term(std::uint64_t k) const { return seq_.term(k); }
    Int term_mod(std::uint64_t k, const Int& q) const { return seq_.term_mod(k, q); }
    std::optional<std::uint64_t> length() const { return seq_.length(); }
    const char* family_name() const { return seq_.family_name(); }

private:
    MonotoneSequence seq_;
};

// Point of finite order on the circle: the angle fraction p/q in lowest
// terms, 0 <= p < q.
struct RationalPoint {
    static RationalPoint make(const Int& p, const Int& q);
    Int p;
    Int q;
};

struct ResidueCycle {
    std::uint64_t start = 0;
    std::uint64_t length = 0;
    std::vector<Int> residues;  // n_{start+i} mod q over one cycle
    bool all_zero() const;
};

// MEMBER(stabilization_index): all residues n_k mod q vanish from that index
// on, hence x^{n_k} = 1 eventually. NON_MEMBER carries the certifying cycle.
struct CircleMembership {
    bool member = false;
    Int stabilization_index;
    std::optional<ResidueCycle> cycle;
    std::string note;
};

// Exact decision through the residue dynamics of the family mod q; the
// eventual periodicity is detected by state repetition, not assumed.
CircleMembership rational_membership(const RationalPoint& x, const SequenceGen& b);

// Re-simulates the certificate cycle by independent modular evaluation of
// the sequence terms; true when the cycle reproduces itself.
bool verify_cycle(const SequenceGen& b, const Int& q, const ResidueCycle& cycle);

// A real number held at a declared dyadic precision: x = mantissa / 2^bits.
struct DyadicReal {
    static DyadicReal from_mantissa(Int mantissa, unsigned long bits);
    static DyadicReal from_fraction(const Int& p, const Int& q, unsigned long bits);
    static DyadicReal from_decimal(const std::string& text, unsigned long bits);

    Rat value() const;
    Int mantissa;
    unsigned long bits = 0;
};

// Horizon-bounded probe of ||n_k x|| (distance from n_k x to the nearest
// integer). Never a claim about membership itself: the verdict only reflects
// the probed range, and the declared precision must dominate log2(n_K) plus
// guard bits or the probe refuses (PrecisionError).
struct FloatProbe {
    std::vector<Rat> distances;      // per k = 0..horizon
    Rat max_distance;
    Rat tail_max;                    // over the last quarter of the range
    std::uint64_t tail_start = 0;
    bool appears_member = false;     // tail_max < epsilon
    std::uint64_t horizon = 0;
    unsigned long precision_bits = 0;
    unsigned long required_bits = 0;
};

inline constexpr unsigned long kDefaultGuardBits = 32;

FloatProbe float_membership(const DyadicReal& x, const SequenceGen& b, std::uint64_t horizon,
                            const Rat& epsilon, unsigned long guard_bits = kDefaultGuardBits);

// Largest horizon the precision admits for this sequence (same precondition
// as float_membership), capped at `cap`.
std::uint64_t max_admissible_horizon(const SequenceGen& b, unsigned long precision_bits,
                                     std::uint64_t cap,
                                     unsigned long guard_bits = kDefaultGuardBits);

// Monte Carlo measure of {x : ||n_k x|| <= eps for k = 1..K}, an outer
// approximation of C_B shrinking in K. Deterministic in (seed, samples);
// sample_bits = 0 lets the resolution adapt to the sequence terms.
EstimateReport measure_probe(const SequenceGen& b, const Rat& epsilon, std::uint64_t constraints,
                             std::uint64_t samples, std::uint64_t seed,
                             unsigned long sample_bits = 0, unsigned threads = 1);

}  // namespace dualprobe
