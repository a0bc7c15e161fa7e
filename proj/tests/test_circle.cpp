#include <doctest.h>

#include <cmath>
#include <vector>

#include "dualprobe/circle.hpp"
#include "dualprobe/errors.hpp"
#include "dualprobe/rng.hpp"

using namespace dualprobe;

namespace {

SequenceGen powers_of_two() { return SequenceGen(GeometricSeq{Int(1), Int(2)}); }
SequenceGen factorials() { return SequenceGen(FactorialSeq{1}); }

// Is `cycle` a rotation of `expected`?
bool cycle_rotation_of(const std::vector<Int>& cycle, std::vector<Int> expected) {
    if (cycle.size() != expected.size()) return false;
    for (std::size_t r = 0; r < expected.size(); ++r) {
        std::rotate(expected.begin(), expected.begin() + 1, expected.end());
        if (cycle == expected) return true;
    }
    return false;
}

// Direct big-integer oracle: n_k mod q from the full term value.
Int direct_mod(const SequenceGen& b, std::uint64_t k, const Int& q) { return b.term(k) % q; }

}  // namespace

TEST_CASE("rational membership against powers of two") {
    SUBCASE("1/3 is refuted by the alternating cycle") {
        const auto v = rational_membership(RationalPoint::make(1, 3), powers_of_two());
        CHECK_FALSE(v.member);
        REQUIRE(v.cycle.has_value());
        const std::vector<Int> one_cycle(v.cycle->residues.begin(),
                                         v.cycle->residues.begin() + v.cycle->length);
        CHECK(cycle_rotation_of(one_cycle, {Int(2), Int(1)}));
        CHECK(verify_cycle(powers_of_two(), Int(3), *v.cycle));
    }
    SUBCASE("5/8 stabilizes at index 3") {
        const auto v = rational_membership(RationalPoint::make(5, 8), powers_of_two());
        CHECK(v.member);
        CHECK(v.stabilization_index == 3);
    }
    SUBCASE("identity point") {
        const auto v = rational_membership(RationalPoint::make(0, 1), powers_of_two());
        CHECK(v.member);
        CHECK(v.stabilization_index == 0);
    }
}

TEST_CASE("membership agrees with the direct residue oracle") {
    for (std::uint64_t t = 0; t < 40; ++t) {
        const Int q(2 + static_cast<long>(rng::below(71, t, 0, 500)));
        const Int p(static_cast<long>(rng::below(71, t, 1, 1000)));
        const auto x = RationalPoint::make(p, q);
        const auto v = rational_membership(x, powers_of_two());
        if (v.member) {
            const std::uint64_t n0 = to_u64(v.stabilization_index, "n0");
            for (std::uint64_t k = n0; k < n0 + 8; ++k)
                CHECK(direct_mod(powers_of_two(), k, x.q) == 0);
            if (n0 > 0) CHECK(direct_mod(powers_of_two(), n0 - 1, x.q) != 0);
        } else {
            REQUIRE(v.cycle.has_value());
            CHECK(verify_cycle(powers_of_two(), x.q, *v.cycle));
            CHECK_FALSE(v.cycle->all_zero());
            for (std::uint64_t i = 0; i < v.cycle->residues.size() && i < 12; ++i)
                CHECK(direct_mod(powers_of_two(), v.cycle->start + i, x.q) == v.cycle->residues[i]);
        }
    }
}

TEST_CASE("every rational joins the factorial-characterized subgroup") {
    for (std::uint64_t t = 0; t < 40; ++t) {
        const Int q(2 + static_cast<long>(rng::below(72, t, 0, 2000)));
        Int p(static_cast<long>(rng::below(72, t, 1, 4000)));
        const auto x = RationalPoint::make(p, q);
        const auto v = rational_membership(x, factorials());
        CHECK(v.member);
        CHECK(v.stabilization_index <= x.q);
        const std::uint64_t n0 = to_u64(v.stabilization_index, "n0");
        for (std::uint64_t k = n0; k < n0 + 4; ++k)
            CHECK(direct_mod(factorials(), k, x.q) == 0);
        if (n0 > 0) CHECK(direct_mod(factorials(), n0 - 1, x.q) != 0);
    }
}

TEST_CASE("polynomial and recurrence residue dynamics") {
    SUBCASE("identically-zero polynomial residues") {
        const SequenceGen b(PolynomialSeq{{Int(3), Int(3)}});  // 3k + 3
        const auto v = rational_membership(RationalPoint::make(1, 3), b);
        CHECK(v.member);
        CHECK(v.stabilization_index == 0);
    }
    SUBCASE("non-vanishing polynomial cycle") {
        const SequenceGen b(PolynomialSeq{{Int(1), Int(1), Int(1)}});  // k^2 + k + 1
        const auto v = rational_membership(RationalPoint::make(1, 3), b);
        CHECK_FALSE(v.member);
        REQUIRE(v.cycle.has_value());
        CHECK(v.cycle->length == 3);
        CHECK(v.cycle->residues == std::vector<Int>{Int(1), Int(0), Int(1)});
        CHECK(verify_cycle(b, Int(3), *v.cycle));
    }
    SUBCASE("Fibonacci-style recurrence mod 4") {
        const SequenceGen b(RecurrenceSeq{{Int(1), Int(1)}, {Int(1), Int(2)}});
        const auto v = rational_membership(RationalPoint::make(1, 4), b);
        CHECK_FALSE(v.member);
        REQUIRE(v.cycle.has_value());
        CHECK(verify_cycle(b, Int(4), *v.cycle));
        // Re-simulation from the certificate start reproduces the cycle.
        for (std::uint64_t i = 0; i < v.cycle->length; ++i)
            CHECK(direct_mod(b, v.cycle->start + i, Int(4)) == v.cycle->residues[i]);
    }
    SUBCASE("recurrences reaching an all-zero state") {
        // s_{j+1} = 3 s_j starting at 5, mod 5: residues are identically zero.
        const SequenceGen b(RecurrenceSeq{{Int(3)}, {Int(5)}});
        const auto v = rational_membership(RationalPoint::make(2, 5), b);
        CHECK(v.member);
        CHECK(v.stabilization_index == 0);
    }
}

TEST_CASE("explicit finite sequences are vacuously characterized") {
    const SequenceGen b(ExplicitSeq{{Int(2), Int(4), Int(8)}});
    const auto v = rational_membership(RationalPoint::make(1, 3), b);
    CHECK(v.member);
    CHECK(v.stabilization_index == 3);  // residues 2,1,2: nothing after the last one
    CHECK(!v.note.empty());
}

TEST_CASE("dyadic probe distances") {
    SUBCASE("zero is everywhere a member") {
        const auto x = DyadicReal::from_fraction(0, 1, 128);
        const auto probe = float_membership(x, powers_of_two(), 40, make_rat(1, 1000));
        CHECK(probe.appears_member);
        CHECK(probe.max_distance == 0);
    }
    SUBCASE("1/3 alternates near one third") {
        const auto x = DyadicReal::from_fraction(1, 3, 256);
        const auto probe = float_membership(x, powers_of_two(), 100, make_rat(1, 1000));
        CHECK_FALSE(probe.appears_member);
        for (const Rat& d : probe.distances) {
            CHECK(d > make_rat(33, 100));
            CHECK(d < make_rat(34, 100));
        }
    }
    SUBCASE("5/8 lands exactly on zero from k=3") {
        const auto x = DyadicReal::from_fraction(5, 8, 256);
        const auto probe = float_membership(x, powers_of_two(), 100, make_rat(1, 1000));
        CHECK(probe.appears_member);
        for (std::uint64_t k = 3; k <= probe.horizon; ++k) CHECK(probe.distances[k] == 0);
        CHECK(probe.distances[0] != 0);
    }
    SUBCASE("sum of 2^(-j!) shrinks right at factorial indices") {
        // mantissa = sum over j! <= 256 of 2^(256 - j!)
        Int m = 0;
        for (unsigned long f : {1ul, 2ul, 6ul, 24ul, 120ul}) m += pow2(256 - f);
        const auto x = DyadicReal::from_mantissa(m, 256);
        const auto probe = float_membership(x, powers_of_two(), 40, make_rat(1, 1000));
        CHECK(probe.distances[5] >= make_rat(1, 4));
        CHECK(probe.distances[6] <= make_rat(1, 1024));
        CHECK(probe.distances[23] >= make_rat(1, 4));
        CHECK(probe.distances[24] <= make_rat(1, 1024));
    }
    SUBCASE("precision precondition refuses oversized horizons") {
        const auto x = DyadicReal::from_fraction(1, 3, 256);
        CHECK_THROWS_AS(float_membership(x, factorials(), 100, make_rat(1, 1000)), PrecisionError);
        try {
            float_membership(x, factorials(), 100, make_rat(1, 1000));
        } catch (const PrecisionError& e) {
            CHECK(e.required_bits > 256);
        }
        CHECK(max_admissible_horizon(factorials(), 256, 100) < 100);
        CHECK(max_admissible_horizon(powers_of_two(), 256, 100) == 100);
    }
}

TEST_CASE("float probe agrees with rational verdicts at sufficient precision") {
    for (std::uint64_t t = 0; t < 25; ++t) {
        const Int q(2 + static_cast<long>(rng::below(73, t, 0, 200)));
        const Int p(1 + static_cast<long>(rng::below(73, t, 1, 400)));
        const auto x = RationalPoint::make(p, q);
        const auto rational = rational_membership(x, powers_of_two());
        const auto probe = float_membership(DyadicReal::from_fraction(x.p, x.q, 512),
                                            powers_of_two(), 120, make_rat(1, 1000));
        if (rational.member) {
            CHECK(probe.appears_member);
        } else {
            // Non-member: some residue in every cycle period stays non-zero,
            // and its distance is at least 1/q > epsilon.
            CHECK_FALSE(probe.appears_member);
        }
    }
}

TEST_CASE("measure_probe estimates shrink with the constraint horizon") {
    const SequenceGen b = powers_of_two();
    const Rat eps = make_rat(1, 8);
    SUBCASE("no constraints") {
        const auto r = measure_probe(b, eps, 0, 2000, 5);
        CHECK(r.estimate == 1);
        REQUIRE(r.exact.has_value());
        CHECK(*r.exact == 1);
    }
    SUBCASE("single constraint has exact mass 2*eps") {
        const auto r = measure_probe(b, eps, 1, 40000, 20260809);
        REQUIRE(r.exact.has_value());
        CHECK(*r.exact == make_rat(1, 4));
        const double est = r.estimate.get_d();
        const double sigma = std::sqrt(0.25 * 0.75 / 40000.0);
        CHECK(std::abs(est - 0.25) <= 3.0 * sigma);
    }
    SUBCASE("nested events under common random numbers") {
        Rat prev(2);
        for (std::uint64_t k : {1, 2, 4, 8}) {
            const auto r = measure_probe(b, eps, k, 4000, 11);
            CHECK(r.estimate <= prev);
            prev = r.estimate;
        }
    }
    SUBCASE("deterministic across thread counts") {
        const auto a = measure_probe(b, eps, 4, 6000, 13, 0, 1);
        const auto c = measure_probe(b, eps, 4, 6000, 13, 0, 4);
        CHECK(a.estimate == c.estimate);
    }
}

TEST_CASE("rational point normalization") {
    const auto x = RationalPoint::make(10, 16);
    CHECK(x.p == 5);
    CHECK(x.q == 8);
    const auto wrapped = RationalPoint::make(9, 4);  // 9/4 wraps to 1/4 on the circle
    CHECK(wrapped.p == 1);
    CHECK(wrapped.q == 4);
    CHECK_THROWS_AS(RationalPoint::make(1, 0), PreconditionError);
}

TEST_CASE("dyadic construction") {
    CHECK(DyadicReal::from_decimal("0.5", 16).value() == make_rat(1, 2));
    CHECK(DyadicReal::from_decimal("0.25", 16).value() == make_rat(1, 4));
    CHECK_THROWS_AS(DyadicReal::from_decimal("0.2.5", 16), PreconditionError);
    CHECK_THROWS_AS(DyadicReal::from_decimal("abc", 16), PreconditionError);
    // Nearest-dyadic rounding stays within 2^-(bits+1).
    const auto x = DyadicReal::from_fraction(1, 3, 64);
    const Rat err = x.value() - make_rat(1, 3);
    CHECK(abs(err.get_num()) * pow2(65) <= err.get_den());
}
