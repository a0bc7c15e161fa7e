#include <doctest.h>

#include <cmath>
#include <vector>

#include "dualprobe/errors.hpp"
#include "dualprobe/measure.hpp"
#include "dualprobe/rng.hpp"

using namespace dualprobe;

namespace {

SupportSpec esupp(std::vector<long> coords) {
    std::vector<Int> v(coords.begin(), coords.end());
    return SupportSpec::explicit_set(std::move(v));
}

// Pascal-triangle oracle for binomial tails.
Rat pascal_tail(std::uint64_t k, std::uint64_t t) {
    std::vector<Int> row{Int(1)};
    for (std::uint64_t i = 1; i <= k; ++i) {
        std::vector<Int> next(i + 1, Int(0));
        for (std::uint64_t j = 0; j <= i; ++j) {
            if (j > 0) next[j] += row[j - 1];
            if (j < i) next[j] += row[j];
        }
        row = std::move(next);
    }
    Int sum = 0;
    for (std::uint64_t j = t; j <= k; ++j) sum += row[j];
    return make_rat(sum, pow2(static_cast<unsigned long>(k)));
}

}  // namespace

TEST_CASE("in_O finds the least admissible horizon") {
    CHECK(*in_O(SupportSpec::periodic({}, {true}), OmnParams(1, 2, 4)).witness_k == 1);
    CHECK_FALSE(in_O(esupp({}), OmnParams(1, 2, 64)).found());
    CHECK(*in_O(esupp({0, 1, 2, 3}), OmnParams(2, 2, 8)).witness_k == 2);

    // Least k, not just any: density of {4,5,6,7} first reaches 1/2 at k=8.
    CHECK(*in_O(esupp({4, 5, 6, 7}), OmnParams(1, 2, 16)).witness_k == 8);
    // Boundary: geometric support has density exactly 1/4 at k=16.
    const auto geo = SupportSpec::enumerated(GeometricSeq{Int(1), Int(2)});
    CHECK(*in_O(geo, OmnParams(16, 4, 1 << 16)).witness_k == 16);
    CHECK_FALSE(in_O(geo, OmnParams(32, 4, 1 << 16)).found());
}

TEST_CASE("in_O monotonicity in m") {
    for (std::uint64_t t = 0; t < 60; ++t) {
        std::vector<Int> coords;
        for (std::size_t c = 0; c < 48; ++c)
            if (rng::bit(61, t, c)) coords.emplace_back(static_cast<unsigned long>(c));
        const auto x = SupportSpec::explicit_set(std::move(coords));
        const Int n(2 + static_cast<long>(rng::below(61, t, 100, 3)));
        const auto later = in_O(x, OmnParams(8, n, 64));
        const auto earlier = in_O(x, OmnParams(2, n, 64));
        if (later.found()) {
            CHECK(earlier.found());
            CHECK(*earlier.witness_k <= *later.witness_k);
        }
    }
}

TEST_CASE("dense_extension constructs verified witnesses") {
    SUBCASE("all-zero prefix needs half the horizon") {
        const auto ext = dense_extension({false, false, false, false}, OmnParams(1, 2, 8));
        CHECK(ext.witness_k == 8);
        CHECK(ext.support.as_explicit()->elements ==
              std::vector<Int>{Int(4), Int(5), Int(6), Int(7)});
    }
    SUBCASE("already dense prefix") {
        const auto ext = dense_extension({true}, OmnParams(1, 2, 4));
        CHECK(ext.witness_k == 1);
        CHECK(ext.support.as_explicit()->elements == std::vector<Int>{Int(0)});
    }
    SUBCASE("empty prefix fills up to m") {
        const auto ext = dense_extension({}, OmnParams(3, 3, 4));
        CHECK(ext.witness_k == 3);
        CHECK(ext.support.as_explicit()->elements == std::vector<Int>{Int(0), Int(1), Int(2)});
    }
    SUBCASE("random prefixes always verify") {
        for (std::uint64_t t = 0; t < 80; ++t) {
            std::vector<bool> prefix;
            const std::uint64_t len = rng::below(62, t, 0, 40);
            for (std::uint64_t i = 0; i < len; ++i) prefix.push_back(rng::bit(62, t, 1 + i));
            const Int m(1 + static_cast<long>(rng::below(62, t, 200, 16)));
            const Int n(2 + static_cast<long>(rng::below(62, t, 201, 3)));
            const auto ext = dense_extension(prefix, OmnParams(m, n, m));
            const auto verdict = in_O(ext.support, OmnParams(m, n, ext.witness_k));
            REQUIRE(verdict.found());
            CHECK(*verdict.witness_k <= ext.witness_k);
            // The extension leaves the prefix untouched.
            for (std::size_t i = 0; i < prefix.size(); ++i)
                CHECK(ext.support.contains(Int(static_cast<unsigned long>(i))) == prefix[i]);
        }
    }
}

TEST_CASE("binomial tails are exact") {
    CHECK(binomial_tail_exact(16, 4) == Rat(1) - make_rat(697, 65536));
    CHECK(binomial_tail_exact(12, 0) == 1);
    CHECK(binomial_tail_exact(2, 2) == make_rat(1, 4));
    CHECK(binomial_tail_exact(5, 6) == 0);
    for (std::uint64_t k = 0; k <= 16; ++k)
        for (std::uint64_t t = 0; t <= k + 1; ++t) CHECK(binomial_tail_exact(k, t) == pascal_tail(k, t));
    CHECK_THROWS_AS(binomial_tail_exact(4, 6), PreconditionError);
}

TEST_CASE("haar_estimate is a pure function of (event, samples, seed)") {
    const HaarEvent event{OmnParams(4, 2, 32), false};
    const auto a = haar_estimate(event, 5000, 99);
    const auto b = haar_estimate(event, 5000, 99);
    CHECK(a.estimate == b.estimate);
    const auto c = haar_estimate(event, 5000, 99, 4);
    CHECK(a.estimate == c.estimate);
    const auto d = haar_estimate(event, 5000, 100);
    CHECK(a.estimate != d.estimate);  // different seed, different draw (generic)
}

TEST_CASE("haar_estimate matches the exact binomial oracle at a single horizon") {
    // Complement event: prefix-16 density <= 3/16, exact mass 697/65536.
    const HaarEvent event{OmnParams(16, 4, 16), true};
    const auto report = haar_estimate(event, 40000, 20260809);
    REQUIRE(report.exact.has_value());
    CHECK(*report.exact == make_rat(697, 65536));
    const double est = report.estimate.get_d();
    const double exact = report.exact->get_d();
    const double sigma = std::sqrt(exact * (1.0 - exact) / 40000.0);
    CHECK(std::abs(est - exact) <= 3.0 * sigma);
}

TEST_CASE("event inclusion: the full F event is rarer than its single-horizon shadow") {
    // F_{1,2} truncated at 32 sits inside {density at 32 < 1/2}.
    const auto f = haar_estimate(HaarEvent{OmnParams(1, 2, 32), true}, 30000, 7);
    const Rat single = Rat(1) - binomial_tail_exact(32, 16);
    CHECK(f.estimate < single);
}

TEST_CASE("cover_check assigns certified-thin supports") {
    std::vector<OmnParams> grid{OmnParams(16, 4, 1 << 16), OmnParams(32, 4, 1 << 16)};
    SUBCASE("geometric support needs the wider cell") {
        const std::vector<SupportSpec> samples{SupportSpec::enumerated(GeometricSeq{Int(1), Int(2)})};
        const auto a = cover_check(samples, grid);
        REQUIRE(a.size() == 1);
        CHECK(a[0].cell == 1);  // density is exactly 1/4 at k=16, so cell 0 fails
    }
    SUBCASE("empty support lands in the first cell") {
        const std::vector<SupportSpec> samples{esupp({})};
        const auto a = cover_check(samples, grid);
        CHECK(a[0].cell == 0);
    }
    SUBCASE("factorial support") {
        std::vector<OmnParams> fgrid{OmnParams(8, 8, 100000), OmnParams(64, 8, 100000)};
        const std::vector<SupportSpec> samples{SupportSpec::enumerated(FactorialSeq{1})};
        CHECK(*in_O(samples[0], fgrid[0]).witness_k == 8);  // dense early: 1,2,6 below 8
        const auto a = cover_check(samples, fgrid);
        CHECK(a[0].cell == 1);
    }
    SUBCASE("non-certified samples are rejected") {
        const std::vector<SupportSpec> samples{SupportSpec::periodic({}, {true, false})};
        CHECK_THROWS_AS(cover_check(samples, grid), PreconditionError);
    }
    SUBCASE("insufficient grid is reported, not claimed") {
        const std::vector<SupportSpec> dense{esupp({0, 1, 2, 3, 4, 5, 6, 7})};
        std::vector<OmnParams> tight{OmnParams(1, 8, 8)};
        const auto a = cover_check(dense, tight);
        CHECK_FALSE(a[0].cell.has_value());
    }
}

TEST_CASE("thin corpus is covered by a large enough grid") {
    std::vector<SupportSpec> corpus;
    corpus.push_back(SupportSpec::enumerated(GeometricSeq{Int(1), Int(2)}));
    corpus.push_back(SupportSpec::enumerated(GeometricSeq{Int(3), Int(2)}));
    corpus.push_back(SupportSpec::enumerated(GeometricSeq{Int(1), Int(3)}));
    corpus.push_back(SupportSpec::enumerated(FactorialSeq{1}));
    corpus.push_back(SupportSpec::enumerated(FactorialSeq{3}));
    corpus.push_back(SupportSpec::enumerated(PolynomialSeq{{Int(0), Int(0), Int(1)}}));
    corpus.push_back(SupportSpec::enumerated(PolynomialSeq{{Int(2), Int(1), Int(0), Int(1)}}));
    corpus.push_back(esupp({3, 50, 1000}));
    std::vector<OmnParams> grid;
    for (long m : {64, 256, 1024, 4096}) grid.emplace_back(Int(m), Int(4), Int(1 << 16));
    for (const auto& a : cover_check(corpus, grid)) CHECK(a.cell.has_value());
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(OmnParams(0, 2, 4), PreconditionError);
    CHECK_THROWS_AS(OmnParams(1, 1, 4), PreconditionError);
    CHECK_THROWS_AS(OmnParams(4, 2, 2), PreconditionError);
    CHECK_THROWS_AS(haar_estimate(HaarEvent{OmnParams(1, 2, 8), false}, 0, 1), PreconditionError);
}
