#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "dualprobe/annihilator.hpp"
#include "dualprobe/errors.hpp"
#include "dualprobe/rng.hpp"

using namespace dualprobe;

namespace {

Character chr(std::vector<long> coords) {
    std::vector<Int> v(coords.begin(), coords.end());
    return Character::from_elements(std::move(v));
}

SupportSpec esupp(std::vector<long> coords) {
    std::vector<Int> v(coords.begin(), coords.end());
    std::sort(v.begin(), v.end());
    return SupportSpec::explicit_set(std::move(v));
}

// Brute-force annihilator oracle: every subset of the window with even
// intersection parity against every generator.
std::set<std::vector<std::size_t>> brute_annihilator(const std::vector<SupportSpec>& gens,
                                                     std::size_t width) {
    std::set<std::vector<std::size_t>> result;
    for (std::size_t mask = 0; mask < (std::size_t{1} << width); ++mask) {
        bool ok = true;
        for (const SupportSpec& g : gens) {
            std::size_t parity = 0;
            for (std::size_t c = 0; c < width; ++c)
                if ((mask >> c) & 1u) parity ^= g.contains(Int(static_cast<unsigned long>(c))) ? 1 : 0;
            if (parity) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<std::size_t> coords;
        for (std::size_t c = 0; c < width; ++c)
            if ((mask >> c) & 1u) coords.push_back(c);
        result.insert(coords);
    }
    return result;
}

}  // namespace

TEST_CASE("annihilator of elements: pinned instances") {
    SUBCASE("one generator meeting the window in {0,1}") {
        const std::vector<SupportSpec> gens{esupp({0, 1, 5})};  // 5 is outside the window
        const auto basis = annihilator_of_elements(gens, Window(3));
        CHECK(basis.rank() == 2);
        const auto members = span_members(basis);
        const std::set<std::vector<std::size_t>> got(members.begin(), members.end());
        const std::set<std::vector<std::size_t>> want{{}, {2}, {0, 1}, {0, 1, 2}};
        CHECK(got == want);
    }
    SUBCASE("no generators: the full window space") {
        const auto basis = annihilator_of_elements({}, Window(4));
        CHECK(basis.rank() == 4);
        CHECK(span_members(basis).size() == 16);
    }
    SUBCASE("all singletons force rank zero") {
        std::vector<SupportSpec> gens;
        for (long i = 0; i < 5; ++i) gens.push_back(esupp({i}));
        const auto basis = annihilator_of_elements(gens, Window(5));
        CHECK(basis.rank() == 0);
        CHECK(span_members(basis) == std::vector<std::vector<std::size_t>>{{}});
    }
}

TEST_CASE("annihilator of elements equals brute force on random windows") {
    for (std::uint64_t trial = 0; trial < 12; ++trial) {
        const std::size_t width = 1 + rng::below(41, trial, 0, 12);
        std::vector<SupportSpec> gens;
        const std::size_t gcount = rng::below(41, trial, 1, 4);
        for (std::size_t g = 0; g < gcount; ++g) {
            std::vector<Int> coords;
            for (std::size_t c = 0; c < width + 3; ++c)
                if (rng::bit(41, trial, 100 * (g + 1) + c))
                    coords.emplace_back(static_cast<unsigned long>(c));
            gens.push_back(SupportSpec::explicit_set(std::move(coords)));
        }
        const auto basis = annihilator_of_elements(gens, Window(width));
        const auto members = span_members(basis);
        CHECK(members.size() == (std::size_t{1} << basis.rank()));
        const std::set<std::vector<std::size_t>> got(members.begin(), members.end());
        CHECK(got == brute_annihilator(gens, width));
    }
}

TEST_CASE("annihilator of characters: pinned instances") {
    SUBCASE("single parity constraint") {
        const std::vector<Character> chars{chr({0, 1})};
        const auto basis = annihilator_of_characters(chars, Window(2));
        CHECK(basis.rank() == 1);
        CHECK(basis.rows == std::vector<std::vector<std::size_t>>{{0, 1}});
    }
    SUBCASE("no constraints") {
        const auto basis = annihilator_of_characters({}, Window(3));
        CHECK(basis.rank() == 3);
        CHECK(span_members(basis).size() == 8);
    }
    SUBCASE("triangular system pins everything") {
        const std::vector<Character> chars{chr({0}), chr({0, 1}), chr({1, 2})};
        const auto basis = annihilator_of_characters(chars, Window(3));
        CHECK(basis.rank() == 0);
    }
    SUBCASE("support outside the window is an error") {
        const std::vector<Character> chars{chr({5})};
        CHECK_THROWS_AS(annihilator_of_characters(chars, Window(3)), WindowError);
    }
}

TEST_CASE("rank duality and the double annihilator") {
    for (std::uint64_t trial = 0; trial < 12; ++trial) {
        const std::size_t width = 2 + rng::below(43, trial, 0, 9);
        std::vector<Character> chars;
        std::vector<std::vector<std::size_t>> char_rows;
        const std::size_t count = 1 + rng::below(43, trial, 1, 4);
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<Int> coords;
            std::vector<std::size_t> row;
            for (std::size_t c = 0; c < width; ++c)
                if (rng::bit(43, trial, 100 * (i + 1) + c)) {
                    coords.emplace_back(static_cast<unsigned long>(c));
                    row.push_back(c);
                }
            chars.push_back(Character::from_sorted(std::move(coords)));
            char_rows.push_back(std::move(row));
        }
        const std::size_t char_rank = row_reduce(char_rows, width).size();
        const auto basis = annihilator_of_characters(chars, Window(width));
        CHECK(basis.rank() == width - char_rank);

        // Double annihilator: solutions of the annihilator of the generators'
        // annihilator span the generators' window-restricted row space.
        std::vector<SupportSpec> gens;
        for (const auto& row : char_rows) {
            std::vector<Int> coords(row.begin(), row.end());
            gens.push_back(SupportSpec::explicit_set(std::move(coords)));
        }
        const auto ann = annihilator_of_elements(gens, Window(width));
        std::vector<Character> ann_chars;
        for (const auto& row : ann.rows) {
            std::vector<Int> coords(row.begin(), row.end());
            ann_chars.push_back(Character::from_sorted(std::move(coords)));
        }
        const auto dbl = annihilator_of_characters(ann_chars, Window(width));
        CHECK(row_reduce(dbl.rows, width) == row_reduce(char_rows, width));
    }
}

TEST_CASE("stabilization index against coordinate characters") {
    const auto seq = CharacterSequence::coordinates();
    SUBCASE("explicit support: exact with certificate") {
        const auto st = stabilization_index(seq, esupp({2, 5}), 10);
        CHECK(st.index == 6);
        CHECK(st.exact);
        REQUIRE(st.certificate_horizon.has_value());
        CHECK(*st.certificate_horizon == 6);
        // The certificate covers indices beyond the probed budget.
        for (std::uint64_t n = 10; n < 40; ++n)
            CHECK(evaluate(seq.at(n), esupp({2, 5})) == Sign::plus);
    }
    SUBCASE("identity element stabilizes immediately") {
        const auto st = stabilization_index(seq, esupp({}), 4);
        CHECK(st.index == 0);
        CHECK(st.exact);
    }
    SUBCASE("budget below the certificate horizon downgrades to empirical") {
        const auto st = stabilization_index(seq, esupp({2, 5}), 4);
        CHECK(st.index == 3);  // last -1 seen at n=2 within the probed range
        CHECK_FALSE(st.exact);
    }
    SUBCASE("infinite support never earns a certificate") {
        const auto geo = SupportSpec::enumerated(GeometricSeq{Int(1), Int(2)});
        const auto st = stabilization_index(seq, geo, 64);
        CHECK(st.index == 33);  // last power of two below 64 is 32
        CHECK_FALSE(st.exact);
        CHECK(st.probed == 64);
    }
}

TEST_CASE("diagonal image and its annotations") {
    SUBCASE("identity maps to all +1") {
        const std::vector<Character> chars{chr({0}), chr({1}), chr({7})};
        const auto img = diagonal_image(chars, esupp({}));
        for (Sign s : img.signs) CHECK(s == Sign::plus);
        CHECK(img.stabilization.index == 0);
    }
    SUBCASE("coordinate read-off") {
        const std::vector<Character> chars{chr({0}), chr({1}), chr({2})};
        const auto img = diagonal_image(chars, esupp({1}));
        CHECK(img.signs == std::vector<Sign>{Sign::plus, Sign::minus, Sign::plus});
        CHECK(img.stabilization.index == 2);
        CHECK_FALSE(img.stabilization.exact);
    }
    SUBCASE("even intersections everywhere") {
        const std::vector<Character> chars{chr({0, 1}), chr({1, 2})};
        const auto img = diagonal_image(chars, esupp({0, 1, 2}));
        CHECK(img.signs == std::vector<Sign>{Sign::plus, Sign::plus});
    }
}

TEST_CASE("diagonal image is a homomorphism in x") {
    std::vector<Character> chars;
    for (std::uint64_t i = 0; i < 6; ++i) {
        std::vector<Int> coords;
        for (std::size_t c = 0; c < 16; ++c)
            if (rng::bit(45, i, c)) coords.emplace_back(static_cast<unsigned long>(c));
        if (coords.empty()) coords.emplace_back(static_cast<unsigned long>(i));
        chars.push_back(Character::from_sorted(std::move(coords)));
    }
    for (std::uint64_t t = 0; t < 40; ++t) {
        std::vector<Int> xa, xb;
        for (std::size_t c = 0; c < 16; ++c) {
            if (rng::bit(46, t, c)) xa.emplace_back(static_cast<unsigned long>(c));
            if (rng::bit(47, t, c)) xb.emplace_back(static_cast<unsigned long>(c));
        }
        std::vector<Int> sym;
        std::set_symmetric_difference(xa.begin(), xa.end(), xb.begin(), xb.end(),
                                      std::back_inserter(sym));
        const auto ia = diagonal_image(chars, SupportSpec::explicit_set(xa));
        const auto ib = diagonal_image(chars, SupportSpec::explicit_set(xb));
        const auto ip = diagonal_image(chars, SupportSpec::explicit_set(sym));
        for (std::size_t i = 0; i < chars.size(); ++i)
            CHECK(ip.signs[i] == ia.signs[i] * ib.signs[i]);
    }
}

TEST_CASE("quotient image counting") {
    const std::vector<SupportSpec> sample{esupp({}), esupp({0}), esupp({1})};
    CHECK(quotient_image_count(std::vector<Character>{chr({0})}, sample) == 2);
    CHECK(quotient_image_count({}, sample) == 1);

    const std::vector<SupportSpec> all_four{esupp({}), esupp({0}), esupp({1}), esupp({0, 1})};
    CHECK(quotient_image_count(std::vector<Character>{chr({0}), chr({1})}, all_four) == 4);
}

TEST_CASE("separating checks") {
    const std::vector<Character> chars{chr({0})};
    std::vector<std::pair<SupportSpec, SupportSpec>> pairs;
    pairs.emplace_back(esupp({0}), esupp({}));
    pairs.emplace_back(esupp({1}), esupp({2}));
    pairs.emplace_back(esupp({1, 3}), esupp({1, 3}));
    const auto verdicts = separating_check(chars, pairs);
    REQUIRE(verdicts.size() == 3);
    CHECK(verdicts[0].separator == 0);
    CHECK_FALSE(verdicts[1].separator.has_value());
    CHECK_FALSE(verdicts[2].separator.has_value());
}
