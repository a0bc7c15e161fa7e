#pragma once

#include <span>
#include <string>
#include <vector>

#include "dualprobe/ints.hpp"
#include "dualprobe/support.hpp"

namespace dualprobe {

// Value of a character at a point: Z(2) as the subgroup {+1,-1} of the circle.
enum class Sign : int { plus = 1, minus = -1 };

constexpr Sign operator*(Sign a, Sign b) {
    return a == b ? Sign::plus : Sign::minus;
}
constexpr int to_int(Sign s) { return static_cast<int>(s); }

// A continuous character of a dense subgroup of Z(2)^omega: a finite set of
// coordinates acting by parity of intersection with the support. The empty
// set is the identity character.
class Character {
public:
    Character() = default;

    // Requires strictly increasing non-negative coordinates.
    static Character from_sorted(std::vector<Int> coords);
    // Sorts and deduplicates (a set of coordinates in any order).
    static Character from_elements(std::vector<Int> coords);

    bool is_identity() const { return coords_.empty(); }
    std::size_t size() const { return coords_.size(); }
    const std::vector<Int>& coords() const { return coords_; }
    bool contains(const Int& c) const;

    std::string str() const;  // space-separated coordinates

    friend bool operator==(const Character& a, const Character& b) { return a.coords_ == b.coords_; }
    friend bool operator<(const Character& a, const Character& b) { return a.coords_ < b.coords_; }

private:
    std::vector<Int> coords_;
};

// Pointwise product of characters = symmetric difference of coordinate sets.
Character char_mul(const Character& a, const Character& b);

// chi(x) = (-1)^{|chi ∩ supp(x)|}, by one membership query per coordinate.
Sign evaluate(const Character& chi, const SupportSpec& x);

// chi lies in the basic neighborhood O(x_1,...,x_n) of the identity iff it
// evaluates to +1 at every listed point (the arc V_1 meets {+1,-1} in {+1}).
bool in_basic_nbhd(const Character& chi, std::span<const SupportSpec> points);

}  // namespace dualprobe
