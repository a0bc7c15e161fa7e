#include "dualprobe/character.hpp"

#include <algorithm>

#include "dualprobe/errors.hpp"

namespace dualprobe {

Character Character::from_sorted(std::vector<Int> coords) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i] < 0)
            throw PreconditionError("character coordinate must be non-negative (position " +
                                    std::to_string(i) + ")");
        if (i > 0 && coords[i] <= coords[i - 1])
            throw PreconditionError("character coordinates must be strictly increasing (position " +
                                    std::to_string(i) + ")");
    }
    Character c;
    c.coords_ = std::move(coords);
    return c;
}

Character Character::from_elements(std::vector<Int> coords) {
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    return from_sorted(std::move(coords));
}

bool Character::contains(const Int& c) const {
    return std::binary_search(coords_.begin(), coords_.end(), c);
}

std::string Character::str() const {
    std::string out;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) out += ' ';
        out += coords_[i].get_str();
    }
    return out;
}

Character char_mul(const Character& a, const Character& b) {
    std::vector<Int> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.coords().begin(), a.coords().end(),
                                  b.coords().begin(), b.coords().end(),
                                  std::back_inserter(out));
    return Character::from_sorted(std::move(out));
}

Sign evaluate(const Character& chi, const SupportSpec& x) {
    std::size_t hits = 0;
    for (const Int& c : chi.coords())
        if (x.contains(c)) ++hits;
    return (hits % 2 == 0) ? Sign::plus : Sign::minus;
}

bool in_basic_nbhd(const Character& chi, std::span<const SupportSpec> points) {
    for (const SupportSpec& x : points)
        if (evaluate(chi, x) != Sign::plus) return false;
    return true;
}

}  // namespace dualprobe
