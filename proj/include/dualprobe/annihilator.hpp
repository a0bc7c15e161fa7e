#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dualprobe/character.hpp"
#include "dualprobe/ints.hpp"
#include "dualprobe/support.hpp"

namespace dualprobe {

// Finite coordinate range {0,...,width-1}. A character supported inside the
// window meets any support only inside the window, so annihilator
// computations restricted to it are exact, not approximate.
struct Window {
    explicit Window(std::size_t w);
    std::size_t width;
};

// Basis of a GF(2) subspace of {0,1}^width, rows as strictly increasing
// coordinate lists. Bases are produced with deterministic pivoting (lowest
// coordinate first), so identical inputs give identical bases.
struct GF2Basis {
    std::size_t width = 0;
    std::vector<std::vector<std::size_t>> rows;
    std::size_t rank() const { return rows.size(); }
};

// Characters with support in the window that are trivial on every generator:
// kernel of the parity system whose rows are window-restricted indicators.
// An empty generator list yields the full space of rank `width`.
GF2Basis annihilator_of_elements(std::span<const SupportSpec> generators, Window window);

// Element-side annihilator: window bit-vectors killed by every listed
// character. Coordinates >= width are unconstrained, so each solution extends
// to elements of the full annihilator with arbitrary tails. Every character
// must have support inside the window (WindowError otherwise).
GF2Basis annihilator_of_characters(std::span<const Character> chars, Window window);

// Canonical reduced row echelon form of a GF(2) row set (zero rows dropped).
// Two row sets span the same subspace iff their reduced forms are equal.
std::vector<std::vector<std::size_t>> row_reduce(std::vector<std::vector<std::size_t>> rows,
                                                 std::size_t width);

// All 2^rank members of the subgroup generated by a basis (small widths).
std::vector<std::vector<std::size_t>> span_members(const GF2Basis& basis);

// A character sequence to probe pointwise: either an explicit list or the
// coordinate family A_n = {n}, whose minima tend to infinity.
class CharacterSequence {
public:
    static CharacterSequence coordinates();
    static CharacterSequence from_list(std::vector<Character> chars);

    Character at(std::uint64_t n) const;
    std::optional<std::uint64_t> size() const;
    bool min_tends_to_infinity() const;
    // First index from which every A_n avoids coordinates <= max_coord;
    // meaningful only when min_tends_to_infinity().
    Int disjoint_horizon(const Int& max_coord) const;

private:
    CharacterSequence() = default;
    bool coordinate_family_ = false;
    std::vector<Character> list_;
};

// STABILIZED(index): every probed evaluation from `index` on equals +1.
// The verdict is EXACT when a certificate extends it beyond the probed range:
// x has explicit finite support and the sequence's minima tend to infinity,
// so all characters past the certificate horizon miss the support entirely.
struct Stabilization {
    Int index;
    bool exact = false;
    std::uint64_t probed = 0;
    std::optional<Int> certificate_horizon;
};

Stabilization stabilization_index(const CharacterSequence& chars, const SupportSpec& x,
                                  std::uint64_t budget);

// Image of x under the diagonal product of a finite character list.
struct DiagonalImage {
    std::vector<Sign> signs;
    Stabilization stabilization;  // empirical for plain lists
};

DiagonalImage diagonal_image(std::span<const Character> chars, const SupportSpec& x);

// Number of distinct diagonal images over the sample; a lower bound for the
// cardinality of the image group.
std::size_t quotient_image_count(std::span<const Character> chars,
                                 std::span<const SupportSpec> sample);

// Per pair: index of the first character taking different values at the two
// points, or nullopt when the list separates nothing.
struct SeparationVerdict {
    std::optional<std::size_t> separator;
};

std::vector<SeparationVerdict> separating_check(
    std::span<const Character> chars,
    std::span<const std::pair<SupportSpec, SupportSpec>> pairs);

}  // namespace dualprobe
