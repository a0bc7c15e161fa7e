#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dualprobe/character.hpp"
#include "dualprobe/ints.hpp"
#include "dualprobe/support.hpp"

namespace dualprobe {

// Pull-based character stream; returns nullopt when exhausted.
using CharacterSource = std::function<std::optional<Character>()>;

CharacterSource make_source(std::vector<Character> chars);

// A pivoted subsequence of an incoming character stream. Each accepted
// character contributes a pivot: the largest coordinate it does not share
// with any earlier accepted character. Pivots are gated to grow by at least
// growth_factor, which certifies that the pivot set is thin.
struct Selection {
    std::vector<std::size_t> indices;    // positions in the input stream
    std::vector<Character> characters;   // parallel to indices
    std::vector<Int> pivots;             // parallel, strictly increasing
    std::size_t skipped = 0;             // rejected input characters
    Rat growth_factor;
    bool exhausted = false;              // stream ended before target_count

    std::size_t count() const { return characters.size(); }
};

// Greedy scan. A candidate A is accepted when max(A \ union-of-accepted)
// exists and, past the first acceptance, is at least
// growth_factor * max(previous pivot, 1).
//
// Requires pairwise distinct, non-identity characters (DuplicateInputError /
// PreconditionError otherwise) and growth_factor >= 2. A stream that ends
// before target_count acceptances yields exhausted = true, which is a
// legitimate outcome for finite inputs.
Selection select_subsequence(const CharacterSource& source, std::size_t target_count,
                             const Rat& growth_factor);
Selection select_subsequence(std::span<const Character> chars, std::size_t target_count,
                             const Rat& growth_factor);

// Explicit finite element on which every selected character evaluates to -1.
struct WitnessElement {
    SupportSpec support;          // explicit; contained in the pivot set
    std::vector<Sign> verified;   // re-evaluated sign per selected character
};

// Stage n fixes the bits of A_n: non-pivot coordinates keep their previously
// frozen bit or default to +1, and the pivot bit is chosen to make the -1
// count over A_n odd. Coordinates are assigned exactly once; a second
// assignment indicates a corrupted Selection and throws logic_error.
WitnessElement build_witness(const Selection& selection);

struct Refutation {
    Selection selection;
    WitnessElement witness;
    Int horizon;                    // H for the density bound below
    Int pivot_count_below_horizon;  // count_below(K, H)
    Int density_bound_count;        // floor(log_growth(H)) + 1
    std::string note;               // set when the input was exhausted
};

// Composition of select_subsequence and build_witness, with the thinness
// certificate for the pivot set K evaluated at the given horizon.
Refutation refute_convergence(const CharacterSource& source, std::size_t max_select,
                              const Rat& growth_factor, const Int& horizon);
Refutation refute_convergence(std::span<const Character> chars, std::size_t max_select,
                              const Rat& growth_factor, const Int& horizon);

}  // namespace dualprobe
