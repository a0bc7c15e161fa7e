#include "dualprobe/witness.hpp"

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <utility>

#include "dualprobe/errors.hpp"

namespace dualprobe {

CharacterSource make_source(std::vector<Character> chars) {
    auto state = std::make_shared<std::pair<std::vector<Character>, std::size_t>>(std::move(chars), 0);
    return [state]() -> std::optional<Character> {
        if (state->second >= state->first.size()) return std::nullopt;
        return state->first[state->second++];
    };
}

Selection select_subsequence(const CharacterSource& source, std::size_t target_count,
                             const Rat& growth_factor) {
    if (growth_factor < 2) throw PreconditionError("growth factor must be >= 2");

    Selection sel;
    sel.growth_factor = growth_factor;
    std::set<Character> seen;
    std::set<Int> covered;  // union of accepted supports
    const Int gate_num = growth_factor.get_num();
    const Int gate_den = growth_factor.get_den();

    std::size_t index = 0;
    while (sel.count() < target_count) {
        std::optional<Character> next = source();
        if (!next) {
            sel.exhausted = true;
            break;
        }
        const Character a = std::move(*next);
        if (a.is_identity())
            throw PreconditionError("identity character in stream at index " + std::to_string(index));
        if (!seen.insert(a).second) throw DuplicateInputError(index);

        // Largest coordinate not covered by earlier selections.
        std::optional<Int> novel_max;
        const auto& coords = a.coords();
        for (std::size_t i = coords.size(); i-- > 0;) {
            if (!covered.count(coords[i])) {
                novel_max = coords[i];
                break;
            }
        }

        bool accept = false;
        if (novel_max) {
            if (sel.pivots.empty()) {
                accept = true;
            } else {
                const Int floor_prev = std::max(sel.pivots.back(), Int(1));
                accept = (*novel_max * gate_den >= gate_num * floor_prev);
            }
        }
        if (accept) {
            sel.indices.push_back(index);
            sel.characters.push_back(a);
            sel.pivots.push_back(*novel_max);
            for (const Int& c : a.coords()) covered.insert(c);
        } else {
            ++sel.skipped;
        }
        ++index;
    }
    return sel;
}

Selection select_subsequence(std::span<const Character> chars, std::size_t target_count,
                             const Rat& growth_factor) {
    return select_subsequence(make_source({chars.begin(), chars.end()}), target_count, growth_factor);
}

WitnessElement build_witness(const Selection& selection) {
    std::map<Int, Sign> bits;  // frozen once written

    for (std::size_t n = 0; n < selection.count(); ++n) {
        const Character& a = selection.characters[n];
        const Int& pivot = selection.pivots[n];

        std::size_t minus_count = 0;
        for (const Int& c : a.coords()) {
            if (c == pivot) continue;
            auto [it, inserted] = bits.emplace(c, Sign::plus);
            if (it->second == Sign::minus) ++minus_count;
        }
        auto [pit, fresh] = bits.emplace(pivot, Sign::plus);
        if (!fresh)
            throw std::logic_error("witness construction: pivot bit for coordinate " +
                                   pivot.get_str() + " was already assigned (invalid selection)");
        // Total -1 parity over A_n must come out odd.
        pit->second = (minus_count % 2 == 0) ? Sign::minus : Sign::plus;
    }

    std::vector<Int> support;
    for (const auto& [coord, sign] : bits)
        if (sign == Sign::minus) support.push_back(coord);

    WitnessElement w{SupportSpec::explicit_set(std::move(support)), {}};
    w.verified.reserve(selection.count());
    for (std::size_t n = 0; n < selection.count(); ++n) {
        const Sign s = evaluate(selection.characters[n], w.support);
        if (s != Sign::minus)
            throw std::logic_error("witness construction: selected character " + std::to_string(n) +
                                   " does not evaluate to -1");
        w.verified.push_back(s);
    }
    return w;
}

Refutation refute_convergence(const CharacterSource& source, std::size_t max_select,
                              const Rat& growth_factor, const Int& horizon) {
    if (horizon < 1) throw PreconditionError("horizon must be >= 1");
    Refutation r{select_subsequence(source, max_select, growth_factor), {}, horizon, 0, 0, {}};
    r.witness = build_witness(r.selection);

    const SupportSpec pivot_set = SupportSpec::explicit_set(r.selection.pivots);
    r.pivot_count_below_horizon = pivot_set.count_below(horizon);
    r.density_bound_count = floor_log(growth_factor, horizon) + 1;
    if (r.pivot_count_below_horizon > r.density_bound_count)
        throw std::logic_error("pivot density bound violated");
    if (r.selection.exhausted)
        r.note = "input exhausted after " + std::to_string(r.selection.count()) +
                 " selections; a finite character set cannot form a non-trivial convergent sequence";
    return r;
}

Refutation refute_convergence(std::span<const Character> chars, std::size_t max_select,
                              const Rat& growth_factor, const Int& horizon) {
    return refute_convergence(make_source({chars.begin(), chars.end()}), max_select, growth_factor,
                              horizon);
}

}  // namespace dualprobe
