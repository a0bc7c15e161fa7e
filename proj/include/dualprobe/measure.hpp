#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dualprobe/ints.hpp"
#include "dualprobe/support.hpp"

namespace dualprobe {

// Parameters of the open set O_{m,N} = {x : exists k >= m with
// |supp(x) ∩ k| / k >= 1/N}, truncated at the evaluation horizon.
struct OmnParams {
    OmnParams(Int m, Int n, Int horizon);
    Int m;        // >= 1
    Int n;        // N >= 2
    Int horizon;  // >= m
};

// WITNESS(k) = least m <= k <= horizon satisfying the density threshold;
// otherwise NOT_FOUND_UP_TO(horizon), which claims nothing beyond it.
struct InOVerdict {
    std::optional<Int> witness_k;
    Int searched_to;
    bool found() const { return witness_k.has_value(); }
};

InOVerdict in_O(const SupportSpec& x, const OmnParams& params);

// Constructive denseness of O_{m,N}: extend the given prefix by one-bits up
// to the smallest admissible k whose density reaches 1/N. The result is
// re-verified through in_O before being returned.
struct DenseExtension {
    SupportSpec support;  // explicit
    Int witness_k;
};

DenseExtension dense_extension(const std::vector<bool>& prefix, const OmnParams& params);

// P(Binomial(k, 1/2) >= t), exactly. Requires 0 <= t <= k+1.
Rat binomial_tail_exact(std::uint64_t k, std::uint64_t t);

struct HaarEvent {
    OmnParams params;
    bool complement = false;  // F_{m,N} side
};

struct EstimateReport {
    Rat estimate;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double std_error = 0.0;
    std::optional<Rat> exact;  // available for single-horizon events (m == horizon)
};

// Monte Carlo probability of the truncated O/F event under the uniform
// product measure, sampling length-horizon prefixes of independent fair bits.
// Counter-based randomness keyed on (seed, sample index) makes the result a
// pure function of (event, samples, seed), independent of worker count.
EstimateReport haar_estimate(const HaarEvent& event, std::uint64_t samples, std::uint64_t seed,
                             unsigned threads = 1);

// For each sample (which must carry a CERTIFIED_THIN verdict), the first grid
// cell whose in_O search fails, i.e. membership in F_{m,N} up to that cell's
// horizon; nullopt reports the grid/horizon as insufficient.
struct CoverAssignment {
    std::optional<std::size_t> cell;
};

std::vector<CoverAssignment> cover_check(std::span<const SupportSpec> samples,
                                         std::span<const OmnParams> grid);

}  // namespace dualprobe
