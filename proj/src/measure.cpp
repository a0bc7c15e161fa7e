#include "dualprobe/measure.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "dualprobe/errors.hpp"
#include "dualprobe/rng.hpp"

namespace dualprobe {
namespace {

constexpr std::uint64_t kMaxSampleHorizon = std::uint64_t{1} << 20;

}  // namespace

OmnParams::OmnParams(Int m_in, Int n_in, Int horizon_in)
    : m(std::move(m_in)), n(std::move(n_in)), horizon(std::move(horizon_in)) {
    if (m < 1) throw PreconditionError("O_{m,N}: m must be >= 1");
    if (n < 2) throw PreconditionError("O_{m,N}: N must be >= 2");
    if (horizon < m) throw PreconditionError("O_{m,N}: horizon must be >= m");
}

InOVerdict in_O(const SupportSpec& x, const OmnParams& params) {
    // f(k) = N*count_below(k) - k decreases strictly between support elements
    // and can only become non-negative at k = m or just past an element, so
    // those are the only candidates to test.
    std::vector<Int> candidates;
    candidates.push_back(params.m);
    x.elements_below(params.horizon, [&](const Int& e) {
        if (e + 1 > params.m) candidates.push_back(e + 1);
    });
    for (const Int& k : candidates) {
        if (k > params.horizon) break;
        if (params.n * x.count_below(k) >= k) return InOVerdict{k, params.horizon};
    }
    return InOVerdict{std::nullopt, params.horizon};
}

DenseExtension dense_extension(const std::vector<bool>& prefix, const OmnParams& params) {
    const Int len(static_cast<unsigned long>(prefix.size()));
    Int ones = 0;
    std::vector<Int> elements;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (prefix[i]) {
            ++ones;
            elements.emplace_back(static_cast<unsigned long>(i));
        }
    }
    // Least k >= max(m, len) with (ones + k - len) * N >= k, i.e.
    // k*(N-1) >= N*(len - ones).
    Int k = std::max(params.m, len);
    const Int needed = ceil_div(params.n * (len - ones), params.n - 1);
    k = std::max(k, needed);
    for (Int c = len; c < k; ++c) elements.push_back(c);

    DenseExtension ext{SupportSpec::explicit_set(std::move(elements)), k};
    const InOVerdict check = in_O(ext.support, OmnParams(params.m, params.n, k));
    if (!check.found() || *check.witness_k > k)
        throw std::logic_error("dense_extension: constructed support failed in_O verification");
    return ext;
}

Rat binomial_tail_exact(std::uint64_t k, std::uint64_t t) {
    if (t > k + 1) throw PreconditionError("binomial tail: need 0 <= t <= k+1");
    Int sum = 0;
    for (std::uint64_t j = t; j <= k; ++j) {
        Int c;
        mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
        sum += c;
    }
    return make_rat(sum, pow2(static_cast<unsigned long>(k)));
}

namespace {

// Does the sampled prefix (bits of (seed, index)) hit the truncated O event?
bool prefix_in_O(std::uint64_t seed, std::uint64_t index, std::uint64_t m, std::uint64_t n,
                 std::uint64_t horizon) {
    std::uint64_t count = 0;
    std::uint64_t block_word = 0;
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        const std::uint64_t b = k - 1;
        if ((b & 63) == 0) block_word = rng::word(seed, index, b >> 6);
        count += (block_word >> (b & 63)) & 1u;
        if (k >= m && n * count >= k) return true;
    }
    return false;
}

}  // namespace

EstimateReport haar_estimate(const HaarEvent& event, std::uint64_t samples, std::uint64_t seed,
                             unsigned threads) {
    if (samples < 1) throw PreconditionError("haar_estimate: samples must be >= 1");
    const std::uint64_t m = to_u64(event.params.m, "m");
    const std::uint64_t n = to_u64(event.params.n, "N");
    const std::uint64_t horizon = to_u64(event.params.horizon, "horizon");
    if (horizon > kMaxSampleHorizon)
        throw PreconditionError("haar_estimate: sampling horizon exceeds budget");

    const unsigned workers = threads == 0 ? 1 : threads;
    std::vector<std::uint64_t> hits(workers, 0);
    auto run = [&](unsigned w) {
        const std::uint64_t lo = samples * w / workers;
        const std::uint64_t hi = samples * (w + 1) / workers;
        std::uint64_t local = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const bool in_event = prefix_in_O(seed, i, m, n, horizon) != event.complement;
            local += in_event ? 1 : 0;
        }
        hits[w] = local;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    std::uint64_t total = 0;
    for (std::uint64_t h : hits) total += h;

    EstimateReport report;
    report.estimate = make_rat(Int(total), Int(samples));
    report.samples = samples;
    report.seed = seed;
    const double p = static_cast<double>(total) / static_cast<double>(samples);
    report.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    if (event.params.m == event.params.horizon) {
        // Single-horizon event: count at k = H meets the threshold iff
        // count >= ceil(H / N).
        const std::uint64_t t = to_u64(ceil_div(event.params.horizon, event.params.n), "threshold");
        Rat tail = binomial_tail_exact(horizon, t);
        report.exact = event.complement ? Rat(1) - tail : tail;
    }
    return report;
}

std::vector<CoverAssignment> cover_check(std::span<const SupportSpec> samples,
                                         std::span<const OmnParams> grid) {
    std::vector<CoverAssignment> out;
    out.reserve(samples.size());
    for (const SupportSpec& x : samples) {
        const Int probe_horizon = grid.empty() ? Int(1) : grid.front().horizon;
        if (thinness_report(x, probe_horizon).verdict != ThinVerdict::certified_thin)
            throw PreconditionError("cover_check: sample " + x.describe() +
                                    " lacks a CERTIFIED_THIN verdict");
        CoverAssignment a;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!in_O(x, grid[i]).found()) {
                a.cell = i;
                break;
            }
        }
        out.push_back(a);
    }
    return out;
}

}  // namespace dualprobe
