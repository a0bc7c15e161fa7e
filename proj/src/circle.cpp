#include "dualprobe/circle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <thread>

#include "dualprobe/errors.hpp"
#include "dualprobe/rng.hpp"

namespace dualprobe {
namespace {

constexpr std::uint64_t kResidueScanCap = 10'000'000;
constexpr std::uint64_t kStateSearchCap = std::uint64_t{1} << 21;
constexpr unsigned long kMaxSampleBits = 1ul << 14;

Int mod_pos(const Int& v, const Int& q) {
    Int r = v % q;
    if (r < 0) r += q;
    return r;
}

struct ResidueTrace {
    std::vector<Int> residues;  // residues 0 .. start+length-1
    std::uint64_t cycle_start = 0;
    std::uint64_t cycle_length = 0;
};

// Linear-map residue dynamics: the state determines its successor, so the
// first repeated state closes the cycle.
ResidueTrace trace_linear_states(const std::vector<Int>& init_state,
                                 const std::function<std::vector<Int>(const std::vector<Int>&)>& step) {
    ResidueTrace trace;
    std::map<std::vector<Int>, std::uint64_t> seen;
    std::vector<Int> state = init_state;
    for (std::uint64_t k = 0;; ++k) {
        auto [it, fresh] = seen.emplace(state, k);
        if (!fresh) {
            trace.cycle_start = it->second;
            trace.cycle_length = k - it->second;
            trace.residues.resize(k);
            return trace;
        }
        if (k >= trace.residues.size()) trace.residues.resize(k + 1);
        trace.residues[k] = state.front();
        if (k > kStateSearchCap)
            throw PreconditionError("residue state space too large for cycle detection");
        state = step(state);
    }
}

CircleMembership verdict_from_trace(ResidueTrace trace) {
    CircleMembership v;
    bool cycle_zero = true;
    for (std::uint64_t i = trace.cycle_start; i < trace.cycle_start + trace.cycle_length; ++i)
        cycle_zero = cycle_zero && trace.residues[i] == 0;

    if (cycle_zero) {
        v.member = true;
        Int last_nonzero(-1);
        for (std::uint64_t i = 0; i < trace.residues.size(); ++i)
            if (trace.residues[i] != 0) last_nonzero = Int(i);
        v.stabilization_index = last_nonzero + 1;
        return v;
    }
    v.member = false;
    ResidueCycle cycle;
    cycle.start = trace.cycle_start;
    cycle.length = trace.cycle_length;
    cycle.residues.assign(trace.residues.begin() + static_cast<std::ptrdiff_t>(trace.cycle_start),
                          trace.residues.end());
    v.cycle = std::move(cycle);
    return v;
}

}  // namespace

RationalPoint RationalPoint::make(const Int& p, const Int& q) {
    if (q < 1) throw PreconditionError("rational point: denominator must be >= 1");
    Int g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    Int pr = p / g, qr = q / g;
    pr = mod_pos(pr, qr);
    return RationalPoint{pr, qr};
}

bool ResidueCycle::all_zero() const {
    return std::all_of(residues.begin(), residues.end(), [](const Int& r) { return r == 0; });
}

CircleMembership rational_membership(const RationalPoint& x, const SequenceGen& b) {
    const Int& q = x.q;
    if (q == 1) {
        CircleMembership v;
        v.member = true;
        v.stabilization_index = 0;
        v.note = "identity point";
        return v;
    }
    const auto& family = b.seq().family();

    if (const auto* g = std::get_if<GeometricSeq>(&family)) {
        if (q > Int(kResidueScanCap))
            throw PreconditionError("denominator too large for cycle detection");
        const Int r = g->ratio;
        auto trace = trace_linear_states({mod_pos(g->scale, q)}, [&](const std::vector<Int>& s) {
            return std::vector<Int>{mod_pos(s[0] * r, q)};
        });
        return verdict_from_trace(std::move(trace));
    }
    if (const auto* rec = std::get_if<RecurrenceSeq>(&family)) {
        std::vector<Int> state;
        state.reserve(rec->initial.size());
        for (const Int& s : rec->initial) state.push_back(mod_pos(s, q));
        auto trace = trace_linear_states(state, [&](const std::vector<Int>& s) {
            const std::size_t d = rec->coeffs.size();
            Int next = 0;
            for (std::size_t t = 0; t < d; ++t) next += rec->coeffs[t] * s[d - 1 - t];
            std::vector<Int> out(s.begin() + 1, s.end());
            out.push_back(mod_pos(next, q));
            return out;
        });
        return verdict_from_trace(std::move(trace));
    }
    if (const auto* f = std::get_if<FactorialSeq>(&family)) {
        // (k + offset)! mod q reaches the absorbing residue 0 by k + offset = q.
        CircleMembership v;
        Int acc;
        mpz_fac_ui(acc.get_mpz_t(), f->offset);
        acc = mod_pos(acc, q);
        std::uint64_t k = 0;
        Int last_nonzero(-1);
        unsigned long factor = f->offset;
        while (acc != 0) {
            last_nonzero = Int(k);
            ++k;
            ++factor;
            acc = mod_pos(acc * Int(factor), q);
            if (Int(factor) > q + Int(f->offset) + 2)
                throw std::logic_error("factorial residues failed to vanish");
        }
        v.member = true;
        v.stabilization_index = last_nonzero + 1;
        return v;
    }
    if (std::get_if<PolynomialSeq>(&family)) {
        // P(k) mod q is periodic with period dividing q, so the sequence is
        // eventually zero iff it is identically zero mod q.
        if (q > Int(1'000'000))
            throw PreconditionError("denominator too large for polynomial residue scan");
        const std::uint64_t period = to_u64(q, "polynomial period");
        std::vector<Int> residues;
        residues.reserve(period);
        bool any_nonzero = false;
        for (std::uint64_t k = 0; k < period; ++k) {
            residues.push_back(b.term_mod(k, q));
            any_nonzero = any_nonzero || residues.back() != 0;
        }
        CircleMembership v;
        if (!any_nonzero) {
            v.member = true;
            v.stabilization_index = 0;
            return v;
        }
        v.member = false;
        v.cycle = ResidueCycle{0, period, std::move(residues)};
        return v;
    }
    // Explicit finite list: the tail condition is vacuous past the last term.
    const auto& terms = std::get<ExplicitSeq>(family).terms;
    CircleMembership v;
    Int last_nonzero(-1);
    for (std::size_t k = 0; k < terms.size(); ++k)
        if (mod_pos(terms[k], q) != 0) last_nonzero = Int(static_cast<unsigned long>(k));
    v.member = true;
    v.stabilization_index = last_nonzero + 1;
    v.note = "finite sequence: convergence is vacuous beyond the last term";
    return v;
}

bool verify_cycle(const SequenceGen& b, const Int& q, const ResidueCycle& cycle) {
    if (cycle.length == 0 || cycle.residues.size() < cycle.length) return false;
    for (std::uint64_t i = 0; i < cycle.residues.size(); ++i) {
        if (b.term_mod(cycle.start + i, q) != cycle.residues[i]) return false;
    }
    // One full period further: the cycle must reproduce itself.
    for (std::uint64_t i = 0; i < cycle.length; ++i) {
        if (b.term_mod(cycle.start + i + cycle.length, q) != cycle.residues[i]) return false;
    }
    return true;
}

DyadicReal DyadicReal::from_mantissa(Int mantissa, unsigned long bits) {
    if (bits < 1) throw PreconditionError("dyadic precision must be >= 1 bit");
    if (mantissa < 0 || mantissa >= pow2(bits))
        throw PreconditionError("dyadic mantissa out of [0, 2^bits)");
    return DyadicReal{std::move(mantissa), bits};
}

DyadicReal DyadicReal::from_fraction(const Int& p, const Int& q, unsigned long bits) {
    if (q < 1) throw PreconditionError("fraction denominator must be >= 1");
    Int pp = mod_pos(p, q);
    // Round to nearest; clamp at the open right edge of [0,1).
    Int m = (pp * pow2(bits) * 2 + q) / (q * 2);
    if (m >= pow2(bits)) m = pow2(bits) - 1;
    return from_mantissa(std::move(m), bits);
}

DyadicReal DyadicReal::from_decimal(const std::string& text, unsigned long bits) {
    std::string digits;
    std::size_t frac_len = 0;
    bool seen_dot = false;
    for (char c : text) {
        if (c == '.') {
            if (seen_dot) throw PreconditionError("malformed decimal: " + text);
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw PreconditionError("malformed decimal: " + text);
        digits += c;
        if (seen_dot) ++frac_len;
    }
    if (digits.empty()) throw PreconditionError("malformed decimal: " + text);
    Int num(digits, 10);
    Int den = 1;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    return from_fraction(num, den, bits);
}

Rat DyadicReal::value() const { return make_rat(mantissa, pow2(bits)); }

FloatProbe float_membership(const DyadicReal& x, const SequenceGen& b, std::uint64_t horizon,
                            const Rat& epsilon, unsigned long guard_bits) {
    if (epsilon <= 0 || epsilon >= 1) throw PreconditionError("epsilon must lie in (0,1)");
    std::uint64_t last = horizon;
    if (auto len = b.length()) {
        if (*len == 0) throw PreconditionError("empty sequence");
        last = std::min(last, *len - 1);
    }
    const Int n_last = b.term(last);
    const unsigned long required = bit_length(n_last) + guard_bits;
    if (x.bits < required) throw PrecisionError(required);

    FloatProbe probe;
    probe.horizon = last;
    probe.precision_bits = x.bits;
    probe.required_bits = required;
    const Int scale = pow2(x.bits);
    probe.distances.reserve(last + 1);
    probe.max_distance = Rat(0);
    for (std::uint64_t k = 0; k <= last; ++k) {
        Int frac = mod_pos(b.term(k) * x.mantissa, scale);
        Int comp = scale - frac;
        Int dist2 = std::min(frac, comp);
        Rat d = make_rat(dist2, scale);
        if (d > probe.max_distance) probe.max_distance = d;
        probe.distances.push_back(std::move(d));
    }
    probe.tail_start = last - last / 4;
    probe.tail_max = Rat(0);
    for (std::uint64_t k = probe.tail_start; k <= last; ++k)
        if (probe.distances[k] > probe.tail_max) probe.tail_max = probe.distances[k];
    probe.appears_member = probe.tail_max < epsilon;
    return probe;
}

std::uint64_t max_admissible_horizon(const SequenceGen& b, unsigned long precision_bits,
                                     std::uint64_t cap, unsigned long guard_bits) {
    std::uint64_t best = 0;
    bool any = false;
    std::uint64_t limit = cap;
    if (auto len = b.length()) {
        if (*len == 0) return 0;
        limit = std::min(limit, *len - 1);
    }
    for (std::uint64_t k = 0; k <= limit; ++k) {
        if (bit_length(b.term(k)) + guard_bits > precision_bits) break;
        best = k;
        any = true;
    }
    if (!any) throw PrecisionError(bit_length(b.term(0)) + guard_bits);
    return best;
}

EstimateReport measure_probe(const SequenceGen& b, const Rat& epsilon, std::uint64_t constraints,
                             std::uint64_t samples, std::uint64_t seed, unsigned long sample_bits,
                             unsigned threads) {
    if (samples < 1) throw PreconditionError("measure_probe: samples must be >= 1");
    if (epsilon <= 0 || epsilon >= make_rat(1, 2))
        throw PreconditionError("measure_probe: epsilon must lie in (0, 1/2)");
    std::uint64_t k_max = constraints;
    if (auto len = b.length()) {
        if (*len == 0) throw PreconditionError("empty sequence");
        k_max = std::min(k_max, *len - 1);
    }

    // Constraints run over k = 1..K; n_k can be huge, so the sampling grid
    // must outresolve the largest term.
    std::vector<Int> terms;
    for (std::uint64_t k = 1; k <= k_max; ++k) terms.push_back(b.term(k));
    unsigned long needed_bits = 64;
    for (const Int& t : terms) needed_bits = std::max(needed_bits, bit_length(t) + 16);
    if (sample_bits == 0) sample_bits = needed_bits;
    if (sample_bits < needed_bits) throw PrecisionError(needed_bits);
    if (sample_bits > kMaxSampleBits)
        throw PreconditionError("measure_probe: sampling resolution exceeds budget");

    const Int scale = pow2(sample_bits);
    const Int eps_num = epsilon.get_num(), eps_den = epsilon.get_den();
    const unsigned long words = (sample_bits + 63) / 64;

    const unsigned workers = threads == 0 ? 1 : threads;
    std::vector<std::uint64_t> hits(workers, 0);
    auto run = [&](unsigned w) {
        const std::uint64_t lo = samples * w / workers;
        const std::uint64_t hi = samples * (w + 1) / workers;
        std::uint64_t local = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            Int mantissa = 0;
            for (unsigned long blk = 0; blk < words; ++blk) {
                mantissa <<= 64;
                mantissa += Int(rng::word(seed, i, blk));
            }
            mantissa = mod_pos(mantissa, scale);
            bool inside = true;
            for (const Int& n : terms) {
                Int frac = mod_pos(n * mantissa, scale);
                Int comp = scale - frac;
                Int dist2 = std::min(frac, comp);
                // dist2/scale <= eps  <=>  dist2 * eps_den <= eps_num * scale
                if (dist2 * eps_den > eps_num * scale) {
                    inside = false;
                    break;
                }
            }
            local += inside ? 1 : 0;
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
    if (k_max == 0) {
        report.exact = Rat(1);
    } else if (k_max == 1) {
        report.exact = Rat(2) * epsilon;
    }
    return report;
}

}  // namespace dualprobe
