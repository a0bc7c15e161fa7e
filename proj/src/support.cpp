#include "dualprobe/support.hpp"

#include <algorithm>

#include "dualprobe/errors.hpp"

namespace dualprobe {
namespace {

constexpr unsigned long kPeriodicWalkCap = 1ul << 24;

std::size_t ones_below(const std::vector<bool>& bits, std::size_t stop) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < stop && i < bits.size(); ++i) count += bits[i] ? 1 : 0;
    return count;
}

}  // namespace

SupportSpec SupportSpec::explicit_set(std::vector<Int> elements) {
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i] < 0)
            throw PreconditionError("explicit support: negative coordinate at position " +
                                    std::to_string(i));
        if (i > 0 && elements[i] <= elements[i - 1])
            throw PreconditionError("explicit support: elements must be strictly increasing (position " +
                                    std::to_string(i) + ")");
    }
    return SupportSpec(Body(Explicit{std::move(elements)}));
}

SupportSpec SupportSpec::enumerated(MonotoneSequence::Family family) {
    if (std::holds_alternative<ExplicitSeq>(family))
        throw PreconditionError("enumerated supports take one of the infinite families");
    return SupportSpec(Body(Enumerated{MonotoneSequence(std::move(family), Int(0))}));
}

SupportSpec SupportSpec::periodic(std::vector<bool> prefix, std::vector<bool> pattern) {
    if (pattern.empty()) throw PreconditionError("periodic support: pattern must be non-empty");
    return SupportSpec(Body(Periodic{std::move(prefix), std::move(pattern)}));
}

SupportSpec::Kind SupportSpec::kind() const {
    switch (body_.index()) {
        case 0: return Kind::explicit_set;
        case 1: return Kind::enumerated;
        default: return Kind::periodic;
    }
}

bool SupportSpec::contains(const Int& n) const {
    if (n < 0) throw PreconditionError("membership index must be non-negative");
    if (const auto* e = std::get_if<Explicit>(&body_)) {
        return std::binary_search(e->elements.begin(), e->elements.end(), n);
    }
    if (const auto* g = std::get_if<Enumerated>(&body_)) {
        return g->seq.contains(n);
    }
    const auto& p = std::get<Periodic>(body_);
    const Int prefix_len(static_cast<unsigned long>(p.prefix.size()));
    if (n < prefix_len) return p.prefix[to_index(n, "periodic index")];
    const Int offset = n - prefix_len;
    const unsigned long at = mpz_fdiv_ui(offset.get_mpz_t(), static_cast<unsigned long>(p.pattern.size()));
    return p.pattern[at];
}

Int SupportSpec::count_below(const Int& k) const {
    if (k < 0) throw PreconditionError("count_below horizon must be non-negative");
    if (const auto* e = std::get_if<Explicit>(&body_)) {
        const auto it = std::lower_bound(e->elements.begin(), e->elements.end(), k);
        return Int(static_cast<unsigned long>(it - e->elements.begin()));
    }
    if (const auto* g = std::get_if<Enumerated>(&body_)) {
        return g->seq.count_below(k);
    }
    const auto& p = std::get<Periodic>(body_);
    const Int prefix_len(static_cast<unsigned long>(p.prefix.size()));
    if (k <= prefix_len)
        return Int(static_cast<unsigned long>(ones_below(p.prefix, to_index(k, "horizon"))));
    const std::size_t prefix_ones = ones_below(p.prefix, p.prefix.size());
    const std::size_t pattern_ones = ones_below(p.pattern, p.pattern.size());
    const Int tail = k - prefix_len;
    const unsigned long plen = static_cast<unsigned long>(p.pattern.size());
    Int full, rem;
    mpz_fdiv_qr_ui(full.get_mpz_t(), rem.get_mpz_t(), tail.get_mpz_t(), plen);
    return Int(static_cast<unsigned long>(prefix_ones)) +
           full * Int(static_cast<unsigned long>(pattern_ones)) +
           Int(static_cast<unsigned long>(ones_below(p.pattern, to_index(rem, "pattern rest"))));
}

void SupportSpec::elements_below(const Int& k, const std::function<void(const Int&)>& fn) const {
    if (const auto* e = std::get_if<Explicit>(&body_)) {
        for (const Int& v : e->elements) {
            if (v >= k) break;
            fn(v);
        }
        return;
    }
    if (const auto* g = std::get_if<Enumerated>(&body_)) {
        g->seq.terms_below(k, fn);
        return;
    }
    const auto& p = std::get<Periodic>(body_);
    if (k > Int(kPeriodicWalkCap))
        throw PreconditionError("periodic support enumeration horizon exceeds budget");
    const unsigned long stop = static_cast<unsigned long>(k.get_ui());
    const std::size_t plen = p.pattern.size();
    for (unsigned long n = 0; n < stop; ++n) {
        const bool on = n < p.prefix.size() ? p.prefix[n]
                                            : p.pattern[(n - p.prefix.size()) % plen];
        if (on) fn(Int(n));
    }
}

bool SupportSpec::finite() const {
    if (std::holds_alternative<Explicit>(body_)) return true;
    if (const auto* p = std::get_if<Periodic>(&body_))
        return ones_below(p->pattern, p->pattern.size()) == 0;
    return false;
}

std::optional<Int> SupportSpec::max_element() const {
    if (const auto* e = std::get_if<Explicit>(&body_)) {
        if (e->elements.empty()) return std::nullopt;
        return e->elements.back();
    }
    if (const auto* p = std::get_if<Periodic>(&body_)) {
        if (!finite()) return std::nullopt;
        for (std::size_t i = p->prefix.size(); i-- > 0;)
            if (p->prefix[i]) return Int(static_cast<unsigned long>(i));
        return std::nullopt;
    }
    return std::nullopt;
}

std::string SupportSpec::describe() const {
    if (const auto* e = std::get_if<Explicit>(&body_)) {
        std::string out = "explicit{";
        for (std::size_t i = 0; i < e->elements.size(); ++i) {
            if (i) out += ",";
            out += e->elements[i].get_str();
        }
        return out + "}";
    }
    if (const auto* g = std::get_if<Enumerated>(&body_)) {
        return std::string("enumerated/") + g->seq.family_name();
    }
    const auto& p = std::get<Periodic>(body_);
    return "periodic(prefix " + std::to_string(p.prefix.size()) + ", period " +
           std::to_string(p.pattern.size()) + ")";
}

std::vector<Rat> density_profile(const SupportSpec& x, std::span<const Int> checkpoints) {
    std::vector<Rat> out;
    out.reserve(checkpoints.size());
    for (const Int& k : checkpoints) {
        if (k < 1) throw PreconditionError("density checkpoint must be >= 1");
        out.push_back(make_rat(x.count_below(k), k));
    }
    return out;
}

ThinnessReport thinness_report(const SupportSpec& x, const Int& horizon) {
    if (horizon < 1) throw PreconditionError("thinness horizon must be >= 1");
    ThinnessReport report;

    if (x.finite()) {
        report.verdict = ThinVerdict::certified_thin;
        report.reason = "finite support";
        return report;
    }
    if (const auto* p = x.as_periodic()) {
        std::size_t ones = 0;
        for (bool b : p->pattern) ones += b ? 1 : 0;
        // finite() above already handled the all-zero pattern.
        report.verdict = ThinVerdict::not_thin;
        report.limit_density = make_rat(Int(static_cast<unsigned long>(ones)),
                                        Int(static_cast<unsigned long>(p->pattern.size())));
        report.reason = "periodic pattern keeps density bounded below";
        return report;
    }
    const auto& seq = x.as_enumerated()->seq;
    if (std::holds_alternative<GeometricSeq>(seq.family())) {
        report.verdict = ThinVerdict::certified_thin;
        report.reason = "geometric growth";
        return report;
    }
    if (std::holds_alternative<FactorialSeq>(seq.family())) {
        report.verdict = ThinVerdict::certified_thin;
        report.reason = "factorial growth";
        return report;
    }
    if (const auto* poly = std::get_if<PolynomialSeq>(&seq.family())) {
        if (poly->coeffs.size() >= 3) {
            report.verdict = ThinVerdict::certified_thin;
            report.reason = "polynomial growth of degree >= 2";
            return report;
        }
    }
    // Degree-one polynomials and recurrences: report densities, claim nothing.
    report.verdict = ThinVerdict::empirical;
    report.reason = "no growth certificate for this family";
    std::vector<Int> checkpoints;
    for (Int k = 1; k <= horizon; k *= 2) checkpoints.push_back(k);
    if (checkpoints.empty() || checkpoints.back() != horizon) checkpoints.push_back(horizon);
    const auto densities = density_profile(x, checkpoints);
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        report.profile.emplace_back(checkpoints[i], densities[i]);
    return report;
}

}  // namespace dualprobe
