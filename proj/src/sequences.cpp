#include "dualprobe/sequences.hpp"

#include <algorithm>
#include <utility>

#include "dualprobe/errors.hpp"

namespace dualprobe {
namespace {

// Iteration budget for families without a closed form (recurrences) and a
// sanity cap for galloping searches.
constexpr std::uint64_t kIterationCap = std::uint64_t{1} << 22;
constexpr std::uint64_t kMonotonicityCheckCap = std::uint64_t{1} << 20;

Int eval_poly(const std::vector<Int>& coeffs, const Int& x) {
    Int acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Int eval_poly_mod(const std::vector<Int>& coeffs, const Int& x, const Int& q) {
    Int acc = 0;
    const Int xm = x % q;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc * xm + *it) % q;
    if (acc < 0) acc += q;
    return acc;
}

// Difference polynomial Q(j) = P(j+1) - P(j), coefficients by binomial expansion.
std::vector<Int> difference_poly(const std::vector<Int>& p) {
    if (p.size() <= 1) return {};
    std::vector<Int> q(p.size() - 1, Int(0));
    // (j+1)^i = sum_{t<=i} C(i,t) j^t; the j^i term cancels against -P(j).
    for (std::size_t i = 1; i < p.size(); ++i) {
        for (std::size_t t = 0; t < i; ++t) {
            Int c;
            mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(i), static_cast<unsigned long>(t));
            q[t] += p[i] * c;
        }
    }
    return q;
}

void validate_polynomial(const PolynomialSeq& poly, const Int& min_first) {
    const auto& p = poly.coeffs;
    if (p.empty() || p.size() < 2)
        throw PreconditionError("polynomial family requires degree >= 1");
    if (p.back() == 0) throw PreconditionError("polynomial leading coefficient must be non-zero");
    if (p.back() < 0) throw PreconditionError("polynomial leading coefficient must be positive");
    if (eval_poly(p, 0) < min_first)
        throw PreconditionError("polynomial first term below required minimum " + min_first.get_str());

    const std::vector<Int> q = difference_poly(p);
    // Q must be positive for every integer j >= 0. Beyond the Cauchy bound of
    // Q's roots the positive leading coefficient decides; below it we check
    // each integer point.
    if (q.back() <= 0) throw PreconditionError("polynomial is eventually decreasing");
    Int bound = 1;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        Int candidate = 1 + ceil_div(abs(q[i]), q.back());
        bound = std::max(bound, candidate);
    }
    if (bound > Int(static_cast<unsigned long>(kMonotonicityCheckCap)))
        throw PreconditionError("polynomial monotonicity check exceeds budget (root bound " +
                                bound.get_str() + ")");
    const std::uint64_t stop = to_u64(bound, "polynomial root bound");
    for (std::uint64_t j = 0; j <= stop; ++j) {
        if (eval_poly(q, Int(j)) <= 0)
            throw PreconditionError("polynomial not strictly increasing at j=" + std::to_string(j));
    }
}

}  // namespace

MonotoneSequence::MonotoneSequence(Family family, const Int& min_first) : family_(std::move(family)) {
    if (const auto* g = std::get_if<GeometricSeq>(&family_)) {
        if (g->scale < 1) throw PreconditionError("geometric scale must be >= 1");
        if (g->ratio < 2) throw PreconditionError("geometric ratio must be >= 2");
        if (g->scale < min_first)
            throw PreconditionError("geometric first term below required minimum " + min_first.get_str());
    } else if (const auto* p = std::get_if<PolynomialSeq>(&family_)) {
        validate_polynomial(*p, min_first);
    } else if (const auto* f = std::get_if<FactorialSeq>(&family_)) {
        // offset 0 would start 0!, 1! = 1, 1 and repeat.
        if (f->offset < 1)
            throw PreconditionError("factorial offset must be >= 1 for strict monotonicity");
    } else if (const auto* r = std::get_if<RecurrenceSeq>(&family_)) {
        if (r->coeffs.empty()) throw PreconditionError("recurrence needs at least one coefficient");
        if (r->initial.size() != r->coeffs.size())
            throw PreconditionError("recurrence initial terms must match the order");
        for (std::size_t i = 0; i < r->initial.size(); ++i) {
            if (r->initial[i] < min_first)
                throw PreconditionError("recurrence initial term below required minimum " +
                                        min_first.get_str());
            if (i > 0 && r->initial[i] <= r->initial[i - 1])
                throw PreconditionError("recurrence initial terms must be strictly increasing");
        }
    } else if (const auto* e = std::get_if<ExplicitSeq>(&family_)) {
        for (std::size_t i = 0; i < e->terms.size(); ++i) {
            if (e->terms[i] < min_first)
                throw PreconditionError("explicit term below required minimum " + min_first.get_str());
            if (i > 0 && e->terms[i] <= e->terms[i - 1])
                throw PreconditionError("explicit terms must be strictly increasing (position " +
                                        std::to_string(i) + ")");
        }
    }
}

const char* MonotoneSequence::family_name() const {
    switch (family_.index()) {
        case 0: return "geometric";
        case 1: return "polynomial";
        case 2: return "factorial";
        case 3: return "recurrence";
        default: return "explicit";
    }
}

std::optional<std::uint64_t> MonotoneSequence::length() const {
    if (const auto* e = std::get_if<ExplicitSeq>(&family_)) return e->terms.size();
    return std::nullopt;
}

Int MonotoneSequence::term(std::uint64_t j) const {
    if (const auto* g = std::get_if<GeometricSeq>(&family_)) {
        Int p;
        mpz_pow_ui(p.get_mpz_t(), g->ratio.get_mpz_t(), static_cast<unsigned long>(j));
        return g->scale * p;
    }
    if (const auto* p = std::get_if<PolynomialSeq>(&family_)) {
        return eval_poly(p->coeffs, Int(j));
    }
    if (const auto* f = std::get_if<FactorialSeq>(&family_)) {
        Int v;
        mpz_fac_ui(v.get_mpz_t(), static_cast<unsigned long>(j) + f->offset);
        return v;
    }
    if (const auto* r = std::get_if<RecurrenceSeq>(&family_)) {
        const std::size_t d = r->coeffs.size();
        if (j < d) return r->initial[j];
        if (j > kIterationCap)
            throw PreconditionError("recurrence term index exceeds iteration budget");
        std::vector<Int> window(r->initial);
        Int prev = window.back();
        for (std::uint64_t i = d; i <= j; ++i) {
            Int next = 0;
            for (std::size_t t = 0; t < d; ++t) next += r->coeffs[t] * window[d - 1 - t];
            if (next <= prev)
                throw PreconditionError("recurrence not strictly increasing at term " +
                                        std::to_string(i));
            std::rotate(window.begin(), window.begin() + 1, window.end());
            window.back() = next;
            prev = next;
        }
        return prev;
    }
    const auto& terms = std::get<ExplicitSeq>(family_).terms;
    if (j >= terms.size()) throw PreconditionError("explicit sequence index out of range");
    return terms[j];
}

bool MonotoneSequence::contains(const Int& n) const {
    if (const auto* g = std::get_if<GeometricSeq>(&family_)) {
        if (n < g->scale) return false;
        if (n % g->scale != 0) return false;
        Int m = n / g->scale;
        while (m % g->ratio == 0) m /= g->ratio;
        return m == 1;
    }
    if (const auto* p = std::get_if<PolynomialSeq>(&family_)) {
        if (n < eval_poly(p->coeffs, 0)) return false;
        std::uint64_t lo = 0, hi = 1;
        while (term(hi) < n) {
            lo = hi;
            hi *= 2;
            if (hi > kIterationCap) throw PreconditionError("polynomial search exceeds budget");
        }
        while (lo < hi) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            if (term(mid) < n) lo = mid + 1; else hi = mid;
        }
        return term(lo) == n;
    }
    if (const auto* f = std::get_if<FactorialSeq>(&family_)) {
        Int v;
        mpz_fac_ui(v.get_mpz_t(), f->offset);
        unsigned long next = f->offset + 1;
        while (v < n) {
            v *= static_cast<unsigned long>(next);
            ++next;
        }
        return v == n;
    }
    if (std::get_if<RecurrenceSeq>(&family_)) {
        bool found = false;
        terms_below(n + 1, [&](const Int& t) { found = found || t == n; });
        return found;
    }
    const auto& terms = std::get<ExplicitSeq>(family_).terms;
    return std::binary_search(terms.begin(), terms.end(), n);
}

Int MonotoneSequence::count_below(const Int& k) const {
    if (const auto* p = std::get_if<PolynomialSeq>(&family_)) {
        // Least j with P(j) >= k by galloping + binary search; that j is the
        // count. Stays exact for horizons far beyond any walkable range.
        if (k <= eval_poly(p->coeffs, 0)) return 0;
        Int lo = 0, hi = 1;
        while (eval_poly(p->coeffs, hi) < k) {
            lo = hi;
            hi *= 2;
        }
        while (lo < hi) {
            Int mid = lo + (hi - lo) / 2;
            if (eval_poly(p->coeffs, mid) < k) lo = mid + 1; else hi = mid;
        }
        return lo;
    }
    Int count = 0;
    terms_below(k, [&](const Int&) { ++count; });
    return count;
}

void MonotoneSequence::terms_below(const Int& k, const std::function<void(const Int&)>& fn) const {
    if (const auto* g = std::get_if<GeometricSeq>(&family_)) {
        Int v = g->scale;
        while (v < k) {
            fn(v);
            v *= g->ratio;
        }
        return;
    }
    if (const auto* p = std::get_if<PolynomialSeq>(&family_)) {
        // Binary search would do for counting, but callers also want the
        // terms themselves; the walk is at most k^(1/deg) steps.
        std::uint64_t j = 0;
        Int v = eval_poly(p->coeffs, 0);
        while (v < k) {
            fn(v);
            ++j;
            if (j > kIterationCap) throw PreconditionError("polynomial enumeration exceeds budget");
            v = eval_poly(p->coeffs, Int(j));
        }
        return;
    }
    if (const auto* f = std::get_if<FactorialSeq>(&family_)) {
        Int v;
        mpz_fac_ui(v.get_mpz_t(), f->offset);
        unsigned long next = f->offset + 1;
        while (v < k) {
            fn(v);
            v *= static_cast<unsigned long>(next);
            ++next;
        }
        return;
    }
    if (const auto* r = std::get_if<RecurrenceSeq>(&family_)) {
        const std::size_t d = r->coeffs.size();
        std::vector<Int> window(r->initial);
        for (std::size_t i = 0; i < d; ++i) {
            if (window[i] >= k) return;
            fn(window[i]);
        }
        Int prev = window.back();
        for (std::uint64_t steps = 0;; ++steps) {
            if (steps > kIterationCap) throw PreconditionError("recurrence enumeration exceeds budget");
            Int next = 0;
            for (std::size_t t = 0; t < d; ++t) next += r->coeffs[t] * window[d - 1 - t];
            if (next <= prev)
                throw PreconditionError("recurrence not strictly increasing during enumeration");
            if (next >= k) return;
            fn(next);
            std::rotate(window.begin(), window.begin() + 1, window.end());
            window.back() = next;
            prev = next;
        }
    }
    const auto& terms = std::get<ExplicitSeq>(family_).terms;
    for (const Int& t : terms) {
        if (t >= k) break;
        fn(t);
    }
}

Int MonotoneSequence::term_mod(std::uint64_t j, const Int& q) const {
    if (q < 1) throw PreconditionError("term_mod: modulus must be >= 1");
    if (q == 1) return 0;
    if (const auto* g = std::get_if<GeometricSeq>(&family_)) {
        Int p, e(static_cast<unsigned long>(j));
        mpz_powm(p.get_mpz_t(), g->ratio.get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
        Int v = (g->scale * p) % q;
        if (v < 0) v += q;
        return v;
    }
    if (const auto* p = std::get_if<PolynomialSeq>(&family_)) {
        return eval_poly_mod(p->coeffs, Int(j), q);
    }
    if (const auto* f = std::get_if<FactorialSeq>(&family_)) {
        Int acc = 1;
        for (unsigned long i = 2; i <= static_cast<unsigned long>(j) + f->offset; ++i) {
            acc = (acc * i) % q;
            if (acc == 0) break;
        }
        return acc % q;
    }
    if (const auto* r = std::get_if<RecurrenceSeq>(&family_)) {
        const std::size_t d = r->coeffs.size();
        std::vector<Int> window;
        window.reserve(d);
        for (const Int& s : r->initial) window.push_back(((s % q) + q) % q);
        if (j < d) return window[j];
        for (std::uint64_t i = d; i <= j; ++i) {
            Int next = 0;
            for (std::size_t t = 0; t < d; ++t) next += r->coeffs[t] * window[d - 1 - t];
            next %= q;
            if (next < 0) next += q;
            std::rotate(window.begin(), window.begin() + 1, window.end());
            window.back() = next;
        }
        return window.back();
    }
    return term(j) % q;
}

}  // namespace dualprobe
