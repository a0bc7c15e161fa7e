#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dualprobe/ints.hpp"
#include "dualprobe/sequences.hpp"

namespace dualprobe {

// An element of Z(2)^omega given by its support, in one of three decidable
// forms: an explicit finite set, an enumerated strictly increasing generator,
// or an eventually periodic indicator.
class SupportSpec {
public:
    struct Explicit {
        std::vector<Int> elements;  // strictly increasing, >= 0
    };
    struct Periodic {
        std::vector<bool> prefix;
        std::vector<bool> pattern;  // non-empty
    };
    struct Enumerated {
        MonotoneSequence seq;  // one of the four infinite families
    };

    enum class Kind { explicit_set, enumerated, periodic };

    SupportSpec() : body_(Explicit{}) {}

    static SupportSpec explicit_set(std::vector<Int> elements);
    static SupportSpec enumerated(MonotoneSequence::Family family);
    static SupportSpec periodic(std::vector<bool> prefix, std::vector<bool> pattern);

    Kind kind() const;
    const Explicit* as_explicit() const { return std::get_if<Explicit>(&body_); }
    const Periodic* as_periodic() const { return std::get_if<Periodic>(&body_); }
    const Enumerated* as_enumerated() const { return std::get_if<Enumerated>(&body_); }

    bool contains(const Int& n) const;     // n >= 0
    Int count_below(const Int& k) const;   // |supp ∩ {0..k-1}|, k >= 0
    void elements_below(const Int& k, const std::function<void(const Int&)>& fn) const;

    // True when the support is provably finite (explicit, or periodic with an
    // all-zero pattern).
    bool finite() const;
    // Largest element of a finite support; nullopt when empty or not finite.
    std::optional<Int> max_element() const;

    std::string describe() const;

private:
    using Body = std::variant<Explicit, Enumerated, Periodic>;
    explicit SupportSpec(Body body) : body_(std::move(body)) {}
    Body body_;
};

std::vector<Rat> density_profile(const SupportSpec& x, std::span<const Int> checkpoints);

enum class ThinVerdict { certified_thin, not_thin, empirical };

struct ThinnessReport {
    ThinVerdict verdict = ThinVerdict::empirical;
    std::string reason;
    std::optional<Rat> limit_density;           // NOT_THIN witness
    std::vector<std::pair<Int, Rat>> profile;   // EMPIRICAL: doubling checkpoints
};

ThinnessReport thinness_report(const SupportSpec& x, const Int& horizon);

}  // namespace dualprobe
