#include "dualprobe/annihilator.hpp"

#include <algorithm>
#include <set>

#include "dualprobe/errors.hpp"

namespace dualprobe {
namespace {

constexpr std::size_t kMaxWindow = std::size_t{1} << 20;
constexpr std::size_t kMaxSpan = std::size_t{1} << 22;

// Packed GF(2) rows over 64-bit blocks.
struct BitRows {
    std::size_t width = 0;
    std::size_t blocks = 0;
    std::vector<std::vector<std::uint64_t>> rows;

    explicit BitRows(std::size_t w) : width(w), blocks((w + 63) / 64) {}

    void add_row(const std::vector<std::size_t>& coords) {
        std::vector<std::uint64_t> row(blocks, 0);
        for (std::size_t c : coords) row[c >> 6] |= std::uint64_t{1} << (c & 63);
        rows.push_back(std::move(row));
    }
    static bool test(const std::vector<std::uint64_t>& row, std::size_t c) {
        return (row[c >> 6] >> (c & 63)) & 1u;
    }
    static void xor_into(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    }
};

// In-place reduced row echelon form, lowest pivot column first.
// Returns the pivot columns, aligned with the leading rows.
std::vector<std::size_t> rref(BitRows& m) {
    std::vector<std::size_t> pivot_cols;
    std::size_t next_row = 0;
    for (std::size_t col = 0; col < m.width && next_row < m.rows.size(); ++col) {
        std::size_t found = next_row;
        while (found < m.rows.size() && !BitRows::test(m.rows[found], col)) ++found;
        if (found == m.rows.size()) continue;
        std::swap(m.rows[next_row], m.rows[found]);
        for (std::size_t r = 0; r < m.rows.size(); ++r) {
            if (r != next_row && BitRows::test(m.rows[r], col))
                BitRows::xor_into(m.rows[r], m.rows[next_row]);
        }
        pivot_cols.push_back(col);
        ++next_row;
    }
    m.rows.resize(pivot_cols.size());
    return pivot_cols;
}

std::vector<std::size_t> unpack(const std::vector<std::uint64_t>& row, std::size_t width) {
    std::vector<std::size_t> coords;
    for (std::size_t c = 0; c < width; ++c)
        if (BitRows::test(row, c)) coords.push_back(c);
    return coords;
}

// Kernel basis {b : M b = 0}: one vector per free column.
GF2Basis kernel_basis(BitRows m) {
    const std::size_t width = m.width;
    const std::vector<std::size_t> pivot_cols = rref(m);

    std::vector<bool> is_pivot(width, false);
    for (std::size_t c : pivot_cols) is_pivot[c] = true;

    GF2Basis basis;
    basis.width = width;
    for (std::size_t f = 0; f < width; ++f) {
        if (is_pivot[f]) continue;
        std::vector<std::size_t> coords;
        for (std::size_t i = 0; i < pivot_cols.size(); ++i)
            if (BitRows::test(m.rows[i], f)) coords.push_back(pivot_cols[i]);
        coords.push_back(f);
        std::sort(coords.begin(), coords.end());
        basis.rows.push_back(std::move(coords));
    }
    return basis;
}

}  // namespace

Window::Window(std::size_t w) : width(w) {
    if (w < 1) throw PreconditionError("window width must be >= 1");
    if (w > kMaxWindow) throw PreconditionError("window width exceeds supported maximum");
}

GF2Basis annihilator_of_elements(std::span<const SupportSpec> generators, Window window) {
    BitRows m(window.width);
    const Int bound(static_cast<unsigned long>(window.width));
    for (const SupportSpec& g : generators) {
        std::vector<std::size_t> coords;
        g.elements_below(bound, [&](const Int& e) { coords.push_back(to_index(e, "window element")); });
        m.add_row(coords);
    }
    return kernel_basis(std::move(m));
}

GF2Basis annihilator_of_characters(std::span<const Character> chars, Window window) {
    BitRows m(window.width);
    for (std::size_t i = 0; i < chars.size(); ++i) {
        std::vector<std::size_t> coords;
        for (const Int& c : chars[i].coords()) {
            if (c >= Int(static_cast<unsigned long>(window.width)))
                throw WindowError(i, chars[i].str(), window.width);
            coords.push_back(to_index(c, "character coordinate"));
        }
        m.add_row(coords);
    }
    return kernel_basis(std::move(m));
}

std::vector<std::vector<std::size_t>> row_reduce(std::vector<std::vector<std::size_t>> rows,
                                                 std::size_t width) {
    BitRows m(width);
    for (const auto& r : rows) m.add_row(r);
    rref(m);
    std::vector<std::vector<std::size_t>> out;
    out.reserve(m.rows.size());
    for (const auto& r : m.rows) out.push_back(unpack(r, width));
    return out;
}

std::vector<std::vector<std::size_t>> span_members(const GF2Basis& basis) {
    if (basis.rank() >= 63 || (std::size_t{1} << basis.rank()) > kMaxSpan)
        throw PreconditionError("subgroup too large to enumerate");
    BitRows packed(basis.width);
    for (const auto& r : basis.rows) packed.add_row(r);

    std::vector<std::vector<std::size_t>> members;
    members.reserve(std::size_t{1} << basis.rank());
    std::vector<std::uint64_t> acc(packed.blocks, 0);
    // Gray-code walk: flip one basis row per step.
    members.push_back(unpack(acc, basis.width));
    for (std::size_t i = 1; i < (std::size_t{1} << basis.rank()); ++i) {
        const std::size_t flip = static_cast<std::size_t>(__builtin_ctzll(i));
        BitRows::xor_into(acc, packed.rows[flip]);
        members.push_back(unpack(acc, basis.width));
    }
    std::sort(members.begin(), members.end());
    return members;
}

CharacterSequence CharacterSequence::coordinates() {
    CharacterSequence s;
    s.coordinate_family_ = true;
    return s;
}

CharacterSequence CharacterSequence::from_list(std::vector<Character> chars) {
    CharacterSequence s;
    s.list_ = std::move(chars);
    return s;
}

Character CharacterSequence::at(std::uint64_t n) const {
    if (coordinate_family_) return Character::from_sorted({Int(n)});
    if (n >= list_.size()) throw PreconditionError("character sequence index out of range");
    return list_[n];
}

std::optional<std::uint64_t> CharacterSequence::size() const {
    if (coordinate_family_) return std::nullopt;
    return list_.size();
}

bool CharacterSequence::min_tends_to_infinity() const { return coordinate_family_; }

Int CharacterSequence::disjoint_horizon(const Int& max_coord) const {
    if (!coordinate_family_)
        throw PreconditionError("disjoint horizon requires a family with min -> infinity");
    return max_coord + 1;
}

Stabilization stabilization_index(const CharacterSequence& chars, const SupportSpec& x,
                                  std::uint64_t budget) {
    if (budget < 1) throw PreconditionError("stabilization budget must be >= 1");
    std::uint64_t probes = budget;
    if (auto n = chars.size()) probes = std::min(probes, *n);

    Stabilization st;
    st.probed = probes;
    Int last_minus(-1);
    for (std::uint64_t n = 0; n < probes; ++n) {
        if (evaluate(chars.at(n), x) == Sign::minus) last_minus = Int(n);
    }
    st.index = last_minus + 1;

    if (x.finite() && chars.min_tends_to_infinity()) {
        const auto max_c = x.max_element();
        const Int horizon = chars.disjoint_horizon(max_c ? *max_c : Int(-1));
        if (Int(probes) >= horizon) {
            st.exact = true;
            st.certificate_horizon = horizon;
        }
    }
    return st;
}

DiagonalImage diagonal_image(std::span<const Character> chars, const SupportSpec& x) {
    DiagonalImage img;
    img.signs.reserve(chars.size());
    Int last_minus(-1);
    for (std::size_t n = 0; n < chars.size(); ++n) {
        const Sign s = evaluate(chars[n], x);
        img.signs.push_back(s);
        if (s == Sign::minus) last_minus = Int(static_cast<unsigned long>(n));
    }
    img.stabilization.index = last_minus + 1;
    img.stabilization.exact = false;
    img.stabilization.probed = chars.size();
    return img;
}

std::size_t quotient_image_count(std::span<const Character> chars,
                                 std::span<const SupportSpec> sample) {
    std::set<std::vector<bool>> images;
    for (const SupportSpec& x : sample) {
        std::vector<bool> key;
        key.reserve(chars.size());
        for (const Character& chi : chars) key.push_back(evaluate(chi, x) == Sign::minus);
        images.insert(std::move(key));
    }
    return images.size();
}

std::vector<SeparationVerdict> separating_check(
    std::span<const Character> chars,
    std::span<const std::pair<SupportSpec, SupportSpec>> pairs) {
    std::vector<SeparationVerdict> verdicts;
    verdicts.reserve(pairs.size());
    for (const auto& [x, y] : pairs) {
        SeparationVerdict v;
        for (std::size_t i = 0; i < chars.size(); ++i) {
            if (evaluate(chars[i], x) != evaluate(chars[i], y)) {
                v.separator = i;
                break;
            }
        }
        verdicts.push_back(v);
    }
    return verdicts;
}

}  // namespace dualprobe
