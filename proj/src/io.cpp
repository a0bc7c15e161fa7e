#include "dualprobe/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace dualprobe::io {
namespace {

bool valid_uint_token(const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::vector<bool> bits_from_json(const nlohmann::json& j, const std::string& context) {
    if (!j.is_array()) throw InputError(context + ": expected a 0/1 array");
    std::vector<bool> bits;
    bits.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
            throw InputError(context + ": entries must be 0 or 1");
        bits.push_back(v.get<int>() == 1);
    }
    return bits;
}

std::vector<Int> ints_from_json(const nlohmann::json& j, const std::string& context) {
    if (!j.is_array()) throw InputError(context + ": expected an integer array");
    std::vector<Int> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(int_from_json(j[i], context + "[" + std::to_string(i) + "]"));
    return out;
}

MonotoneSequence::Family family_from_json(const nlohmann::json& j, const std::string& context,
                                          bool allow_explicit) {
    if (!j.is_object()) throw InputError(context + ": expected an object");
    const std::string family = j.value("family", "");
    const nlohmann::json params = j.contains("params") ? j.at("params") : nlohmann::json::object();
    if (family == "geometric") {
        return GeometricSeq{int_from_json(params.at("c"), context + ".params.c"),
                            int_from_json(params.at("r"), context + ".params.r")};
    }
    if (family == "polynomial") {
        return PolynomialSeq{ints_from_json(params.at("coeffs"), context + ".params.coeffs")};
    }
    if (family == "factorial") {
        unsigned long offset = 0;
        if (params.contains("j0"))
            offset = static_cast<unsigned long>(to_u64(int_from_json(params.at("j0"), context), "j0"));
        else if (params.contains("k0"))
            offset = static_cast<unsigned long>(to_u64(int_from_json(params.at("k0"), context), "k0"));
        return FactorialSeq{offset};
    }
    if (family == "recurrence") {
        return RecurrenceSeq{ints_from_json(params.at("coeffs"), context + ".params.coeffs"),
                             ints_from_json(params.at("initial"), context + ".params.initial")};
    }
    if (family == "explicit") {
        if (!allow_explicit)
            throw InputError(context + ": family 'explicit' is not valid here");
        return ExplicitSeq{ints_from_json(params.at("terms"), context + ".params.terms")};
    }
    throw InputError(context + ": unknown family '" + family + "'");
}

}  // namespace

Character parse_character_line(const std::string& line, const std::string& source,
                               std::size_t line_no) {
    std::vector<Int> coords;
    std::size_t pos = 0;
    const std::size_t n = line.size();
    while (pos < n) {
        while (pos < n && line[pos] == ' ') ++pos;
        if (pos >= n) break;
        const std::size_t start = pos;
        while (pos < n && line[pos] != ' ') ++pos;
        const std::string token = line.substr(start, pos - start);
        if (!valid_uint_token(token))
            throw ParseError(source, line_no, start + 1,
                             "expected a non-negative decimal integer, got '" + token + "'");
        Int value(token, 10);
        if (!coords.empty() && value <= coords.back())
            throw ParseError(source, line_no, start + 1,
                             "coordinates must be strictly increasing");
        coords.push_back(std::move(value));
    }
    return Character::from_sorted(std::move(coords));
}

std::vector<Character> parse_character_stream(std::istream& in, const std::string& source) {
    std::vector<Character> chars;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        chars.push_back(parse_character_line(line, source, line_no));
    }
    return chars;
}

std::vector<Character> parse_character_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open character file: " + path);
    return parse_character_stream(in, path);
}

std::string format_characters(std::span<const Character> chars) {
    std::string out;
    for (const Character& c : chars) {
        out += c.str();
        out += '\n';
    }
    return out;
}

Int int_from_json(const nlohmann::json& j, const std::string& context) {
    if (j.is_number_unsigned()) return Int(static_cast<unsigned long>(j.get<std::uint64_t>()));
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        std::string digits = s;
        bool neg = false;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
            neg = digits[0] == '-';
            digits.erase(digits.begin());
        }
        if (!valid_uint_token(digits)) throw InputError(context + ": malformed integer '" + s + "'");
        Int v(digits, 10);
        return neg ? Int(-v) : v;
    }
    throw InputError(context + ": expected an integer or decimal string");
}

nlohmann::json int_to_json(const Int& v) {
    static const Int kSafe = pow2(53);
    if (v >= 0 && v <= kSafe) return nlohmann::json(static_cast<std::uint64_t>(v.get_ui()));
    if (v < 0 && -v <= kSafe) return nlohmann::json(static_cast<std::int64_t>(v.get_si()));
    return nlohmann::json(v.get_str());
}

nlohmann::json rat_to_json(const Rat& q) {
    return nlohmann::json(q.get_num().get_str() + "/" + q.get_den().get_str());
}

Rat rat_from_json(const nlohmann::json& j, const std::string& context) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(int_from_json(j, context));
    throw InputError(context + ": expected a rational string");
}

SupportSpec support_from_json(const nlohmann::json& j, const std::string& context) {
    if (!j.is_object()) throw InputError(context + ": expected a support object");
    const std::string kind = j.value("kind", "");
    if (kind == "explicit") {
        return SupportSpec::explicit_set(ints_from_json(j.at("elements"), context + ".elements"));
    }
    if (kind == "enumerated") {
        return SupportSpec::enumerated(family_from_json(j, context, /*allow_explicit=*/false));
    }
    if (kind == "periodic") {
        return SupportSpec::periodic(
            bits_from_json(j.contains("prefix") ? j.at("prefix") : nlohmann::json::array(),
                           context + ".prefix"),
            bits_from_json(j.at("pattern"), context + ".pattern"));
    }
    throw InputError(context + ": unknown kind '" + kind + "'");
}

nlohmann::json support_to_json(const SupportSpec& s) {
    nlohmann::json j;
    if (const auto* e = s.as_explicit()) {
        j["kind"] = "explicit";
        auto arr = nlohmann::json::array();
        for (const Int& v : e->elements) arr.push_back(int_to_json(v));
        j["elements"] = arr;
        return j;
    }
    if (const auto* p = s.as_periodic()) {
        j["kind"] = "periodic";
        auto pre = nlohmann::json::array(), pat = nlohmann::json::array();
        for (bool b : p->prefix) pre.push_back(b ? 1 : 0);
        for (bool b : p->pattern) pat.push_back(b ? 1 : 0);
        j["prefix"] = pre;
        j["pattern"] = pat;
        return j;
    }
    const auto& seq = s.as_enumerated()->seq;
    j["kind"] = "enumerated";
    j["family"] = seq.family_name();
    nlohmann::json params = nlohmann::json::object();
    if (const auto* g = std::get_if<GeometricSeq>(&seq.family())) {
        params["c"] = int_to_json(g->scale);
        params["r"] = int_to_json(g->ratio);
    } else if (const auto* poly = std::get_if<PolynomialSeq>(&seq.family())) {
        auto arr = nlohmann::json::array();
        for (const Int& v : poly->coeffs) arr.push_back(int_to_json(v));
        params["coeffs"] = arr;
    } else if (const auto* f = std::get_if<FactorialSeq>(&seq.family())) {
        params["j0"] = f->offset;
    } else if (const auto* r = std::get_if<RecurrenceSeq>(&seq.family())) {
        auto cs = nlohmann::json::array(), is = nlohmann::json::array();
        for (const Int& v : r->coeffs) cs.push_back(int_to_json(v));
        for (const Int& v : r->initial) is.push_back(int_to_json(v));
        params["coeffs"] = cs;
        params["initial"] = is;
    }
    j["params"] = params;
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json load_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Recover a line/column position from the byte offset.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(path, line, col, e.what());
    }
}

SupportSpec parse_support_file(const std::string& path) {
    return support_from_json(load_json_file(path), path);
}

std::vector<SupportSpec> parse_support_list_file(const std::string& path) {
    const nlohmann::json j = load_json_file(path);
    std::vector<SupportSpec> out;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            out.push_back(support_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    } else {
        out.push_back(support_from_json(j, path));
    }
    return out;
}

std::vector<std::pair<SupportSpec, SupportSpec>> parse_pair_file(const std::string& path) {
    const nlohmann::json j = load_json_file(path);
    if (!j.is_array()) throw InputError(path + ": expected an array of [support, support] pairs");
    std::vector<std::pair<SupportSpec, SupportSpec>> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& pair = j[i];
        if (!pair.is_array() || pair.size() != 2)
            throw InputError(path + "[" + std::to_string(i) + "]: expected a two-element array");
        out.emplace_back(support_from_json(pair[0], path + "[" + std::to_string(i) + "][0]"),
                         support_from_json(pair[1], path + "[" + std::to_string(i) + "][1]"));
    }
    return out;
}

SequenceGen sequence_from_json(const nlohmann::json& j, const std::string& context) {
    return SequenceGen(family_from_json(j, context, /*allow_explicit=*/true));
}

SequenceGen parse_sequence_file(const std::string& path) {
    return sequence_from_json(load_json_file(path), path);
}

RationalPoint parse_rational_point(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!valid_uint_token(text)) throw InputError("malformed rational point '" + text + "'");
        return RationalPoint::make(Int(text, 10), Int(1));
    }
    const std::string p = text.substr(0, slash), q = text.substr(slash + 1);
    if (!valid_uint_token(p) || !valid_uint_token(q))
        throw InputError("malformed rational point '" + text + "'");
    return RationalPoint::make(Int(p, 10), Int(q, 10));
}

Rat parse_rat(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string p = text.substr(0, slash), q = text.substr(slash + 1);
        if (!valid_uint_token(p) || !valid_uint_token(q) || Int(q, 10) == 0)
            throw InputError("malformed rational '" + text + "'");
        return make_rat(Int(p, 10), Int(q, 10));
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
        const std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
        if ((!whole.empty() && !valid_uint_token(whole)) || !valid_uint_token(frac))
            throw InputError("malformed decimal '" + text + "'");
        Int den = 1;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        Int num = (whole.empty() ? Int(0) : Int(whole, 10)) * den + Int(frac, 10);
        return make_rat(num, den);
    }
    if (!valid_uint_token(text)) throw InputError("malformed rational '" + text + "'");
    return Rat(Int(text, 10));
}

}  // namespace dualprobe::io
