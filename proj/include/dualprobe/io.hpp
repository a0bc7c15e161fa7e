#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dualprobe/character.hpp"
#include "dualprobe/circle.hpp"
#include "dualprobe/errors.hpp"
#include "dualprobe/ints.hpp"
#include "dualprobe/support.hpp"

namespace dualprobe::io {

// Character text format: one character per line as strictly increasing
// space-separated non-negative decimal integers; an empty line is the
// identity character. Anything else is a ParseError carrying line/column.
std::vector<Character> parse_character_stream(std::istream& in, const std::string& source);
std::vector<Character> parse_character_file(const std::string& path);
Character parse_character_line(const std::string& line, const std::string& source,
                               std::size_t line_no);
std::string format_characters(std::span<const Character> chars);

// Support objects: {"kind": "explicit"|"enumerated"|"periodic", ...}.
SupportSpec support_from_json(const nlohmann::json& j, const std::string& context);
nlohmann::json support_to_json(const SupportSpec& s);
SupportSpec parse_support_file(const std::string& path);
// A file holding either one support object or an array of them.
std::vector<SupportSpec> parse_support_list_file(const std::string& path);
// Array of [support, support] pairs.
std::vector<std::pair<SupportSpec, SupportSpec>> parse_pair_file(const std::string& path);

// Sequence generators: {"family": "geometric"|..., "params": {...}}.
SequenceGen sequence_from_json(const nlohmann::json& j, const std::string& context);
SequenceGen parse_sequence_file(const std::string& path);

// Integers in JSON may be numbers or decimal strings (strings are required
// beyond 2^53 so downstream consumers never lose precision).
Int int_from_json(const nlohmann::json& j, const std::string& context);
nlohmann::json int_to_json(const Int& v);
nlohmann::json rat_to_json(const Rat& q);
Rat rat_from_json(const nlohmann::json& j, const std::string& context);

// "p/q" with 0 <= p, q >= 1.
RationalPoint parse_rational_point(const std::string& text);
// Rational literal: "3", "5/8" or a plain decimal like "0.125".
Rat parse_rat(const std::string& text);

nlohmann::json load_json_file(const std::string& path);
std::string read_file(const std::string& path);

}  // namespace dualprobe::io
