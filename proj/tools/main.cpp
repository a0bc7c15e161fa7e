#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dualprobe/annihilator.hpp"
#include "dualprobe/circle.hpp"
#include "dualprobe/errors.hpp"
#include "dualprobe/io.hpp"
#include "dualprobe/measure.hpp"
#include "dualprobe/support.hpp"
#include "dualprobe/witness.hpp"

using nlohmann::json;
using namespace dualprobe;

namespace {

constexpr const char* kSchema = "dualprobe-report/1";

struct CommonFlags {
    bool json_out = false;
    bool strict = false;
    bool no_meta = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_flag("--json", flags.json_out, "emit a machine-readable JSON report");
    cmd->add_flag("--strict", flags.strict,
                  "exit with status 3 when the verdict is horizon-bounded or inconclusive");
    cmd->add_flag("--no-meta", flags.no_meta, "omit the meta block (timestamps) from JSON output");
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json character_json(const Character& c) {
    auto arr = json::array();
    for (const Int& v : c.coords()) arr.push_back(io::int_to_json(v));
    return arr;
}

json coords_json(const std::vector<std::size_t>& row) {
    auto arr = json::array();
    for (std::size_t c : row) arr.push_back(c);
    return arr;
}

void emit(const CommonFlags& flags, const std::string& command, json params, json result,
          const std::string& human) {
    if (flags.json_out) {
        json report;
        report["schema"] = kSchema;
        report["command"] = command;
        report["params"] = std::move(params);
        report["result"] = std::move(result);
        if (!flags.no_meta) report["meta"] = json{{"timestamp", iso_timestamp()}};
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << human;
    }
}

std::optional<std::uint64_t> seed_from_env() {
    const char* env = std::getenv("DUALPROBE_SEED");
    if (!env || !*env) return std::nullopt;
    try {
        return std::stoull(env);
    } catch (...) {
        throw InputError("DUALPROBE_SEED is not a valid unsigned integer");
    }
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& flag_seed) {
    if (flag_seed) return *flag_seed;
    if (auto env = seed_from_env()) return *env;
    throw InputError("sampling requires a seed: pass --seed or set DUALPROBE_SEED");
}

std::vector<Character> load_witness_characters(const std::string& path, const std::string& translate) {
    auto chars = io::parse_character_file(path);
    if (chars.empty()) throw InputError(path + ": no characters");
    if (!translate.empty()) {
        const Character limit = io::parse_character_line(translate, "--translate", 1);
        for (auto& c : chars) c = char_mul(c, limit);
    }
    for (std::size_t i = 0; i < chars.size(); ++i)
        if (chars[i].is_identity())
            throw InputError(path + ":" + std::to_string(i + 1) +
                             ": identity character is not admissible here" +
                             (translate.empty() ? "" : " (it equals the candidate limit)"));
    return chars;
}

// ---- subcommand runners ------------------------------------------------

int run_witness(const CommonFlags& flags, const std::string& path, std::size_t max_select,
                const std::string& growth, const Int& horizon, const std::string& translate) {
    const Rat gf = io::parse_rat(growth);
    const auto chars = load_witness_characters(path, translate);
    const Refutation r = refute_convergence(chars, max_select, gf, horizon);

    json result;
    auto selected = json::array();
    for (std::size_t n = 0; n < r.selection.count(); ++n) {
        selected.push_back(json{{"index", r.selection.indices[n]},
                                {"character", character_json(r.selection.characters[n])},
                                {"pivot", io::int_to_json(r.selection.pivots[n])},
                                {"verified_sign", to_int(r.witness.verified[n])}});
    }
    result["selected"] = selected;
    auto pivots = json::array();
    for (const Int& p : r.selection.pivots) pivots.push_back(io::int_to_json(p));
    result["pivots"] = pivots;
    result["witness_support"] = character_json(
        Character::from_sorted(r.witness.support.as_explicit()->elements));
    result["skipped"] = r.selection.skipped;
    result["exhausted"] = r.selection.exhausted;
    result["k_density"] = json{{"horizon", io::int_to_json(r.horizon)},
                               {"count", io::int_to_json(r.pivot_count_below_horizon)},
                               {"bound", io::int_to_json(r.density_bound_count)}};
    if (!r.note.empty()) result["note"] = r.note;

    std::string human = "selected " + std::to_string(r.selection.count()) + " characters (skipped " +
                        std::to_string(r.selection.skipped) + ")\n";
    human += "witness support: {" +
             Character::from_sorted(r.witness.support.as_explicit()->elements).str() + "}\n";
    human += "guarantees:\n";
    for (std::size_t n = 0; n < r.selection.count(); ++n) {
        human += "  #" + std::to_string(r.selection.indices[n]) + "  {" +
                 r.selection.characters[n].str() + "}  pivot " + r.selection.pivots[n].get_str() +
                 "  sign " + std::to_string(to_int(r.witness.verified[n])) + "\n";
    }
    human += "pivot count below " + r.horizon.get_str() + ": " +
             r.pivot_count_below_horizon.get_str() + " (bound " + r.density_bound_count.get_str() +
             ")\n";
    if (!r.note.empty()) human += "note: " + r.note + "\n";

    json params{{"input", path},           {"max_select", max_select},
                {"growth_factor", growth}, {"horizon", io::int_to_json(horizon)}};
    if (!translate.empty()) params["translate"] = translate;
    emit(flags, "witness", params, result, human);
    return (flags.strict && r.selection.exhausted) ? 3 : 0;
}

int run_annihilate_elements(const CommonFlags& flags, const std::string& path, std::size_t width) {
    const auto gens = io::parse_support_list_file(path);
    const GF2Basis basis = annihilator_of_elements(gens, Window(width));

    json result{{"window", width}, {"rank", basis.rank()}};
    auto rows = json::array();
    for (const auto& r : basis.rows) rows.push_back(coords_json(r));
    result["basis"] = rows;
    result["subgroup_size"] = io::int_to_json(pow2(basis.rank()));

    std::string human = "window " + std::to_string(width) + ", rank " + std::to_string(basis.rank()) +
                        ", subgroup size " + pow2(basis.rank()).get_str() + "\n";
    for (const auto& r : basis.rows) {
        human += "  {";
        for (std::size_t i = 0; i < r.size(); ++i) human += (i ? " " : "") + std::to_string(r[i]);
        human += "}\n";
    }
    emit(flags, "annihilate-elements", json{{"input", path}, {"window", width}}, result, human);
    return 0;
}

int run_annihilate_chars(const CommonFlags& flags, const std::string& path, std::size_t width) {
    const auto chars = io::parse_character_file(path);
    const GF2Basis basis = annihilator_of_characters(chars, Window(width));

    json result{{"window", width}, {"rank", basis.rank()}};
    auto rows = json::array();
    for (const auto& r : basis.rows) rows.push_back(coords_json(r));
    result["basis"] = rows;
    result["note"] = "coordinates >= window are unconstrained; solutions extend with arbitrary tails";

    std::string human = "window " + std::to_string(width) + ", solution rank " +
                        std::to_string(basis.rank()) + " (tails beyond the window are free)\n";
    for (const auto& r : basis.rows) {
        human += "  {";
        for (std::size_t i = 0; i < r.size(); ++i) human += (i ? " " : "") + std::to_string(r[i]);
        human += "}\n";
    }
    emit(flags, "annihilate-chars", json{{"input", path}, {"window", width}}, result, human);
    return 0;
}

int run_diagonal(const CommonFlags& flags, const std::string& chars_path,
                 const std::string& support_path) {
    const auto chars = io::parse_character_file(chars_path);
    const auto x = io::parse_support_file(support_path);
    const DiagonalImage img = diagonal_image(chars, x);

    json result;
    auto signs = json::array();
    for (Sign s : img.signs) signs.push_back(to_int(s));
    result["signs"] = signs;
    result["stabilization"] = json{{"index", io::int_to_json(img.stabilization.index)},
                                   {"exact", img.stabilization.exact},
                                   {"probed", img.stabilization.probed}};

    std::string human = "diagonal image of " + x.describe() + ":";
    for (Sign s : img.signs) human += s == Sign::plus ? " +1" : " -1";
    human += "\nstabilization index " + img.stabilization.index.get_str() + " (empirical, probed " +
             std::to_string(img.stabilization.probed) + ")\n";
    emit(flags, "diagonal", json{{"chars", chars_path}, {"x", support_path}}, result, human);
    return 0;
}

int run_separate(const CommonFlags& flags, const std::string& chars_path,
                 const std::string& pairs_path) {
    const auto chars = io::parse_character_file(chars_path);
    const auto pairs = io::parse_pair_file(pairs_path);
    const auto verdicts = separating_check(chars, pairs);

    json result;
    auto arr = json::array();
    std::string human;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        json v{{"pair", i}, {"separated", verdicts[i].separator.has_value()}};
        if (verdicts[i].separator) {
            v["by_index"] = *verdicts[i].separator;
            v["character"] = character_json(chars[*verdicts[i].separator]);
            human += "pair " + std::to_string(i) + ": separated by character #" +
                     std::to_string(*verdicts[i].separator) + " {" +
                     chars[*verdicts[i].separator].str() + "}\n";
        } else {
            human += "pair " + std::to_string(i) + ": NOT_SEPARATED\n";
        }
        arr.push_back(v);
    }
    result["pairs"] = arr;
    emit(flags, "separate", json{{"chars", chars_path}, {"pairs", pairs_path}}, result, human);
    return 0;
}

int run_measure(const CommonFlags& flags, const Int& m, const Int& n, const Int& horizon,
                std::uint64_t samples, const std::optional<std::uint64_t>& seed_flag, bool complement,
                unsigned threads) {
    const std::uint64_t seed = require_seed(seed_flag);
    const HaarEvent event{OmnParams(m, n, horizon), complement};
    const EstimateReport rep = haar_estimate(event, samples, seed, threads);

    json result{{"estimate", io::rat_to_json(rep.estimate)},
                {"estimate_float", format_double(rep.estimate.get_d())},
                {"samples", rep.samples},
                {"seed", rep.seed},
                {"std_error", format_double(rep.std_error)}};
    if (rep.exact) {
        result["exact"] = io::rat_to_json(*rep.exact);
        result["exact_float"] = format_double(rep.exact->get_d());
    }
    std::string human = std::string(complement ? "F" : "O") + "_{" + m.get_str() + "," + n.get_str() +
                        "} up to horizon " + horizon.get_str() + ": estimate " +
                        format_double(rep.estimate.get_d()) + " (" +
                        rep.estimate.get_num().get_str() + "/" + rep.estimate.get_den().get_str() +
                        "), std error " + format_double(rep.std_error) + "\n";
    if (rep.exact)
        human += "exact single-horizon value: " + format_double(rep.exact->get_d()) + " (" +
                 rep.exact->get_num().get_str() + "/" + rep.exact->get_den().get_str() + ")\n";
    emit(flags, "measure",
         json{{"m", io::int_to_json(m)},
              {"N", io::int_to_json(n)},
              {"horizon", io::int_to_json(horizon)},
              {"samples", samples},
              {"seed", seed},
              {"complement", complement}},
         result, human);
    return 0;
}

int run_cover(const CommonFlags& flags, const std::string& path,
              const std::vector<std::string>& cells) {
    const auto samples = io::parse_support_list_file(path);
    std::vector<OmnParams> grid;
    for (const std::string& cell : cells) {
        std::istringstream ss(cell);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw InputError("--cell expects m,N,horizon");
        grid.emplace_back(Int(a), Int(b), Int(c));
    }
    const auto assignments = cover_check(samples, grid);

    bool all_assigned = true;
    json arr = json::array();
    std::string human;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        json a{{"sample", i}};
        if (assignments[i].cell) {
            const auto& cell = grid[*assignments[i].cell];
            a["cell"] = *assignments[i].cell;
            a["m"] = io::int_to_json(cell.m);
            a["N"] = io::int_to_json(cell.n);
            a["horizon"] = io::int_to_json(cell.horizon);
            human += "sample " + std::to_string(i) + " (" + samples[i].describe() +
                     "): assigned to F_{" + cell.m.get_str() + "," + cell.n.get_str() +
                     "} up to " + cell.horizon.get_str() + "\n";
        } else {
            a["cell"] = nullptr;
            all_assigned = false;
            human += "sample " + std::to_string(i) + " (" + samples[i].describe() +
                     "): grid/horizon insufficient (no claim)\n";
        }
        arr.push_back(a);
    }
    emit(flags, "cover", json{{"input", path}, {"cells", cells}}, json{{"assignments", arr}}, human);
    return (flags.strict && !all_assigned) ? 3 : 0;
}

int run_dense_ext(const CommonFlags& flags, const std::string& prefix_text, const Int& m,
                  const Int& n) {
    std::vector<bool> prefix;
    for (char c : prefix_text) {
        if (c == '0')
            prefix.push_back(false);
        else if (c == '1')
            prefix.push_back(true);
        else if (c != ',' && c != ' ')
            throw InputError("--prefix expects a bit string like 0010");
    }
    const auto ext = dense_extension(prefix, OmnParams(m, n, m));

    json result{{"witness_k", io::int_to_json(ext.witness_k)}};
    auto arr = json::array();
    for (const Int& e : ext.support.as_explicit()->elements) arr.push_back(io::int_to_json(e));
    result["support"] = arr;

    std::string human = "extension support: {" +
                        Character::from_sorted(ext.support.as_explicit()->elements).str() +
                        "}, density reaches 1/" + n.get_str() + " at k = " +
                        ext.witness_k.get_str() + "\n";
    emit(flags, "dense-ext",
         json{{"prefix", prefix_text}, {"m", io::int_to_json(m)}, {"N", io::int_to_json(n)}}, result,
         human);
    return 0;
}

int run_thinness(const CommonFlags& flags, const std::string& path, const Int& horizon) {
    const auto x = io::parse_support_file(path);
    const auto rep = thinness_report(x, horizon);

    const char* verdict = rep.verdict == ThinVerdict::certified_thin ? "CERTIFIED_THIN"
                          : rep.verdict == ThinVerdict::not_thin     ? "NOT_THIN"
                                                                     : "EMPIRICAL";
    json result{{"verdict", verdict}, {"reason", rep.reason}};
    if (rep.limit_density) result["limit_density"] = io::rat_to_json(*rep.limit_density);
    if (!rep.profile.empty()) {
        auto arr = json::array();
        for (const auto& [k, d] : rep.profile)
            arr.push_back(json{{"k", io::int_to_json(k)}, {"density", io::rat_to_json(d)}});
        result["profile"] = arr;
    }
    std::string human = std::string(verdict) + " (" + rep.reason + ")\n";
    if (rep.limit_density)
        human += "limit density " + rep.limit_density->get_num().get_str() + "/" +
                 rep.limit_density->get_den().get_str() + "\n";
    for (const auto& [k, d] : rep.profile)
        human += "  k=" + k.get_str() + "  density " + d.get_num().get_str() + "/" +
                 d.get_den().get_str() + "\n";
    emit(flags, "thinness", json{{"input", path}, {"horizon", io::int_to_json(horizon)}}, result,
         human);
    return (flags.strict && rep.verdict == ThinVerdict::empirical) ? 3 : 0;
}

int run_charsub_member(const CommonFlags& flags, const std::string& point,
                       const std::string& seq_path) {
    const auto x = io::parse_rational_point(point);
    const auto b = io::parse_sequence_file(seq_path);
    const auto v = rational_membership(x, b);

    json result{{"member", v.member}};
    std::string human;
    if (v.member) {
        result["stabilization_index"] = io::int_to_json(v.stabilization_index);
        human = "MEMBER: residues vanish from index " + v.stabilization_index.get_str() + " on\n";
    } else {
        json cyc{{"start", v.cycle->start}, {"length", v.cycle->length}};
        auto arr = json::array();
        const std::size_t show = std::min<std::size_t>(v.cycle->residues.size(), 64);
        for (std::size_t i = 0; i < show; ++i) arr.push_back(io::int_to_json(v.cycle->residues[i]));
        cyc["residues"] = arr;
        cyc["residues_truncated"] = show < v.cycle->residues.size();
        result["cycle"] = cyc;
        human = "NON_MEMBER: residue cycle of length " + std::to_string(v.cycle->length) +
                " starting at index " + std::to_string(v.cycle->start) + " contains non-zero values\n";
        human += "cycle residues:";
        for (std::size_t i = 0; i < std::min<std::size_t>(v.cycle->length, 16); ++i)
            human += " " + v.cycle->residues[i].get_str();
        if (v.cycle->length > 16) human += " ...";
        human += "\n";
    }
    if (!v.note.empty()) {
        result["note"] = v.note;
        human += "note: " + v.note + "\n";
    }
    emit(flags, "charsub member", json{{"x", point}, {"sequence", seq_path}}, result, human);
    return 0;
}

int run_charsub_probe(const CommonFlags& flags, const std::string& point,
                      const std::string& seq_path, std::uint64_t horizon, const std::string& eps_text,
                      unsigned long precision) {
    const auto b = io::parse_sequence_file(seq_path);
    const Rat eps = io::parse_rat(eps_text);
    DyadicReal x = point.find('/') != std::string::npos
                       ? DyadicReal::from_fraction(io::parse_rational_point(point).p,
                                                   io::parse_rational_point(point).q, precision)
                       : DyadicReal::from_decimal(point, precision);
    const FloatProbe probe = float_membership(x, b, horizon, eps);

    json result{{"verdict", probe.appears_member ? "APPEARS_MEMBER" : "APPEARS_NON_MEMBER"},
                {"horizon_bounded", true},
                {"horizon", probe.horizon},
                {"precision_bits", probe.precision_bits},
                {"required_bits", probe.required_bits},
                {"epsilon", io::rat_to_json(eps)},
                {"max_distance", io::rat_to_json(probe.max_distance)},
                {"tail_start", probe.tail_start},
                {"tail_max", io::rat_to_json(probe.tail_max)}};
    auto arr = json::array();
    for (const Rat& d : probe.distances) arr.push_back(format_double(d.get_d()));
    result["distances"] = arr;

    std::string human = std::string(probe.appears_member ? "APPEARS_MEMBER" : "APPEARS_NON_MEMBER") +
                        " (horizon-bounded, k <= " + std::to_string(probe.horizon) + ")\n";
    human += "max ||n_k x|| = " + format_double(probe.max_distance.get_d()) + ", tail max (k >= " +
             std::to_string(probe.tail_start) + ") = " + format_double(probe.tail_max.get_d()) + "\n";
    emit(flags, "charsub probe",
         json{{"x", point},
              {"sequence", seq_path},
              {"horizon", horizon},
              {"epsilon", eps_text},
              {"precision", precision}},
         result, human);
    return flags.strict ? 3 : 0;  // probes never conclude
}

int run_charsub_measure(const CommonFlags& flags, const std::string& seq_path,
                        const std::string& eps_text, std::uint64_t constraints,
                        std::uint64_t samples, const std::optional<std::uint64_t>& seed_flag,
                        unsigned long precision, unsigned threads) {
    const auto b = io::parse_sequence_file(seq_path);
    const Rat eps = io::parse_rat(eps_text);
    const std::uint64_t seed = require_seed(seed_flag);
    const EstimateReport rep = measure_probe(b, eps, constraints, samples, seed, precision, threads);

    json result{{"estimate", io::rat_to_json(rep.estimate)},
                {"estimate_float", format_double(rep.estimate.get_d())},
                {"samples", rep.samples},
                {"seed", rep.seed},
                {"std_error", format_double(rep.std_error)}};
    if (rep.exact) result["exact"] = io::rat_to_json(*rep.exact);

    std::string human = "measure of {x : ||n_k x|| <= eps, k = 1.." + std::to_string(constraints) +
                        "}: estimate " + format_double(rep.estimate.get_d()) + ", std error " +
                        format_double(rep.std_error) + "\n";
    if (rep.exact) human += "exact value: " + format_double(rep.exact->get_d()) + "\n";
    emit(flags, "charsub measure",
         json{{"sequence", seq_path},
              {"epsilon", eps_text},
              {"K", constraints},
              {"samples", samples},
              {"seed", seed},
              {"precision", precision}},
         result, human);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact character algebra and convergence diagnostics on dense subgroups of Z(2)^omega"};
    app.require_subcommand(1);

    // witness
    CommonFlags wf;
    std::string w_path, w_growth = "2", w_translate;
    std::size_t w_max = 30;
    std::string w_horizon = "1048576";
    auto* witness_cmd = app.add_subcommand("witness", "refute convergence of a character sequence");
    witness_cmd->add_option("chars", w_path, "character file")->required();
    witness_cmd->add_option("--max-select", w_max, "number of characters to select");
    witness_cmd->add_option("--growth-factor", w_growth, "pivot growth gate (rational >= 2)");
    witness_cmd->add_option("--horizon", w_horizon, "horizon for the pivot density certificate");
    witness_cmd->add_option("--translate", w_translate,
                            "multiply the stream by this character (candidate limit) first");
    add_common(witness_cmd, wf);

    // annihilate-elements
    CommonFlags aef;
    std::string ae_path;
    std::size_t ae_window = 0;
    auto* ae_cmd = app.add_subcommand("annihilate-elements", "characters trivial on the generators");
    ae_cmd->add_option("generators", ae_path, "support list file (JSON)")->required();
    ae_cmd->add_option("--window", ae_window, "window width")->required();
    add_common(ae_cmd, aef);

    // annihilate-chars
    CommonFlags acf;
    std::string ac_path;
    std::size_t ac_window = 0;
    auto* ac_cmd = app.add_subcommand("annihilate-chars", "window elements killed by the characters");
    ac_cmd->add_option("chars", ac_path, "character file")->required();
    ac_cmd->add_option("--window", ac_window, "window width")->required();
    add_common(ac_cmd, acf);

    // diagonal
    CommonFlags df;
    std::string d_chars, d_x;
    auto* d_cmd = app.add_subcommand("diagonal", "diagonal image of a point under a character list");
    d_cmd->add_option("chars", d_chars, "character file")->required();
    d_cmd->add_option("--x", d_x, "support file (JSON)")->required();
    add_common(d_cmd, df);

    // separate
    CommonFlags sf;
    std::string s_chars, s_pairs;
    auto* s_cmd = app.add_subcommand("separate", "first character separating each pair of points");
    s_cmd->add_option("chars", s_chars, "character file")->required();
    s_cmd->add_option("--pairs", s_pairs, "JSON array of [support, support] pairs")->required();
    add_common(s_cmd, sf);

    // measure
    CommonFlags mf;
    std::string m_m = "1", m_n = "2", m_h = "16";
    std::uint64_t m_samples = 100000;
    std::optional<std::uint64_t> m_seed;
    bool m_complement = false;
    unsigned m_threads = 1;
    auto* m_cmd = app.add_subcommand("measure", "Monte Carlo Haar mass of a truncated O/F event");
    m_cmd->add_option("--m", m_m, "start of the horizon range");
    m_cmd->add_option("--N", m_n, "density threshold 1/N");
    m_cmd->add_option("--horizon", m_h, "prefix length");
    m_cmd->add_option("--samples", m_samples, "sample count");
    m_cmd->add_option("--seed", m_seed, "RNG seed (or DUALPROBE_SEED)");
    m_cmd->add_flag("--complement", m_complement, "estimate the closed F side instead of O");
    m_cmd->add_option("--threads", m_threads, "worker threads (result is thread-count independent)");
    add_common(m_cmd, mf);

    // cover
    CommonFlags cf;
    std::string c_path;
    std::vector<std::string> c_cells;
    auto* c_cmd = app.add_subcommand("cover", "assign thin supports to F cells of a grid");
    c_cmd->add_option("samples", c_path, "support list file (JSON)")->required();
    c_cmd->add_option("--cell", c_cells, "grid cell m,N,horizon (repeatable)")->required();
    add_common(c_cmd, cf);

    // dense-ext
    CommonFlags def_;
    std::string de_prefix;
    std::string de_m = "1", de_n = "2";
    auto* de_cmd = app.add_subcommand("dense-ext", "extend a prefix into the open set O_{m,N}");
    de_cmd->add_option("--prefix", de_prefix, "bit string, e.g. 0010 (empty allowed)");
    de_cmd->add_option("--m", de_m, "m parameter");
    de_cmd->add_option("--N", de_n, "N parameter");
    add_common(de_cmd, def_);

    // thinness
    CommonFlags tf;
    std::string t_path;
    std::string t_horizon = "1048576";
    auto* t_cmd = app.add_subcommand("thinness", "classify the density of a support");
    t_cmd->add_option("support", t_path, "support file (JSON)")->required();
    t_cmd->add_option("--horizon", t_horizon, "profile horizon for empirical verdicts");
    add_common(t_cmd, tf);

    // charsub member|probe|measure
    auto* cs_cmd = app.add_subcommand("charsub", "characterized subgroups of the circle");
    cs_cmd->require_subcommand(1);

    CommonFlags cmf;
    std::string cm_x, cm_seq;
    auto* cm_cmd = cs_cmd->add_subcommand("member", "exact membership for a rational point");
    cm_cmd->add_option("--x", cm_x, "rational point p/q")->required();
    cm_cmd->add_option("--sequence", cm_seq, "sequence file (JSON)")->required();
    add_common(cm_cmd, cmf);

    CommonFlags cpf;
    std::string cp_x, cp_seq, cp_eps = "1/1000";
    std::uint64_t cp_horizon = 100;
    unsigned long cp_precision = 256;
    auto* cp_cmd = cs_cmd->add_subcommand("probe", "horizon-bounded distance probe");
    cp_cmd->add_option("--x", cp_x, "point: p/q or a decimal like 0.37")->required();
    cp_cmd->add_option("--sequence", cp_seq, "sequence file (JSON)")->required();
    cp_cmd->add_option("--horizon", cp_horizon, "probe k = 0..horizon");
    cp_cmd->add_option("--epsilon", cp_eps, "distance threshold (rational)");
    cp_cmd->add_option("--precision", cp_precision, "declared precision in bits");
    add_common(cp_cmd, cpf);

    CommonFlags cqf;
    std::string cq_seq, cq_eps = "1/8";
    std::uint64_t cq_k = 4, cq_samples = 100000;
    std::optional<std::uint64_t> cq_seed;
    unsigned long cq_precision = 0;
    unsigned cq_threads = 1;
    auto* cq_cmd = cs_cmd->add_subcommand("measure", "Monte Carlo outer measure of C_B");
    cq_cmd->add_option("--sequence", cq_seq, "sequence file (JSON)")->required();
    cq_cmd->add_option("--epsilon", cq_eps, "distance threshold (rational in (0,1/2))");
    cq_cmd->add_option("--K", cq_k, "constraints k = 1..K");
    cq_cmd->add_option("--samples", cq_samples, "sample count");
    cq_cmd->add_option("--seed", cq_seed, "RNG seed (or DUALPROBE_SEED)");
    cq_cmd->add_option("--precision", cq_precision, "sampling resolution in bits (0 = automatic)");
    cq_cmd->add_option("--threads", cq_threads, "worker threads");
    add_common(cq_cmd, cqf);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*witness_cmd)
            return run_witness(wf, w_path, w_max, w_growth, Int(w_horizon), w_translate);
        if (*ae_cmd) return run_annihilate_elements(aef, ae_path, ae_window);
        if (*ac_cmd) return run_annihilate_chars(acf, ac_path, ac_window);
        if (*d_cmd) return run_diagonal(df, d_chars, d_x);
        if (*s_cmd) return run_separate(sf, s_chars, s_pairs);
        if (*m_cmd)
            return run_measure(mf, Int(m_m), Int(m_n), Int(m_h), m_samples, m_seed, m_complement,
                               m_threads);
        if (*c_cmd) return run_cover(cf, c_path, c_cells);
        if (*de_cmd) return run_dense_ext(def_, de_prefix, Int(de_m), Int(de_n));
        if (*t_cmd) return run_thinness(tf, t_path, Int(t_horizon));
        if (*cm_cmd) return run_charsub_member(cmf, cm_x, cm_seq);
        if (*cp_cmd) return run_charsub_probe(cpf, cp_x, cp_seq, cp_horizon, cp_eps, cp_precision);
        if (*cq_cmd)
            return run_charsub_measure(cqf, cq_seq, cq_eps, cq_k, cq_samples, cq_seed, cq_precision,
                                       cq_threads);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
