/**
 * @file scenario_io.hpp
 * @brief Scenario files: a small versioned key = value dialect.
 *
 *     # comment (also after a value)
 *     version = 1
 *
 *     [attacker]        x, y (required), heading (rad or `target`), a_A, speed
 *     [target]          x, y (required)
 *     [defender]        id, x, y, range_R, capture_c, mu    (repeat per defender)
 *     [params]          every GuidanceParams field by name, switch_mode = smooth | discontinuous
 *     [sim]             dt, t_max, capture_radius, seed
 *
 * Omitted fields take the defaults of the corresponding structs. eps_h
 * follows eps_alpha unless given. A defender without an id gets its 1-based
 * position among the [defender] sections.
 *
 * Overrides are dot paths applied to the parsed document before it is
 * interpreted: `params.K_s=0.5`, `sim.dt=5e-4`, `attacker.heading=target`,
 * `defender.2.mu=0.6` (by defender id).
 */
#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ezguide/errors.hpp"
#include "ezguide/number_format.hpp"
#include "ezguide/simulator.hpp"

namespace ezguide {

inline constexpr int kScenarioVersion = 1;

struct DocEntry {
    std::string key;
    std::string value;
    int line{0};
    int key_column{0};
    int value_column{0};
};

struct DocSection {
    std::string name;  ///< empty for the top level
    int line{0};
    std::vector<DocEntry> entries;

    const DocEntry* find(std::string_view key) const {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    }
};

struct ScenarioDocument {
    std::vector<DocSection> sections;  ///< sections[0] is the top level
};

namespace detail {

inline bool is_ident(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

inline const std::set<std::string, std::less<>>& section_names() {
    static const std::set<std::string, std::less<>> names{"attacker", "target", "defender", "params", "sim"};
    return names;
}

/// [first, last) of s with surrounding blanks removed, as 0-based offsets.
inline std::pair<std::size_t, std::size_t> trim_range(std::string_view s, std::size_t first, std::size_t last) {
    while (first < last && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(s[last - 1]))) --last;
    return {first, last};
}

}  // namespace detail

/// Syntax pass: sections and key = value pairs with their locations.
/// Unknown section names and duplicate keys are rejected here.
inline ScenarioDocument parse_document(std::string_view text) {
    ScenarioDocument doc;
    doc.sections.push_back({"", 0, {}});
    std::set<std::string, std::less<>> seen_single;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::size_t end = line.find('#');
        if (end == std::string_view::npos) end = line.size();
        auto [b, e] = detail::trim_range(line, 0, end);
        if (b == e) {
            if (eol == text.size()) break;
            continue;
        }
        const int col = static_cast<int>(b) + 1;

        if (line[b] == '[') {
            if (line[e - 1] != ']') throw ParseError("expected ']' to close section header", line_no, static_cast<int>(e) + 1);
            auto [nb, ne] = detail::trim_range(line, b + 1, e - 1);
            const std::string name(line.substr(nb, ne - nb));
            if (!detail::section_names().contains(name))
                throw ParseError("unknown section '" + name + "'", line_no, static_cast<int>(nb) + 1);
            if (name != "defender" && !seen_single.insert(name).second)
                throw ParseError("duplicate section '" + name + "'", line_no, col);
            doc.sections.push_back({name, line_no, {}});
        } else {
            const std::size_t eq = line.find('=', b);
            if (eq == std::string_view::npos || eq >= e)
                throw ParseError("expected 'key = value'", line_no, col);
            auto [kb, ke] = detail::trim_range(line, b, eq);
            auto [vb, ve] = detail::trim_range(line, eq + 1, e);
            const std::string key(line.substr(kb, ke - kb));
            if (!detail::is_ident(key)) throw ParseError("invalid key '" + key + "'", line_no, static_cast<int>(kb) + 1);
            if (vb == ve) throw ParseError("missing value for '" + key + "'", line_no, static_cast<int>(eq) + 2);
            DocSection& sec = doc.sections.back();
            if (sec.find(key)) throw ParseError("duplicate key '" + key + "'", line_no, static_cast<int>(kb) + 1);
            sec.entries.push_back({key, std::string(line.substr(vb, ve - vb)), line_no, static_cast<int>(kb) + 1,
                                   static_cast<int>(vb) + 1});
        }
        if (eol == text.size()) break;
    }
    return doc;
}

namespace detail {

inline double number(const DocEntry& e) {
    const auto v = parse_double(e.value);
    if (!v) throw ParseError("'" + e.key + "' expects a number, got '" + e.value + "'", e.line, e.value_column);
    return *v;
}

template <class Int>
Int integer(const DocEntry& e) {
    const auto v = parse_integer<Int>(e.value);
    if (!v) throw ParseError("'" + e.key + "' expects an integer, got '" + e.value + "'", e.line, e.value_column);
    return *v;
}

using Setter = std::function<void(const DocEntry&)>;

inline void apply_section(const DocSection& sec, const std::map<std::string, Setter, std::less<>>& setters) {
    for (const DocEntry& e : sec.entries) {
        const auto it = setters.find(e.key);
        if (it == setters.end()) {
            const std::string where = sec.name.empty() ? "top level" : "[" + sec.name + "]";
            throw ParseError("unknown key '" + e.key + "' in " + where, e.line, e.key_column);
        }
        it->second(e);
    }
}

inline void require(const DocSection& sec, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (!sec.find(k)) throw ParseError("[" + sec.name + "] is missing '" + k + "'", sec.line, 1);
}

inline std::map<std::string, Setter, std::less<>> param_setters(GuidanceParams& p, bool& eps_h_given) {
    std::map<std::string, Setter, std::less<>> m;
    auto real = [&m](const char* key, double& field) { m[key] = [&field](const DocEntry& e) { field = number(e); }; };
    real("K_s", p.K_s);
    real("K_I", p.K_I);
    real("K_a", p.K_a);
    real("beta", p.beta);
    real("eps_margin", p.eps_margin);
    real("eps_alpha", p.eps_alpha);
    real("delta", p.delta);
    real("a_max", p.a_max);
    real("p1", p.p1);
    real("sign_boundary_layer", p.sign_boundary_layer);
    real("denom_floor", p.denom_floor);
    real("sat_denom_floor", p.sat_denom_floor);
    real("rate_filter_steps", p.rate_filter_steps);
    m["eps_h"] = [&p, &eps_h_given](const DocEntry& e) {
        p.eps_h = number(e);
        eps_h_given = true;
    };
    m["sat_n"] = [&p](const DocEntry& e) { p.sat_n = integer<int>(e); };
    m["switch_mode"] = [&p](const DocEntry& e) {
        if (e.value == "smooth") p.switch_mode = SwitchMode::Smooth;
        else if (e.value == "discontinuous") p.switch_mode = SwitchMode::Discontinuous;
        else throw ParseError("switch_mode must be 'smooth' or 'discontinuous'", e.line, e.value_column);
    };
    return m;
}

}  // namespace detail

/// Semantic pass: map a document onto a validated Scenario.
inline Scenario build_scenario(const ScenarioDocument& doc) {
    using detail::number;
    Scenario scn;

    const DocSection& top = doc.sections.front();
    int version = 0;
    detail::apply_section(top, {{"version", [&](const DocEntry& e) { version = detail::integer<int>(e); }}});
    if (const DocEntry* v = top.find("version"); !v) {
        throw ParseError("missing 'version'", 1, 1);
    } else if (version != kScenarioVersion) {
        throw ParseError("unsupported version " + v->value + " (expected " + std::to_string(kScenarioVersion) + ")",
                         v->line, v->value_column);
    }

    const DocSection* attacker = nullptr;
    const DocSection* target = nullptr;
    std::vector<const DocSection*> defenders;
    for (std::size_t i = 1; i < doc.sections.size(); ++i) {
        const DocSection& s = doc.sections[i];
        if (s.name == "attacker") attacker = &s;
        else if (s.name == "target") target = &s;
        else if (s.name == "defender") defenders.push_back(&s);
    }
    if (!attacker) throw ParseError("missing [attacker] section", 0, 0);
    if (!target) throw ParseError("missing [target] section", 0, 0);

    detail::require(*target, {"x", "y"});
    detail::apply_section(*target, {{"x", [&](const DocEntry& e) { scn.target.x = number(e); }},
                                    {"y", [&](const DocEntry& e) { scn.target.y = number(e); }}});

    detail::require(*attacker, {"x", "y"});
    std::optional<double> heading;
    detail::apply_section(*attacker,
                          {{"x", [&](const DocEntry& e) { scn.attacker_init.x = number(e); }},
                           {"y", [&](const DocEntry& e) { scn.attacker_init.y = number(e); }},
                           {"a_A", [&](const DocEntry& e) { scn.attacker_init.a_A = number(e); }},
                           {"speed", [&](const DocEntry& e) { scn.v_A = number(e); }},
                           {"heading", [&](const DocEntry& e) {
                                if (e.value != "target") heading = number(e);
                            }}});
    scn.attacker_init.gamma = heading ? wrap_angle(*heading) : heading_to(scn.attacker_init, scn.target);

    std::set<int> ids;
    for (std::size_t i = 0; i < defenders.size(); ++i) {
        const DocSection& s = *defenders[i];
        detail::require(s, {"x", "y"});
        DefenderSpec d;
        d.id = static_cast<int>(i) + 1;
        detail::apply_section(s, {{"id", [&](const DocEntry& e) { d.id = detail::integer<int>(e); }},
                                  {"x", [&](const DocEntry& e) { d.origin.x = number(e); }},
                                  {"y", [&](const DocEntry& e) { d.origin.y = number(e); }},
                                  {"range_R", [&](const DocEntry& e) { d.range_R = number(e); }},
                                  {"capture_c", [&](const DocEntry& e) { d.capture_c = number(e); }},
                                  {"mu", [&](const DocEntry& e) { d.mu = number(e); }}});
        if (!ids.insert(d.id).second) throw ParseError("duplicate defender id " + std::to_string(d.id), s.line, 1);
        scn.defenders.push_back(d);
    }

    for (std::size_t i = 1; i < doc.sections.size(); ++i) {
        const DocSection& s = doc.sections[i];
        if (s.name == "params") {
            bool eps_h_given = false;
            detail::apply_section(s, detail::param_setters(scn.params, eps_h_given));
            if (!eps_h_given) scn.params.eps_h = scn.params.eps_alpha;
        } else if (s.name == "sim") {
            detail::apply_section(s, {{"dt", [&](const DocEntry& e) { scn.dt = number(e); }},
                                      {"t_max", [&](const DocEntry& e) { scn.t_max = number(e); }},
                                      {"capture_radius", [&](const DocEntry& e) { scn.capture_radius = number(e); }},
                                      {"seed", [&](const DocEntry& e) {
                                           scn.seed = detail::integer<std::uint64_t>(e);
                                       }}});
        }
    }

    scn.validate();
    return scn;
}

/// Apply one `path=value` override to a document. Paths name a section and
/// key; defenders are addressed as defender.<id>.<key>.
inline void apply_override(ScenarioDocument& doc, std::string_view assignment) {
    const std::string text(assignment);
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ParameterError("override '" + text + "' must look like path=value");
    auto [pb, pe] = detail::trim_range(assignment, 0, eq);
    auto [vb, ve] = detail::trim_range(assignment, eq + 1, assignment.size());
    const std::string path(assignment.substr(pb, pe - pb));
    const std::string value(assignment.substr(vb, ve - vb));
    if (value.empty()) throw ParameterError("override '" + text + "' has no value");

    std::vector<std::string> parts;
    for (std::size_t start = 0;;) {
        const auto dot = path.find('.', start);
        parts.push_back(path.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }

    DocSection* target = nullptr;
    std::string key;
    if (parts.size() == 2 && parts[0] != "defender") {
        if (!detail::section_names().contains(parts[0]))
            throw ParameterError("override '" + text + "': unknown section '" + parts[0] + "'");
        for (auto& s : doc.sections)
            if (s.name == parts[0]) target = &s;
        if (!target) {
            doc.sections.push_back({parts[0], 0, {}});
            target = &doc.sections.back();
        }
        key = parts[1];
    } else if (parts.size() == 3 && parts[0] == "defender") {
        const auto id = parse_integer<int>(parts[1]);
        if (!id) throw ParameterError("override '" + text + "': defender id must be an integer");
        int ordinal = 0;
        for (auto& s : doc.sections) {
            if (s.name != "defender") continue;
            ++ordinal;
            const DocEntry* e = s.find("id");
            const auto sid = e ? parse_integer<int>(e->value) : std::optional<int>(ordinal);
            if (sid && *sid == *id) target = &s;
        }
        if (!target) throw ParameterError("override '" + text + "': no defender with id " + parts[1]);
        key = parts[2];
    } else {
        throw ParameterError("override '" + text + "': path must be section.key or defender.<id>.key");
    }
    if (!detail::is_ident(key)) throw ParameterError("override '" + text + "': invalid key '" + key + "'");

    for (auto& e : target->entries) {
        if (e.key == key) {
            e.value = value;
            return;
        }
    }
    target->entries.push_back({key, value, 0, 0, 0});
}

/// Parse, apply overrides in order, then validate.
inline Scenario parse_scenario(std::string_view text, const std::vector<std::string>& overrides = {}) {
    ScenarioDocument doc = parse_document(text);
    for (const auto& o : overrides) apply_override(doc, o);
    return build_scenario(doc);
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides = {}) {
    return parse_scenario(read_text_file(path), overrides);
}

/// Canonical text for a scenario. Every field is written, so parsing the
/// result gives back the same Scenario bit for bit.
inline std::string serialize_scenario(const Scenario& s) {
    std::string out;
    auto kv = [&out](const char* k, const std::string& v) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    };
    auto num = [&kv](const char* k, double v) { kv(k, format_double(v)); };

    kv("version", std::to_string(kScenarioVersion));
    out += "\n[attacker]\n";
    num("x", s.attacker_init.x);
    num("y", s.attacker_init.y);
    num("heading", s.attacker_init.gamma);
    num("a_A", s.attacker_init.a_A);
    num("speed", s.v_A);
    out += "\n[target]\n";
    num("x", s.target.x);
    num("y", s.target.y);
    for (const auto& d : s.defenders) {
        out += "\n[defender]\n";
        kv("id", std::to_string(d.id));
        num("x", d.origin.x);
        num("y", d.origin.y);
        num("range_R", d.range_R);
        num("capture_c", d.capture_c);
        num("mu", d.mu);
    }
    const auto& p = s.params;
    out += "\n[params]\n";
    num("K_s", p.K_s);
    num("K_I", p.K_I);
    num("K_a", p.K_a);
    num("beta", p.beta);
    num("eps_margin", p.eps_margin);
    num("eps_alpha", p.eps_alpha);
    num("delta", p.delta);
    num("eps_h", p.eps_h);
    num("a_max", p.a_max);
    kv("sat_n", std::to_string(p.sat_n));
    num("p1", p.p1);
    kv("switch_mode", to_string(p.switch_mode));
    num("sign_boundary_layer", p.sign_boundary_layer);
    num("denom_floor", p.denom_floor);
    num("sat_denom_floor", p.sat_denom_floor);
    num("rate_filter_steps", p.rate_filter_steps);
    out += "\n[sim]\n";
    num("dt", s.dt);
    num("t_max", s.t_max);
    num("capture_radius", s.capture_radius);
    kv("seed", std::to_string(s.seed));
    return out;
}

}  // namespace ezguide
