#include "tabhol/flags.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace tabhol {

namespace {

constexpr std::int64_t I(std::int64_t v) { return v; }

const std::array<FlagSpec, 15> kFlags = {{
    {"priority_atom", I(0), "atoms, negated atoms, equations and disequations at sorts"},
    {"priority_alpha", I(1), "non-branching rules: negated implication, fresh witnesses, extensionality"},
    {"priority_forall", I(1), "processing a universal proposition"},
    {"priority_beta", I(2), "branching rules: implication and boolean (dis)equations"},
    {"priority_instantiate", I(3), "instantiating a universal proposition with a known term"},
    {"priority_mate", I(2), "mating a positive and a negative atom"},
    {"priority_confront", I(3), "confronting a sort equation with a sort disequation"},
    {"default_inst_priority", I(8), "creating a default instantiation for an empty type"},
    {"priority_aging", I(0), "when positive, commands enqueued at step n get n / priority_aging added"},
    {"sat_search_delay", false, "propagate only; full SAT search only every sat_search_period steps"},
    {"sat_search_period", I(64), "steps between full SAT searches while sat_search_delay is set"},
    {"enable_decompose", true, "decompose disequations between terms with the same constant head"},
    {"enable_choice", true, "choice rule for closed choice terms"},
    {"enable_neq_fun", true, "fresh-witness rule for disequations at function types"},
    {"enable_mate", true, "mating rule"},
}};

const FlagSpec* find_spec(std::string_view name) {
    for (const auto& f : kFlags)
        if (f.name == name) return &f;
    return nullptr;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace

std::span<const FlagSpec> known_flags() { return kFlags; }

UnknownFlag::UnknownFlag(std::string name, int line)
    : std::runtime_error("unknown flag '" + name + "'" + (line > 0 ? " on line " + std::to_string(line) : "")),
      name_(std::move(name)), line_(line) {}

FlagMap::FlagMap() {
    for (const auto& f : kFlags) values_.emplace(std::string(f.name), f.default_value);
}

void FlagMap::set(std::string_view name, FlagValue value) {
    const FlagSpec* spec = find_spec(name);
    if (!spec) throw UnknownFlag(std::string(name), 0);
    if (spec->default_value.index() != value.index())
        throw ModeParseError("flag " + std::string(name) + " given a value of the wrong kind");
    values_[std::string(name)] = value;
}

void FlagMap::set(std::string_view name, std::string_view text, int line) {
    const FlagSpec* spec = find_spec(name);
    if (!spec) throw UnknownFlag(std::string(name), line);
    std::string where = line > 0 ? " on line " + std::to_string(line) : "";
    if (std::holds_alternative<bool>(spec->default_value)) {
        if (text == "true" || text == "1")
            values_[std::string(name)] = true;
        else if (text == "false" || text == "0")
            values_[std::string(name)] = false;
        else
            throw ModeParseError("flag " + std::string(name) + " expects true/false" + where);
        return;
    }
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ModeParseError("flag " + std::string(name) + " expects an integer" + where);
    values_[std::string(name)] = v;
}

bool FlagMap::get_bool(std::string_view name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw UnknownFlag(std::string(name), 0);
    return std::get<bool>(it->second);
}

std::int64_t FlagMap::get_int(std::string_view name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw UnknownFlag(std::string(name), 0);
    return std::get<std::int64_t>(it->second);
}

FlagMap parse_mode(std::string_view text) {
    FlagMap flags;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto pct = line.find('%'); pct != std::string_view::npos) line = line.substr(0, pct);
        line = trim(line);
        if (line.empty()) continue;
        auto sp = line.find_first_of(" \t");
        if (sp == std::string_view::npos)
            throw ModeParseError("expected 'name value' on line " + std::to_string(line_no));
        std::string_view name = line.substr(0, sp);
        std::string_view value = trim(line.substr(sp));
        if (value.find_first_of(" \t") != std::string_view::npos)
            throw ModeParseError("trailing text on line " + std::to_string(line_no));
        flags.set(name, value, line_no);
    }
    return flags;
}

FlagMap load_mode(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ModeParseError("cannot open mode file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_mode(buf.str());
}

} // namespace tabhol
