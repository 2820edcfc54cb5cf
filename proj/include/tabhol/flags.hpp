#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace tabhol {

using FlagValue = std::variant<bool, std::int64_t>;

struct FlagSpec {
    std::string_view name;
    FlagValue default_value;
    std::string_view doc;
};

/// Every flag the engine understands, with its default.
std::span<const FlagSpec> known_flags();

class UnknownFlag : public std::runtime_error {
public:
    UnknownFlag(std::string name, int line);
    const std::string& name() const { return name_; }
    int line() const { return line_; }

private:
    std::string name_;
    int line_;
};

class ModeParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mode: values for every known flag.
class FlagMap {
public:
    FlagMap();

    /// Parse and set from text; `line` is only used in error messages.
    void set(std::string_view name, std::string_view value, int line = 0);
    void set(std::string_view name, FlagValue value);

    bool get_bool(std::string_view name) const;
    std::int64_t get_int(std::string_view name) const;
    const std::map<std::string, FlagValue, std::less<>>& values() const { return values_; }

    friend bool operator==(const FlagMap&, const FlagMap&) = default;

private:
    std::map<std::string, FlagValue, std::less<>> values_;
};

/// `name value` lines over the defaults; `%` starts a comment.
FlagMap parse_mode(std::string_view text);
FlagMap load_mode(const std::filesystem::path& path);

} // namespace tabhol
