#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace tglasso::cli {

using json = nlohmann::json;

/**
 * Typed command parameters with layered resolution.
 *
 * Each parameter is registered once as a CLI11 option. resolve() starts from
 * the built-in defaults, overlays the config file, then overlays every flag
 * actually given on the command line. Config keys use underscores where the
 * flag uses dashes (--n-train ↔ n_train).
 */
class ParamSet
{
public:
    enum class Kind
    {
        kNumber,
        kInteger,
        kUnsigned,
        kString,
        kFlag,
        kNumberList,
        kIntegerList,
        kStringList,
    };

    explicit ParamSet(CLI::App* app);

    void number(const std::string& name, json def, const std::string& help);
    void integer(const std::string& name, json def, const std::string& help);
    void unsigned_integer(const std::string& name, json def, const std::string& help);
    void string(const std::string& name, json def, const std::string& help);
    void flag(const std::string& name, const std::string& help);
    void number_list(const std::string& name, json def, const std::string& help);
    void integer_list(const std::string& name, json def, const std::string& help);
    void string_list(const std::string& name, json def, const std::string& help);
    /// Positional string list; counts as given when non-empty.
    void positional(const std::string& name, json def, const std::string& help);

    /// Defaults < config file (--config) < flags. ConfigError on unknown
    /// config keys or unparsable values.
    json resolve() const;

private:
    struct Param
    {
        std::string key;
        Kind kind;
        json def;
        CLI::Option* option = nullptr;
        std::vector<std::string> raw;
        bool flag_value = false;
    };

    Param& add(const std::string& name, Kind kind, json def);
    static json convert(const Param& p, const std::vector<std::string>& raw);
    static json coerce(const Param& p, const json& value);

    CLI::App* app_;
    std::vector<std::unique_ptr<Param>> params_;
    std::string config_path_;
};

/// JSON object, or "key = value" lines with '#' comments.
json read_config_file(const std::filesystem::path& path);

} // namespace tglasso::cli
