#include "params.hpp"

#include <tglasso/errors.hpp>
#include <tglasso/io.hpp>

#include <algorithm>
#include <sstream>

namespace tglasso::cli {
namespace {

std::string key_of(std::string name)
{
    std::replace(name.begin(), name.end(), '-', '_');
    return name;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_number(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ConfigError(key + ": '" + text + "' is not a number");
    return v;
}

long long parse_integer(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ConfigError(key + ": '" + text + "' is not an integer");
    return v;
}

unsigned long long parse_unsigned(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        if (!text.empty() && text.front() != '-') v = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ConfigError(key + ": '" + text + "' is not a non-negative integer");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(key + ": '" + text + "' is not a boolean");
}

void describe(CLI::Option* opt, const char* type, const json& def)
{
    opt->type_name(type);
    if (def.is_null()) return;
    if (def.is_array()) {
        std::string shown;
        for (const auto& v : def) shown += (shown.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
        opt->default_str(shown);
    } else {
        opt->default_str(def.is_string() ? def.get<std::string>() : def.dump());
    }
}

} // namespace

ParamSet::ParamSet(CLI::App* app) : app_(app)
{
    app_->add_option("--config", config_path_, "Config file (JSON object or key = value lines)");
}

ParamSet::Param& ParamSet::add(const std::string& name, Kind kind, json def)
{
    auto p = std::make_unique<Param>();
    p->key = key_of(name);
    p->kind = kind;
    p->def = std::move(def);
    params_.push_back(std::move(p));
    return *params_.back();
}

void ParamSet::number(const std::string& name, json def, const std::string& help)
{
    Param& p = add(name, Kind::kNumber, std::move(def));
    p.option = app_->add_option("--" + name, p.raw, help)->expected(1);
    describe(p.option, "FLOAT", p.def);
}

void ParamSet::integer(const std::string& name, json def, const std::string& help)
{
    Param& p = add(name, Kind::kInteger, std::move(def));
    p.option = app_->add_option("--" + name, p.raw, help)->expected(1);
    describe(p.option, "INT", p.def);
}

void ParamSet::unsigned_integer(const std::string& name, json def, const std::string& help)
{
    Param& p = add(name, Kind::kUnsigned, std::move(def));
    p.option = app_->add_option("--" + name, p.raw, help)->expected(1);
    describe(p.option, "UINT", p.def);
}

void ParamSet::string(const std::string& name, json def, const std::string& help)
{
    Param& p = add(name, Kind::kString, std::move(def));
    p.option = app_->add_option("--" + name, p.raw, help)->expected(1);
    describe(p.option, "TEXT", p.def);
}

void ParamSet::flag(const std::string& name, const std::string& help)
{
    Param& p = add(name, Kind::kFlag, false);
    p.option = app_->add_flag("--" + name, p.flag_value, help);
}

void ParamSet::number_list(const std::string& name, json def, const std::string& help)
{
    Param& p = add(name, Kind::kNumberList, std::move(def));
    p.option = app_->add_option("--" + name, p.raw, help)->delimiter(',');
    describe(p.option, "FLOAT", p.def);
}

void ParamSet::integer_list(const std::string& name, json def, const std::string& help)
{
    Param& p = add(name, Kind::kIntegerList, std::move(def));
    p.option = app_->add_option("--" + name, p.raw, help)->delimiter(',');
    describe(p.option, "INT", p.def);
}

void ParamSet::string_list(const std::string& name, json def, const std::string& help)
{
    Param& p = add(name, Kind::kStringList, std::move(def));
    p.option = app_->add_option("--" + name, p.raw, help)->delimiter(',');
    describe(p.option, "TEXT", p.def);
}

void ParamSet::positional(const std::string& name, json def, const std::string& help)
{
    Param& p = add(name, Kind::kStringList, std::move(def));
    p.option = app_->add_option(name, p.raw, help);
    describe(p.option, "NAME", p.def);
}

json ParamSet::convert(const Param& p, const std::vector<std::string>& raw)
{
    const std::string& key = p.key;
    const std::string first = raw.empty() ? std::string() : raw.front();
    switch (p.kind) {
        case Kind::kNumber: return parse_number(key, first);
        case Kind::kInteger: return parse_integer(key, first);
        case Kind::kUnsigned: return parse_unsigned(key, first);
        case Kind::kString: return first;
        case Kind::kFlag: return raw.empty() ? true : parse_bool(key, first);
        case Kind::kNumberList: {
            json a = json::array();
            for (const auto& s : raw) a.push_back(parse_number(key, s));
            return a;
        }
        case Kind::kIntegerList: {
            json a = json::array();
            for (const auto& s : raw) a.push_back(parse_integer(key, s));
            return a;
        }
        case Kind::kStringList: return json(raw);
    }
    return nullptr;
}

json ParamSet::coerce(const Param& p, const json& value)
{
    if (value.is_null()) return value;
    if (value.is_string()) {
        const std::string text = value.get<std::string>();
        switch (p.kind) {
            case Kind::kNumberList:
            case Kind::kIntegerList:
            case Kind::kStringList: return convert(p, split_list(text));
            default: return convert(p, {text});
        }
    }
    const auto bad = [&]() { return ConfigError(p.key + ": unexpected value " + value.dump()); };
    switch (p.kind) {
        case Kind::kNumber:
            if (!value.is_number()) throw bad();
            return value.get<double>();
        case Kind::kInteger:
            if (!value.is_number_integer()) throw bad();
            return value;
        case Kind::kUnsigned:
            if (!value.is_number_unsigned()) throw bad();
            return value;
        case Kind::kString: throw bad();
        case Kind::kFlag:
            if (!value.is_boolean()) throw bad();
            return value;
        case Kind::kNumberList:
        case Kind::kIntegerList:
        case Kind::kStringList: {
            if (!value.is_array()) throw bad();
            json a = json::array();
            for (const auto& v : value) {
                if (v.is_string()) {
                    a.push_back(convert(p, {v.get<std::string>()})[0]);
                } else if (p.kind == Kind::kNumberList && v.is_number()) {
                    a.push_back(v.get<double>());
                } else if (p.kind == Kind::kIntegerList && v.is_number_integer()) {
                    a.push_back(v);
                } else {
                    throw bad();
                }
            }
            return a;
        }
    }
    throw bad();
}

json ParamSet::resolve() const
{
    json out = json::object();
    for (const auto& p : params_) out[p->key] = p->def;

    if (!config_path_.empty()) {
        const json cfg = read_config_file(config_path_);
        for (const auto& [key, value] : cfg.items()) {
            const auto it = std::find_if(params_.begin(), params_.end(),
                                         [&](const auto& p) { return p->key == key_of(key); });
            if (it == params_.end()) throw ConfigError("config file: unknown key '" + key + "'");
            out[(*it)->key] = coerce(**it, value);
        }
    }
    for (const auto& p : params_) {
        if (p->option->count() == 0) continue;
        out[p->key] = p->kind == Kind::kFlag ? json(p->flag_value) : convert(*p, p->raw);
    }
    return out;
}

json read_config_file(const std::filesystem::path& path)
{
    const std::string text = io::read_text(path);
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        try {
            json doc = json::parse(t);
            if (!doc.is_object()) throw ConfigError(path.string() + ": config must be an object");
            return doc;
        } catch (const json::exception& e) {
            throw ConfigError(path.string() + ": invalid JSON config: " + e.what());
        }
    }
    json doc = json::object();
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string l = trim(line);
        if (l.empty() || l.front() == '#') continue;
        const auto eq = l.find_first_of("=:");
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        doc[trim(l.substr(0, eq))] = trim(l.substr(eq + 1));
    }
    return doc;
}

} // namespace tglasso::cli
