#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace tglasso::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

/// Names of the commands that write a manifest.
const std::vector<std::string>& command_names();

/// Registers the parameters of `name` on `sub`. The returned callable
/// resolves them after parsing.
std::function<json()> register_command(const std::string& name, CLI::App* sub);

/**
 * Runs a command from a fully resolved config and writes its manifest.
 *
 * The output directory is config["out"], or $TGLASSO_DATA_DIR/<command> when
 * that is null. Returns the files written, relative to the output directory.
 */
std::vector<std::string> execute(const std::string& name, json config);

/// Re-executes the command recorded in a manifest; `out` overrides its
/// output directory when non-empty.
std::vector<std::string> rerun(const fs::path& manifest, const std::string& out);

} // namespace tglasso::cli
