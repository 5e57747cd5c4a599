#include "commands.hpp"

#include <tglasso/errors.hpp>

#include <iostream>

namespace {

int exit_code_for(const std::exception& e)
{
    using namespace tglasso;
    if (dynamic_cast<const IoError*>(&e)) return 3;
    if (dynamic_cast<const SolverError*>(&e)) return 4;
    if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const ConfigError*>(&e)
        || dynamic_cast<const DimensionError*>(&e)) {
        return 2;
    }
    return 4;
}

} // namespace

int main(int argc, char** argv)
{
    namespace cli = tglasso::cli;
    CLI::App app{"Tree-guided group lasso for multiple-output regression"};
    app.set_version_flag("--version", std::string(TGLASSO_VERSION));
    app.require_subcommand(1);

    std::string selected;
    std::function<cli::json()> resolve;
    std::vector<std::pair<std::string, std::function<cli::json()>>> resolvers;
    for (const auto& name : cli::command_names()) {
        CLI::App* sub = app.add_subcommand(name, "");
        resolvers.emplace_back(name, cli::register_command(name, sub));
        sub->callback([&selected, name]() { selected = name; });
    }
    app.get_subcommand("simulate")->description("Generate a synthetic data set and its true tree");
    app.get_subcommand("cluster")->description("Learn an output tree from Y by average-linkage clustering");
    app.get_subcommand("fit")->description("Fit tree-guided group lasso coefficients");
    app.get_subcommand("eval")->description("Score coefficients (ROC, AUC) or predictions (MSE)");
    app.get_subcommand("reproduce")->description("Run the simulation study behind fig3, fig4, fig5");

    std::string manifest;
    std::string rerun_out;
    CLI::App* rerun = app.add_subcommand("rerun", "Re-execute the command recorded in a manifest");
    rerun->add_option("manifest", manifest, "manifest.json of a previous run")->required();
    rerun->add_option("--out", rerun_out, "Output directory (default: the recorded one)");
    rerun->callback([&selected]() { selected = "rerun"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::vector<std::string> written;
        if (selected == "rerun") {
            written = cli::rerun(manifest, rerun_out);
        } else {
            for (const auto& [name, fn] : resolvers) {
                if (name == selected) written = cli::execute(name, fn());
            }
        }
        for (const auto& f : written) std::cout << f << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}
