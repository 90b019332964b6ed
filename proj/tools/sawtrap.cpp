#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sawtrap/app/config.hpp"
#include "sawtrap/app/run.hpp"
#include "sawtrap/errors.hpp"

namespace app = sawtrap::app;

int main(int argc, char** argv) {
    CLI::App cli{"Trapping and Floquet analysis of carriers in surface acoustic wave lattices"};
    cli.set_version_flag("--version", SAWTRAP_VERSION);
    cli.require_subcommand(1);
    cli.fallthrough();

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    cli.add_option("-c,--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    cli.add_option("-s,--set", overrides, "Override a config field, e.g. --set drive.stability_q=0.4")
        ->take_all()
        ->allow_extra_args(false);
    cli.add_option("-o,--out", out_dir, "Output directory (output.dir)");
    bool dump = false;
    cli.add_flag("--print-config", dump, "Print the resolved config and exit");

    const std::vector<std::pair<app::Command, std::string>> commands{
        {app::Command::scales, "Derived trap scales of one material and drive"},
        {app::Command::stability, "Classical stability diagram over (q, k_BT/E_S)"},
        {app::Command::trajectory, "Single classical trajectory"},
        {app::Command::qme, "Gaussian moment master equation and reference oscillator"},
        {app::Command::hubbard, "Hubbard parameters t, U, J"},
        {app::Command::feasibility, "Energy-hierarchy and heating checks"},
        {app::Command::case_study, "High-velocity case study table"},
        {app::Command::plot, "Render a dataset written by another command"}};
    std::vector<std::pair<app::Command, CLI::App*>> subs;
    for (const auto& [cmd, help] : commands) subs.emplace_back(cmd, cli.add_subcommand(app::to_string(cmd), help));

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        app::Command cmd{};
        for (const auto& [c, s] : subs)
            if (s->parsed()) cmd = c;
        if (!out_dir.empty()) overrides.push_back("output.dir=\"" + out_dir + "\"");
        const auto config = app::load_config(config_path, overrides, cmd);
        if (dump) {
            std::cout << app::config_to_json(config).dump(2) << "\n";
            return 0;
        }
        app::run(config, std::cout);
        return 0;
    } catch (const sawtrap::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sawtrap::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
