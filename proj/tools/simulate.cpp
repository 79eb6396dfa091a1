// Command-line front end: simulate <panels|map|fringes|verify|scan> --config <path> [--output <dir>]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "icdecay/commands.hpp"
#include "icdecay/config.hpp"

namespace {

std::string keys_help()
{
    std::string text = "Config file: one 'key = value' per line, '#' starts a comment.\nKeys:\n";
    for (const auto& k : icdecay::config_keys())
        text += "  " + std::string(k.name) + std::string(k.name.size() < 26 ? 26 - k.name.size() : 1, ' ') +
                std::string(k.help) + "\n";
    return text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Decay intensity of a rotating intermediate complex"};
    app.footer(keys_help());
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    struct Sub
    {
        const char* name;
        const char* help;
        icdecay::CommandOutcome (*run)(const icdecay::RunConfig&);
    };
    const Sub subs[] = {
        {"panels", "nine panel CSVs of the normalized intensity plus a manifest", icdecay::cmd_panels},
        {"map", "normalized intensity on the configured times and angles", icdecay::cmd_map},
        {"fringes", "visibility, spacing and compensated peak near 0 and 180 degrees", icdecay::cmd_fringes},
        {"verify", "tolerance checks; exits 1 if any fails", icdecay::cmd_verify},
        {"scan", "visibility against beta and omega_dot", icdecay::cmd_scan},
    };
    for (const auto& s : subs)
    {
        auto* sc = app.add_subcommand(s.name, s.help);
        sc->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
        sc->add_option("--output", output_dir, "output directory (overrides output_dir)");
        sc->footer(keys_help());
    }

    CLI11_PARSE(app, argc, argv);

    try
    {
        icdecay::RunConfig cfg = icdecay::load_config(config_path);
        if (!output_dir.empty())
            cfg.output_dir = output_dir;
        for (const auto& s : subs)
        {
            if (!app.got_subcommand(s.name))
                continue;
            const auto outcome = s.run(cfg);
            for (const auto& m : outcome.messages)
                std::cout << m << '\n';
            return outcome.exit_code;
        }
    }
    catch (const icdecay::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
