// vibrobeam <eigen|simulate|sweep|spectrum> --config FILE [--out DIR] [--threads N]
// vibrobeam --print-defaults

#include "vibrobeam/commands.hpp"
#include "vibrobeam/config.hpp"
#include "vibrobeam/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Base-excited cantilever with a unilateral tip spring"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_dir = ".";
    unsigned threads = 1;
    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "Print the documented default configuration");

    std::vector<CLI::App*> subcommands;
    for (const char* name : {"eigen", "simulate", "sweep", "spectrum"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "Configuration file (defaults if omitted)");
        sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
        sub->add_option("--threads", threads, "Sweep worker threads")
            ->check(CLI::Range(1u, 1024u))
            ->capture_default_str();
        sub->add_flag("--print-defaults", print_defaults,
                      "Print the documented default configuration");
        subcommands.push_back(sub);
    }
    app.description(app.get_description() + "\nsubcommands: eigen, simulate, sweep, spectrum");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : vibrobeam::exit_code::config_error;
    }

    if (print_defaults) {
        std::cout << vibrobeam::serialize_config(vibrobeam::RunConfig{}, true);
        return vibrobeam::exit_code::ok;
    }

    CLI::App* chosen = nullptr;
    for (CLI::App* sub : subcommands) {
        if (sub->parsed()) {
            chosen = sub;
        }
    }
    if (chosen == nullptr) {
        std::cerr << app.help();
        return vibrobeam::exit_code::config_error;
    }

    std::string text;
    if (!config_path.empty()) {
        std::ifstream file(config_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot read " << config_path << '\n';
            return vibrobeam::exit_code::config_error;
        }
        std::ostringstream buffer;
        buffer << file.rdbuf();
        text = buffer.str();
    }

    vibrobeam::RunConfig cfg;
    try {
        cfg = vibrobeam::parse_config(text);
    } catch (const vibrobeam::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return vibrobeam::exit_code::config_error;
    }
    cfg.output_dir = out_dir;
    cfg.threads = threads;

    const auto cmd = vibrobeam::parse_command(chosen->get_name());
    const auto result = vibrobeam::run_subcommand(*cmd, cfg, text, std::cout, std::cerr);
    return result.exit_code;
}
