// exionet: command-line driver for the footprint / EEEI / network pipeline.

#include "exionet/config.hpp"
#include "exionet/errors.hpp"
#include "exionet/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>
#include <string>

using namespace exionet;

int main(int argc, char** argv)
{
    CLI::App app{"exionet - multi-regional footprints, equality index and trade networks"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string period;
    std::string kind;
    std::map<std::string, std::string> overrides;

    app.add_option("--config", config_path, "TOML-style run configuration")->check(CLI::ExistingFile);
    app.add_option("--period", period, "restrict to one configured period (P1..P4 or a custom label)");
    app.add_option("--kind", kind, "emission | value | inequality");

    // Every config key is also a flag of the same dotted name; a few have short aliases.
    const std::map<std::string, std::string> aliases{{"eeei.orientation", "--orientation"}};
    std::map<std::string, std::string> raw;
    for (const auto& key : pipeline::config_keys()) {
        std::string names = "--" + key;
        if (const auto it = aliases.find(key); it != aliases.end()) {
            names += "," + it->second;
        }
        app.add_option(names, raw[key], "config override: " + key);
    }

    const std::vector<std::pair<std::string, std::string>> commands{
        {"ingest", "parse raw tables into the canonical workspace and validate balances"},
        {"footprint", "solve footprint flows per year and combine periods"},
        {"eeei", "net flows, equality index and distance matrices"},
        {"network", "trade graphs (GEXF) with PageRank and clustering"},
        {"export", "JSON mirrors of the tabular results"},
        {"pipeline", "all stages in order, then manifest.json"},
    };
    for (const auto& [name, help] : commands) {
        app.add_subcommand(name, help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        for (const auto& [key, value] : raw) {
            if (app.count("--" + key) > 0) {
                overrides[key] = value;
            }
        }
        config::Table table;
        std::filesystem::path config_dir = ".";
        if (!config_path.empty()) {
            table = config::load(config_path);
            config_dir = std::filesystem::path(config_path).parent_path();
            if (config_dir.empty()) {
                config_dir = ".";
            }
        }
        const auto cfg = pipeline::make_config(table, config_dir, overrides);

        pipeline::Selection selection;
        if (!period.empty()) {
            selection.period = period;
            cfg.period(period);
        }
        if (!kind.empty()) {
            selection.kind = network::parse_graph_kind(kind);
        }

        if (command == "ingest") return pipeline::cmd_ingest(cfg);
        if (command == "footprint") return pipeline::cmd_footprint(cfg, selection);
        if (command == "eeei") return pipeline::cmd_eeei(cfg, selection);
        if (command == "network") return pipeline::cmd_network(cfg, selection);
        if (command == "export") return pipeline::cmd_export(cfg, selection);
        return pipeline::cmd_pipeline(cfg);
    } catch (const Error& e) {
        std::cerr << "exionet " << command << ": error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "exionet " << command << ": error: " << e.what() << '\n';
        return 1;
    }
}
