// Scenario runner: validate, list and run closed-loop experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "afsmc/config.hpp"
#include "afsmc/runner.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kDivergence = 2, kIo = 3 };

std::vector<afsmc::config::Scenario> select(std::vector<afsmc::config::Scenario> all,
                                            const std::vector<std::string>& names) {
    if (names.empty()) return all;
    std::vector<afsmc::config::Scenario> out;
    for (const auto& n : names) {
        bool found = false;
        for (const auto& s : all) {
            if (s.name == n) {
                out.push_back(s);
                found = true;
            }
        }
        if (!found) throw afsmc::ConfigError("scenario '" + n + "' not found in config");
    }
    return out;
}

int report(const std::exception& e, int code) {
    std::cerr << "error: " << e.what() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive fuzzy sliding-mode control experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::string> names;

    auto* run = app.add_subcommand("run", "simulate scenarios and write CSV trajectories plus summary.csv");
    run->add_option("--config", config_path, "scenario file")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--jobs", jobs, "parallel scenarios")->check(CLI::PositiveNumber);
    run->add_option("--scenario", names, "run only the named scenario (repeatable)");

    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("--config", config_path, "scenario file")->required();

    auto* list = app.add_subcommand("list", "list scenarios in a file");
    list->add_option("--config", config_path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const auto scenarios = afsmc::config::load_config(config_path);
        if (*validate) {
            std::cout << config_path << ": " << scenarios.size() << " scenario(s) valid\n";
        } else if (*list) {
            for (const auto& s : scenarios) {
                std::cout << s.name << '\t' << afsmc::plants::to_string(s.plant.kind()) << '\t';
                for (std::size_t i = 0; i < s.controllers.size(); ++i) {
                    std::cout << (i ? "," : "") << afsmc::config::to_string(s.controllers[i]);
                }
                std::cout << '\n';
            }
        } else {
            const auto chosen = select(scenarios, names);
            const auto rows = afsmc::runner::run_scenarios(chosen, out_dir, jobs);
            std::cout << afsmc::io::summary_csv(rows);
        }
    } catch (const afsmc::ConfigError& e) {
        return report(e, kValidation);
    } catch (const afsmc::IoError& e) {
        return report(e, kIo);
    } catch (const afsmc::Error& e) {
        return report(e, kDivergence);
    }
    return kOk;
}
