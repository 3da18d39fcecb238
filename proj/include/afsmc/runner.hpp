#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "afsmc/config.hpp"
#include "afsmc/csv.hpp"
#include "afsmc/errors.hpp"
#include "afsmc/sim.hpp"

namespace afsmc::runner {

inline std::filesystem::path trajectory_path(const std::filesystem::path& out_dir, const std::string& scenario,
                                             config::ControllerKind kind) {
    return out_dir / (scenario + "_" + config::to_string(kind) + ".csv");
}

namespace detail {

/// Rethrows the in-flight library error with the scenario name prepended, keeping its type.
[[noreturn]] inline void rethrow_named(const std::string& scenario) {
    const std::string prefix = "scenario '" + scenario + "': ";
    try {
        throw;
    } catch (const DivergenceError& e) {
        throw DivergenceError(prefix + e.what(), e.time());
    } catch (const SingularGainError& e) {
        throw SingularGainError(prefix + e.what());
    } catch (const DegenerateActivationError& e) {
        throw DegenerateActivationError(prefix + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const IoError& e) {
        throw IoError(prefix + e.what());
    }
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

}  // namespace detail

/// Simulates every controller of the scenario, writes one trajectory CSV per
/// controller and returns their metric rows. Nothing is written unless all runs succeed.
inline std::vector<io::SummaryRow> run_scenario(const config::Scenario& s, const std::filesystem::path& out_dir) {
    try {
        std::vector<sim::TrajectoryLog> logs;
        std::vector<io::SummaryRow> rows;
        for (auto kind : s.controllers) {
            logs.push_back(sim::run_closed_loop(s.plant, s.make_controller(kind), s.controller, s.sim));
            rows.push_back({s.name, config::to_string(kind), sim::compute_metrics(logs.back(), s.metrics)});
        }
        detail::ensure_directory(out_dir);
        std::vector<std::filesystem::path> written;
        try {
            for (std::size_t i = 0; i < logs.size(); ++i) {
                const auto path = trajectory_path(out_dir, s.name, s.controllers[i]);
                io::emit_csv(logs[i], path);
                written.push_back(path);
            }
        } catch (...) {
            std::error_code ec;
            for (const auto& p : written) std::filesystem::remove(p, ec);
            throw;
        }
        return rows;
    } catch (const Error&) {
        detail::rethrow_named(s.name);
    }
}

/// Runs scenarios on up to `jobs` threads and writes `summary.csv` once all
/// have finished. The first failure (in scenario order) is rethrown.
inline std::vector<io::SummaryRow> run_scenarios(const std::vector<config::Scenario>& scenarios,
                                                 const std::filesystem::path& out_dir, unsigned jobs = 1) {
    std::vector<std::vector<io::SummaryRow>> results(scenarios.size());
    std::vector<std::exception_ptr> errors(scenarios.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) {
            try {
                results[i] = run_scenario(scenarios[i], out_dir);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<io::SummaryRow> all;
    for (auto& r : results) all.insert(all.end(), r.begin(), r.end());
    io::write_summary(all, out_dir / "summary.csv");
    return all;
}

}  // namespace afsmc::runner
