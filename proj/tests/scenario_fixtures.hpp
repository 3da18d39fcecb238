#pragma once

#include <filesystem>
#include <string>

#include "afsmc/config.hpp"

#ifndef AFSMC_SOURCE_DIR
#error "AFSMC_SOURCE_DIR must be defined"
#endif

inline std::filesystem::path shipped_config_path() {
    return std::filesystem::path(AFSMC_SOURCE_DIR) / "configs" / "benchmark_cases.yaml";
}

inline afsmc::config::Scenario shipped_scenario(const std::string& name) {
    for (auto& s : afsmc::config::load_config(shipped_config_path())) {
        if (s.name == name) return s;
    }
    throw std::runtime_error("no shipped scenario " + name);
}

inline std::filesystem::path fresh_temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("afsmc_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}
