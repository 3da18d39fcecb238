#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "afsmc/errors.hpp"
#include "afsmc/sim.hpp"

namespace afsmc::io {

inline constexpr std::string_view kTrajectoryHeader = "t,x1,x2,x3,x4,u,s1,s2,z,theta_f_norm,theta_g_norm,d";
inline constexpr std::string_view kSummaryHeader =
    "scenario,controller,settle_time,ise_x1,ise_x3,peak_dev_x1,peak_dev_x3,max_abs_u,rms_u";

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw IoError("malformed number '" + std::string(s) + "'");
    }
    return v;
}

/// Writes via a sibling temporary and renames it into place, so a failed
/// write never leaves a partial file at `path`.
inline void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

inline std::string trajectory_csv(const sim::TrajectoryLog& log) {
    std::string out;
    out.reserve(log.rows.size() * 160 + 64);
    out += kTrajectoryHeader;
    out += '\n';
    for (const auto& r : log.rows) {
        const double values[] = {r.t,  r.x[0], r.x[1], r.x[2],           r.x[3],           r.u,
                                 r.s1, r.s2,   r.z,    r.theta_f_norm, r.theta_g_norm, r.d};
        for (std::size_t i = 0; i < std::size(values); ++i) {
            if (i) out += ',';
            out += format_double(values[i]);
        }
        out += '\n';
    }
    return out;
}

inline void emit_csv(const sim::TrajectoryLog& log, const std::filesystem::path& path) {
    if (log.rows.empty()) throw IoError("refusing to write an empty trajectory to " + path.string());
    write_atomically(path, trajectory_csv(log));
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace detail

/// Reads a trajectory written by emit_csv. `desired` is not stored in the file.
inline sim::TrajectoryLog read_csv(const std::filesystem::path& path, const StateVec& desired = {}) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || lines.front() != kTrajectoryHeader) throw IoError(path.string() + ": unexpected header");
    sim::TrajectoryLog log;
    log.desired = desired;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = detail::split(lines[i]);
        if (f.size() != 12) throw IoError(path.string() + ": row " + std::to_string(i) + " has wrong field count");
        sim::TrajectoryRow r;
        r.t = parse_double(f[0]);
        for (int k = 0; k < 4; ++k) r.x[k] = parse_double(f[1 + k]);
        r.u = parse_double(f[5]);
        r.s1 = parse_double(f[6]);
        r.s2 = parse_double(f[7]);
        r.z = parse_double(f[8]);
        r.theta_f_norm = parse_double(f[9]);
        r.theta_g_norm = parse_double(f[10]);
        r.d = parse_double(f[11]);
        log.rows.push_back(r);
    }
    return log;
}

/// One line of the metrics summary table.
struct SummaryRow {
    std::string scenario;
    std::string controller;
    sim::Metrics metrics;
};

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        out << r.scenario << ',' << r.controller << ',' << format_double(m.settle_time) << ','
            << format_double(m.ise.at(0)) << ',' << format_double(m.ise.at(1)) << ','
            << format_double(m.peak_deviation.at(0)) << ',' << format_double(m.peak_deviation.at(1)) << ','
            << format_double(m.max_abs_u) << ',' << format_double(m.rms_u) << '\n';
    }
    return out.str();
}

inline void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
    write_atomically(path, summary_csv(rows));
}

inline std::vector<SummaryRow> read_summary(const std::filesystem::path& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || lines.front() != kSummaryHeader) throw IoError(path.string() + ": unexpected header");
    std::vector<SummaryRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = detail::split(lines[i]);
        if (f.size() != 9) throw IoError(path.string() + ": summary row has wrong field count");
        SummaryRow r{std::string(f[0]), std::string(f[1]), {}};
        r.metrics.settle_time = parse_double(f[2]);
        r.metrics.ise = {parse_double(f[3]), parse_double(f[4])};
        r.metrics.peak_deviation = {parse_double(f[5]), parse_double(f[6])};
        r.metrics.max_abs_u = parse_double(f[7]);
        r.metrics.rms_u = parse_double(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace afsmc::io
