/**
 * @file trajectory_csv.hpp
 * @brief Trajectory logs as comma-separated text.
 *
 * Columns, in order (units in the header):
 *   t, x, y, gamma, a_A, a_T, a_b, alpha, a_d, a_c, z, h, r_AT, sigma_AT,
 *   then r_<id>, sigma_<id>, b_<id> for each defender, then a_b_degenerate.
 *
 * a_b is `nan` when the safety law is singular or there are no defenders;
 * a_b_degenerate is 1 only in the first case. h is `inf` with no defenders.
 * Numbers are written in shortest round-trip form.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ezguide/errors.hpp"
#include "ezguide/number_format.hpp"
#include "ezguide/simulator.hpp"

namespace ezguide {

inline std::vector<std::string> trajectory_csv_header(const std::vector<int>& defender_ids) {
    std::vector<std::string> h{"t (s)",       "x (m)",         "y (m)",       "gamma (rad)",
                               "a_A (m/s^2)", "a_T (m/s^2)",   "a_b (m/s^2)", "alpha (-)",
                               "a_d (m/s^2)", "a_c (m/s^2)",   "z (m/s^2)",   "h (m)",
                               "r_AT (m)",    "sigma_AT (rad)"};
    for (int id : defender_ids) {
        const std::string s = std::to_string(id);
        h.push_back("r_" + s + " (m)");
        h.push_back("sigma_" + s + " (rad)");
        h.push_back("b_" + s + " (m)");
    }
    h.push_back("a_b_degenerate (-)");
    return h;
}

inline void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out) {
    if (log.rows.empty()) throw Error("trajectory log is empty");
    const auto header = trajectory_csv_header(log.defender_ids);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::string line;
    for (const auto& row : log.rows) {
        const auto& g = row.guidance;
        line.clear();
        auto put = [&line](double v) {
            if (!line.empty()) line += ',';
            line += format_double(v);
        };
        put(row.t);
        put(row.state.x);
        put(row.state.y);
        put(row.state.gamma);
        put(row.state.a_A);
        put(g.a_T);
        put(g.a_b ? *g.a_b : nan);
        put(g.alpha);
        put(g.a_d);
        put(g.a_c);
        put(g.z);
        put(g.h);
        put(row.r_AT);
        put(row.sigma_AT);
        for (const auto& d : row.defenders) {
            put(d.r);
            put(d.sigma);
            put(d.b);
        }
        line += (!row.defenders.empty() && !g.a_b) ? ",1" : ",0";
        out << line << '\n';
    }
    if (!out) throw Error("failed writing trajectory CSV");
}

inline void write_trajectory_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_trajectory_csv(log, out);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reader for the files written above (no quoting needed, none accepted).
inline CsvTable read_trajectory_csv(std::string_view text) {
    CsvTable t;
    auto split = [](std::string_view line) {
        std::vector<std::string_view> cells;
        for (std::size_t start = 0;;) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return cells;
    };
    int line_no = 0;
    for (std::size_t pos = 0; pos < text.size();) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const auto cells = split(line);
        if (t.header.empty()) {
            for (auto c : cells) t.header.emplace_back(c);
            continue;
        }
        if (cells.size() != t.header.size()) throw ParseError("row has the wrong number of columns", line_no, 1);
        std::vector<double>& row = t.rows.emplace_back();
        int col = 1;
        for (auto c : cells) {
            const auto v = parse_double(c);
            if (!v) throw ParseError("not a number: '" + std::string(c) + "'", line_no, col);
            row.push_back(*v);
            col += static_cast<int>(c.size()) + 1;
        }
    }
    return t;
}

}  // namespace ezguide
