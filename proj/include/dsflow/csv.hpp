#pragma once

// Trajectory CSV emission and a small strict reader. One header row; one
// data row per record; shortest round-trip number formatting so emitted
// bytes are deterministic and values reparse exactly.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsflow/errors.hpp"
#include "dsflow/flow.hpp"

namespace dsflow {

namespace detail {

inline std::string csv_num(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

} // namespace detail

/// Column layout: t, A_-1..A_n, B_-1..B_n, mink_1..mink_n, margin_space,
/// margin_cone, margin_pinch, max_r, min_r, max_u, dt, max_speed.
inline std::string series_csv(const Trajectory& traj) {
    const int n = traj.n;
    std::ostringstream out;
    out << "t";
    for (int l = -1; l <= n; ++l) out << ",A_" << l;
    for (int l = -1; l <= n; ++l) out << ",B_" << l;
    for (int l = 1; l <= n; ++l) out << ",mink_" << l;
    out << ",margin_space,margin_cone,margin_pinch,max_r,min_r,max_u,dt,max_speed\n";
    for (const auto& rec : traj.records) {
        out << detail::csv_num(rec.t);
        for (int l = -1; l <= n; ++l) out << ',' << detail::csv_num(rec.functionals.a(l));
        for (int l = -1; l <= n; ++l) out << ',' << detail::csv_num(rec.functionals.b(l));
        for (int l = 1; l <= n; ++l) out << ',' << detail::csv_num(rec.functionals.mink(l));
        out << ',' << detail::csv_num(rec.functionals.margin_space);
        out << ',' << detail::csv_num(rec.functionals.margin_cone);
        out << ',' << detail::csv_num(rec.functionals.margin_pinch);
        out << ',' << detail::csv_num(rec.max_r);
        out << ',' << detail::csv_num(rec.min_r);
        out << ',' << detail::csv_num(rec.max_u);
        out << ',' << detail::csv_num(rec.dt);
        out << ',' << detail::csv_num(rec.max_speed);
        out << '\n';
    }
    return out.str();
}

/// One row per record: t followed by every nodal radius.
inline std::string snapshots_csv(const Trajectory& traj) {
    std::ostringstream out;
    out << "t";
    for (std::size_t j = 0; j < traj.theta.size(); ++j) out << ",r_" << j;
    out << '\n';
    for (const auto& rec : traj.records) {
        out << detail::csv_num(rec.t);
        for (double v : rec.r) out << ',' << detail::csv_num(v);
        out << '\n';
    }
    return out.str();
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(path + ": cannot open file");
    CsvTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        if (lineno == 1) {
            while (std::getline(ls, cell, ',')) table.header.push_back(cell);
            if (table.header.empty())
                throw parse_error(path + ":1: empty header row");
            continue;
        }
        std::vector<double> row;
        while (std::getline(ls, cell, ',')) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || p != cell.data() + cell.size())
                throw parse_error(path + ":" + std::to_string(lineno) + ": bad number '" + cell +
                                  "'");
            row.push_back(v);
        }
        if (row.size() != table.header.size())
            throw parse_error(path + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(table.header.size()) + " columns, found " +
                              std::to_string(row.size()));
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw parse_error(path + ": empty file");
    return table;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error(path + ": cannot open for writing");
    out << content;
}

} // namespace dsflow
