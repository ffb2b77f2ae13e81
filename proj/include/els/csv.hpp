#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "els/errors.hpp"

namespace els {

/// Format a double with 17 significant digits: enough to round-trip exactly,
/// so re-running a saved config reproduces its CSVs byte for byte.
inline std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : f_(path) {
        if (!f_) throw IoError("csv: cannot open '" + path + "' for writing");
        for (std::size_t i = 0; i < header.size(); ++i)
            f_ << (i ? "," : "") << header[i];
        f_ << "\n";
        columns_ = header.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_)
            throw Error("csv: row has " + std::to_string(values.size()) + " values, header has " +
                        std::to_string(columns_));
        for (std::size_t i = 0; i < values.size(); ++i)
            f_ << (i ? "," : "") << csv_number(values[i]);
        f_ << "\n";
    }

  private:
    std::ofstream f_;
    std::size_t columns_ = 0;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw ParseError("csv: no column named '" + name + "'");
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("csv: cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(f, line)) throw ParseError("csv: empty file '" + path + "'");
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream rs(line);
        for (std::string cell; std::getline(rs, cell, ',');) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError("csv: non-numeric cell '" + cell + "' in '" + path + "'");
            }
        }
        if (row.size() != t.header.size())
            throw ParseError("csv: ragged row in '" + path + "'");
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace els
