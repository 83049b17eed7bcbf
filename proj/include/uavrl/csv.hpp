#pragma once

#include <charconv>
#include <type_traits>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "uavrl/errors.hpp"

namespace uavrl::csv {

// Shortest round-trip formatting keeps the files exact and diffable.
inline std::string format(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

template <typename T>
    requires std::is_integral_v<T>
std::string format(T x) {
    return std::to_string(x);
}

class Writer {
public:
    Writer(const std::string& path, const std::vector<std::string>& header) : path_(path) {
        out_.open(path, std::ios::trunc);
        if (!out_) throw IoError("csv: cannot open " + path + " for writing");
        write_row_strings(header);
    }

    template <typename... Fields>
    void row(const Fields&... fields) {
        std::vector<std::string> cells;
        cells.reserve(sizeof...(fields));
        (cells.push_back(format(fields)), ...);
        write_row_strings(cells);
    }

    void row_strings(const std::vector<std::string>& cells) { write_row_strings(cells); }

    void flush() { out_.flush(); }

private:
    void write_row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
        if (!out_) throw IoError("csv: write failed for " + path_);
    }

    std::string path_;
    std::ofstream out_;
};

} // namespace uavrl::csv
