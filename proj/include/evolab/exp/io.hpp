#pragma once

// File and formatting plumbing for run archives.
//
// Doubles are always printed with %.17g so logged values round-trip exactly;
// determinism checks compare archives byte for byte.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evolab/core/rng.hpp"

namespace evolab::exp {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec && !std::filesystem::is_directory(dir))
        throw std::runtime_error("could not create directory " + dir.string());
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("could not open " + path.string() + " for writing");
    os << text;
    if (!os) throw std::runtime_error("write failed for " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("could not open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// Minimal CSV reader for the archive formats (numeric and bare-word fields,
// no quoting). Returns rows of cells; the first row is the header.
inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("could not open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

// nlohmann::json objects keep sorted keys, so dump() is canonical.
inline std::string config_hash_hex(const nlohmann::json& config) {
    const std::uint64_t h = core::fnv1a64(config.dump());
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace evolab::exp
