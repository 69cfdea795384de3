#include "pseudoscore/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pseudoscore {

std::vector<std::string> split_fields(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

void for_each_row(const std::string& path, char delim,
                  std::vector<std::string>& header,
                  const std::function<void(std::size_t, const std::vector<std::string>&)>& row) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header) {
            header = split_fields(line, delim);
            have_header = true;
            continue;
        }
        row(lineno, split_fields(line, delim));
    }
    if (!have_header) throw std::runtime_error("empty file (no header row): " + path);
}

std::string join_fields(const std::vector<std::string>& fields, char delim) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(delim);
        out += fields[i];
    }
    out.push_back('\n');
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (v == static_cast<long long>(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    // round-trip: try increasing precision until the value parses back exactly
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace pseudoscore
