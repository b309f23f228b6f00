#include "csv_util.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "cmpkit/errors.hpp"

namespace cmpkit::csv {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    return out;
}

double to_double(const std::string& cell) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || (end && *end != '\0')) {
        throw InvalidArgument("not a number: '" + cell + "'");
    }
    return v;
}

std::string format(double v) {
    char buf[32];
    for (int prec = 9; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

} // namespace cmpkit::csv
