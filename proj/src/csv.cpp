#include "ncstune/csv.hpp"

#include <charconv>
#include <system_error>

namespace ncstune {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_row(std::span<const double> values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line.push_back(',');
        line += format_double(values[i]);
    }
    return line;
}

}  // namespace ncstune
