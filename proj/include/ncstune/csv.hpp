#pragma once

#include <span>
#include <string>

namespace ncstune {

/// Shortest decimal form that parses back to exactly the same double, so
/// emitted CSVs are both round-trippable and byte-stable across runs.
std::string format_double(double v);

/// Comma-joined row of doubles in round-trip form, no trailing newline.
std::string csv_row(std::span<const double> values);

}  // namespace ncstune
