#pragma once

#include <span>
#include <string>
#include <string_view>

namespace hyperkin::csv {

/// 12 significant digits, "%.12g". Deterministic across runs.
std::string format_number(double value);

/// Joins already-formatted fields with commas and appends '\n'.
std::string row(std::span<const std::string> fields);

/// Quotes a field if it holds a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace hyperkin::csv
