#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hgrn {

//! Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

//! RFC-4180 field quoting (only applied when needed).
std::string csv_field(std::string_view text);

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

//! Splits one CSV record; understands quoted fields with doubled quotes.
std::vector<std::string> split_csv_row(std::string_view line);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

} // namespace hgrn
