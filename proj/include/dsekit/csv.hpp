#pragma once

// Front CSV format (consumed/produced repo-wide): header `o1,...,om`,
// one row per objective vector, decimal reals, UTF-8, LF line endings.
// All number formatting goes through std::to_chars so output is
// locale-independent and round-trips exactly.

#include <string>
#include <vector>

#include "dsekit/core.hpp"

namespace dsekit {

std::string format_double(double v);  // shortest round-trip representation
double parse_double(const std::string& cell, int line);  // parse_error on bad input

std::vector<std::string> split_csv_line(const std::string& line);

std::string front_to_csv(std::span<const ObjectiveVector> front);
std::vector<ObjectiveVector> front_from_csv(const std::string& text);

std::vector<ObjectiveVector> read_front_file(const std::string& path);
void write_front_file(const std::string& path, std::span<const ObjectiveVector> front);

std::string read_text_file(const std::string& path);
// Write-temp-then-rename so output files appear atomically.
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace dsekit
