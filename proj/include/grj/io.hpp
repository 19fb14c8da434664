#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "grj/numerics.hpp"

namespace grj {

/// Shortest decimal that parses back to the same double ("nan", "inf", "-inf" otherwise).
std::string format_double(double v);

/// Headerless CSV, one comma-separated vector per row.
void write_rows_csv(const std::filesystem::path& path, const std::vector<Vector>& rows);
/// Reads a headerless numeric CSV; blank lines are skipped, ragged rows rejected.
std::vector<Vector> read_rows_csv(const std::filesystem::path& path);

/// Lexicographic order on vectors; used for deterministic front files.
void sort_lexicographic(std::vector<Vector>& rows);

}  // namespace grj
