#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "simlearn/core.hpp"

namespace simlearn {

// Plain-text matrices: one row per line, comma-separated decimal literals,
// no header, '.' as decimal separator, LF line endings. Values are written
// in shortest round-trip form so a write/read cycle is lossless.

Matrix parse_csv(std::string_view text);
std::string format_csv(const Matrix& mat);

/// Throws IoError if the file cannot be opened, ValidationError if it does
/// not parse as a rectangular numeric matrix.
Matrix read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const Matrix& mat);

}  // namespace simlearn
