#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "hslo/thermal/field.hpp"

namespace hslo::thermal {

// HSLF binary layout, little-endian:
//   char[4] "HSLF" | u32 version (1) | u32 rows | u32 cols | rows*cols f64
inline constexpr char kFieldMagic[4] = {'H', 'S', 'L', 'F'};
inline constexpr std::uint32_t kFieldVersion = 1;

void write_field_binary(std::ostream& out, const Field2D& field);
Field2D read_field_binary(std::istream& in);

/// One row per line, values comma-separated, 9 significant digits.
void write_field_csv(std::ostream& out, const Field2D& field);
Field2D read_field_csv(std::istream& in);

void save_field(const std::filesystem::path& path, const Field2D& field);
/// Accepts either format; binary is recognized by its magic.
Field2D load_field(const std::filesystem::path& path);

}  // namespace hslo::thermal
