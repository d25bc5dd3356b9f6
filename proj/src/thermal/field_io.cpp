#include "hslo/thermal/field_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hslo/binary_io.hpp"
#include "hslo/error.hpp"

namespace hslo::thermal {

Field2D::Field2D(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) throw DomainError("field value count does not match shape");
}

void write_field_binary(std::ostream& out, const Field2D& field) {
  std::string buf;
  buf.reserve(16 + 8 * field.size());
  buf.append(kFieldMagic, 4);
  binary::put(buf, kFieldVersion);
  binary::put(buf, static_cast<std::uint32_t>(field.rows()));
  binary::put(buf, static_cast<std::uint32_t>(field.cols()));
  for (double v : field.values()) binary::put_f64(buf, v);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("failed writing field");
}

Field2D read_field_binary(std::istream& in) {
  const auto header = binary::read_exact(in, 16, "field header");
  if (header.compare(0, 4, kFieldMagic, 4) != 0) throw FormatError("bad field magic (expected HSLF)");
  const auto version = binary::get<std::uint32_t>(header.data() + 4);
  if (version != kFieldVersion) {
    throw FormatError("unsupported field version " + std::to_string(version));
  }
  const auto rows = binary::get<std::uint32_t>(header.data() + 8);
  const auto cols = binary::get<std::uint32_t>(header.data() + 12);
  const std::size_t count = std::size_t{rows} * cols;
  const auto body = binary::read_exact(in, 8 * count, "field values");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) values[i] = binary::get_f64(body.data() + 8 * i);
  return Field2D(rows, cols, std::move(values));
}

void write_field_csv(std::ostream& out, const Field2D& field) {
  char buf[32];
  std::string line;
  for (std::size_t r = 0; r < field.rows(); ++r) {
    line.clear();
    for (std::size_t c = 0; c < field.cols(); ++c) {
      if (c) line.push_back(',');
      const int len = std::snprintf(buf, sizeof buf, "%.9g", field(r, c));
      line.append(buf, static_cast<std::size_t>(len));
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw IoError("failed writing field CSV");
}

Field2D read_field_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t count = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      const auto end = std::min(line.find(',', start), line.size());
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + end, v);
      if (ec != std::errc() || ptr != line.data() + end) {
        throw FormatError("field CSV row " + std::to_string(rows + 1) + ": bad number");
      }
      values.push_back(v);
      ++count;
      start = end + 1;
    }
    if (rows == 0) cols = count;
    if (count != cols) {
      throw FormatError("field CSV row " + std::to_string(rows + 1) + " has " +
                        std::to_string(count) + " values, expected " + std::to_string(cols));
    }
    ++rows;
  }
  return Field2D(rows, cols, std::move(values));
}

void save_field(const std::filesystem::path& path, const Field2D& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (path.extension() == ".csv") {
    write_field_csv(out, field);
  } else {
    write_field_binary(out, field);
  }
}

Field2D load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  const bool binary = in.gcount() == 4 && std::equal(magic, magic + 4, kFieldMagic);
  in.clear();
  in.seekg(0);
  return binary ? read_field_binary(in) : read_field_csv(in);
}

}  // namespace hslo::thermal
