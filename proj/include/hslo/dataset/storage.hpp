#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <optional>

#include "hslo/dataset/sampling.hpp"
#include "hslo/thermal/field.hpp"

namespace hslo::dataset {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kManifestFile = "manifest.txt";
inline constexpr const char* kSamplesFile = "samples.bin";

struct SamplePair {
  thermal::Layout layout;
  thermal::TemperatureField field;
  double tmax_K = 0.0;
  double r_m = 0.0;
};

struct DatasetManifest {
  thermal::DomainSpec spec;
  IntensityScheme scheme;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  int format_version = kFormatVersion;

  bool operator==(const DatasetManifest&) const = default;
};

/// Plain text, one `key=value` per line.
void write_manifest(std::ostream& out, const DatasetManifest& manifest);
/// Throws FormatError on missing/unknown keys or a version mismatch.
DatasetManifest read_manifest(std::istream& in);

/// Layout of sample `index` for a given seed. Independent of every other
/// sample, which is what makes resuming byte-identical.
thermal::Layout sample_layout(const DatasetManifest& manifest, std::uint64_t index);

/// Encodes one record: u32 index | u16 N_s | N_s x (u16 cell, f64 intensity)
/// | HSLF field | u64 FNV-1a checksum of everything before it.
std::string encode_sample(std::uint32_t index, const thermal::Layout& layout,
                          const thermal::TemperatureField& field);

struct GenerateOptions {
  double tolerance = 1e-8;
  unsigned workers = 1;
  std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

/// Writes `dir/manifest.txt` and `dir/samples.bin`. When the directory
/// already holds a dataset with the same manifest, complete records are
/// kept and generation resumes after the last one. Solver failures are
/// rethrown as SolverError naming the failing sample index.
DatasetManifest generate_dataset(const thermal::DomainSpec& spec, const IntensityScheme& scheme,
                                 std::uint64_t count, std::uint64_t seed,
                                 const std::filesystem::path& dir, const GenerateOptions& options = {});

/// Streams samples one at a time from a dataset directory.
class DatasetReader {
 public:
  explicit DatasetReader(const std::filesystem::path& dir);

  const DatasetManifest& manifest() const noexcept { return manifest_; }

  /// Next sample, or nullopt after the last one. Throws FormatError on
  /// truncation or a checksum mismatch; the message names the sample.
  std::optional<SamplePair> next();

 private:
  DatasetManifest manifest_;
  std::ifstream samples_;
  std::uint64_t next_index_ = 0;
};

inline DatasetReader load_dataset(const std::filesystem::path& dir) { return DatasetReader(dir); }

}  // namespace hslo::dataset
