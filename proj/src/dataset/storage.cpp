#include "hslo/dataset/storage.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "hslo/binary_io.hpp"
#include "hslo/error.hpp"
#include "hslo/thermal/field_io.hpp"
#include "hslo/thermal/solver.hpp"

namespace hslo::dataset {

namespace fs = std::filesystem;
using thermal::Layout;
using thermal::TemperatureField;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw FormatError("manifest: bad value '" + text + "' for key " + key);
  }
  return value;
}

constexpr const char* kManifestKeys[] = {
    "format_version", "L", "k", "T0", "sink_edge", "sink_center_fraction", "sink_width",
    "N", "C", "scheme", "sources", "phi0", "count", "seed"};

// Reads one record; `expected` is the index it must carry.
struct RecordReader {
  std::istream& in;
  const DatasetManifest& manifest;

  SamplePair read(std::uint64_t expected) {
    const std::string label = "sample " + std::to_string(expected);
    std::string record = binary::read_exact(in, 6, (label + " header").c_str());
    const auto index = binary::get<std::uint32_t>(record.data());
    const auto ns = binary::get<std::uint16_t>(record.data() + 4);
    if (index != expected) {
      throw FormatError(label + ": record carries index " + std::to_string(index));
    }
    record += binary::read_exact(in, std::size_t{ns} * 10, (label + " layout").c_str());
    const std::string header = binary::read_exact(in, 16, (label + " field header").c_str());
    record += header;
    const auto rows = binary::get<std::uint32_t>(header.data() + 8);
    const auto cols = binary::get<std::uint32_t>(header.data() + 12);
    const auto n = static_cast<std::uint32_t>(manifest.spec.fine_resolution);
    if (rows != n || cols != n) {
      throw FormatError(label + ": field is " + std::to_string(rows) + "x" + std::to_string(cols) +
                        ", manifest says " + std::to_string(n));
    }
    record += binary::read_exact(in, std::size_t{rows} * cols * 8, (label + " field").c_str());
    const auto stored = binary::get<std::uint64_t>(
        binary::read_exact(in, 8, (label + " checksum").c_str()).data());
    if (stored != binary::fnv1a64(record.data(), record.size())) {
      throw FormatError(label + ": checksum mismatch");
    }

    std::vector<thermal::Source> sources(ns);
    for (std::size_t i = 0; i < ns; ++i) {
      const char* p = record.data() + 6 + 10 * i;
      sources[i] = {binary::get<std::uint16_t>(p), binary::get_f64(p + 2)};
    }
    std::istringstream field_bytes(record.substr(6 + std::size_t{ns} * 10));
    SamplePair sample;
    sample.layout = Layout(std::move(sources));
    sample.layout.validate(manifest.spec.cell_count());
    sample.field = thermal::read_field_binary(field_bytes);
    sample.tmax_K = sample.field.max();
    sample.r_m = thermal::normalized_metric(sample.tmax_K, manifest.spec);
    return sample;
  }
};

// Number of leading complete records and the byte offset after them.
std::pair<std::uint64_t, std::uint64_t> scan_complete(const fs::path& file,
                                                      const DatasetManifest& manifest) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return {0, 0};
  RecordReader reader{in, manifest};
  std::uint64_t done = 0;
  std::uint64_t offset = 0;
  while (done < manifest.count) {
    try {
      reader.read(done);
    } catch (const Error&) {
      break;
    }
    ++done;
    offset = static_cast<std::uint64_t>(in.tellg());
  }
  return {done, offset};
}

}  // namespace

void write_manifest(std::ostream& out, const DatasetManifest& m) {
  out << "format_version=" << m.format_version << '\n'
      << "L=" << format_double(m.spec.side_length_m) << '\n'
      << "k=" << format_double(m.spec.conductivity) << '\n'
      << "T0=" << format_double(m.spec.sink_temperature_K) << '\n'
      << "sink_edge=" << thermal::to_string(m.spec.sink_edge) << '\n'
      << "sink_center_fraction=" << format_double(m.spec.sink_center_fraction) << '\n'
      << "sink_width=" << format_double(m.spec.sink_width_m) << '\n'
      << "N=" << m.spec.fine_resolution << '\n'
      << "C=" << m.spec.cell_partition << '\n'
      << "scheme=" << m.scheme.name() << '\n'
      << "sources=" << m.scheme.source_count << '\n'
      << "phi0=" << format_double(m.scheme.intensity) << '\n'
      << "count=" << m.count << '\n'
      << "seed=" << m.seed << '\n';
  if (!out) throw IoError("failed writing manifest");
}

DatasetManifest read_manifest(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("manifest: line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  for (const auto& [key, value] : kv) {
    if (std::find(std::begin(kManifestKeys), std::end(kManifestKeys), key) == std::end(kManifestKeys)) {
      throw FormatError("manifest: unknown key " + key);
    }
  }
  auto get = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError(std::string("manifest: missing key ") + key);
    return it->second;
  };

  DatasetManifest m;
  m.format_version = parse_number<int>("format_version", get("format_version"));
  if (m.format_version != kFormatVersion) {
    throw FormatError("manifest: format version " + std::to_string(m.format_version) +
                      " is not supported (expected " + std::to_string(kFormatVersion) + ")");
  }
  m.spec.side_length_m = parse_number<double>("L", get("L"));
  m.spec.conductivity = parse_number<double>("k", get("k"));
  m.spec.sink_temperature_K = parse_number<double>("T0", get("T0"));
  m.spec.sink_edge = thermal::parse_sink_edge(get("sink_edge"));
  m.spec.sink_center_fraction = parse_number<double>("sink_center_fraction", get("sink_center_fraction"));
  m.spec.sink_width_m = parse_number<double>("sink_width", get("sink_width"));
  m.spec.fine_resolution = parse_number<int>("N", get("N"));
  m.spec.cell_partition = parse_number<int>("C", get("C"));
  m.spec.source_side_m = m.spec.side_length_m / m.spec.cell_partition;
  m.scheme.kind = IntensityScheme::parse_kind(get("scheme"));
  m.scheme.source_count = parse_number<int>("sources", get("sources"));
  m.scheme.intensity = parse_number<double>("phi0", get("phi0"));
  m.count = parse_number<std::uint64_t>("count", get("count"));
  m.seed = parse_number<std::uint64_t>("seed", get("seed"));
  try {
    m.spec.validate();
    m.scheme.validate(m.spec);
  } catch (const DomainError& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  return m;
}

Layout sample_layout(const DatasetManifest& manifest, std::uint64_t index) {
  Rng rng = Rng(manifest.seed).split(index);
  return sample_random_layout(manifest.spec, manifest.scheme, rng);
}

std::string encode_sample(std::uint32_t index, const Layout& layout, const TemperatureField& field) {
  std::string record;
  binary::put(record, index);
  binary::put(record, static_cast<std::uint16_t>(layout.size()));
  for (const auto& s : layout.sources()) {
    binary::put(record, static_cast<std::uint16_t>(s.cell));
    binary::put_f64(record, s.intensity);
  }
  std::ostringstream field_bytes;
  thermal::write_field_binary(field_bytes, field);
  record += field_bytes.str();
  binary::put(record, binary::fnv1a64(record.data(), record.size()));
  return record;
}

DatasetManifest generate_dataset(const thermal::DomainSpec& spec, const IntensityScheme& scheme,
                                 std::uint64_t count, std::uint64_t seed, const fs::path& dir,
                                 const GenerateOptions& options) {
  spec.validate();
  scheme.validate(spec);
  if (count > std::numeric_limits<std::uint32_t>::max()) {
    throw DomainError("sample count exceeds the 32-bit record index");
  }
  DatasetManifest manifest{spec, scheme, count, seed, kFormatVersion};
  manifest.spec.source_side_m = spec.side_length_m / spec.cell_partition;

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto manifest_path = dir / kManifestFile;
  const auto samples_path = dir / kSamplesFile;

  std::uint64_t start = 0;
  bool resume = false;
  if (fs::exists(manifest_path) && fs::exists(samples_path)) {
    std::ifstream in(manifest_path);
    try {
      resume = read_manifest(in) == manifest;
    } catch (const Error&) {
      resume = false;
    }
  }
  if (resume) {
    const auto [done, offset] = scan_complete(samples_path, manifest);
    start = done;
    fs::resize_file(samples_path, offset);
  } else {
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + manifest_path.string());
    write_manifest(out, manifest);
    std::ofstream(samples_path, std::ios::binary | std::ios::trunc);
  }

  std::ofstream out(samples_path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open " + samples_path.string());
  const auto solver = thermal::shared_solver(spec);
  thermal::SolveOptions solve_options;
  solve_options.tolerance = options.tolerance;

  auto solve_one = [&](std::uint64_t index) {
    const auto layout = sample_layout(manifest, index);
    try {
      return encode_sample(static_cast<std::uint32_t>(index), layout,
                           solver->solve(thermal::rasterize_intensity(layout, spec), solve_options));
    } catch (const SolverError& e) {
      throw SolverError("sample " + std::to_string(index) + ": " + e.what(), e.residual());
    }
  };

  // Solves run in batches across workers; records are appended in index order.
  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::string> batch;
  for (std::uint64_t first = start; first < count;) {
    const std::uint64_t size = std::min<std::uint64_t>(count - first, 4ull * workers);
    batch.assign(size, {});
    if (workers == 1) {
      for (std::uint64_t i = 0; i < size; ++i) batch[i] = solve_one(first + i);
    } else {
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          try {
            for (std::uint64_t i = w; i < size; i += workers) batch[i] = solve_one(first + i);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      threads.clear();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    for (const auto& record : batch) out.write(record.data(), static_cast<std::streamsize>(record.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + samples_path.string());
    first += size;
    if (options.progress) options.progress(first, count);
  }
  return manifest;
}

DatasetReader::DatasetReader(const fs::path& dir) {
  std::ifstream manifest_in(dir / kManifestFile);
  if (!manifest_in) throw IoError("cannot open " + (dir / kManifestFile).string());
  manifest_ = read_manifest(manifest_in);
  samples_.open(dir / kSamplesFile, std::ios::binary);
  if (!samples_) throw IoError("cannot open " + (dir / kSamplesFile).string());
}

std::optional<SamplePair> DatasetReader::next() {
  if (next_index_ >= manifest_.count) return std::nullopt;
  RecordReader reader{samples_, manifest_};
  auto sample = reader.read(next_index_);
  ++next_index_;
  return sample;
}

}  // namespace hslo::dataset
