#include "hslo/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

#include "hslo/error.hpp"
#include "hslo/format.hpp"

namespace hslo::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_real(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

template <class Int>
Int to_integer(std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

struct Key {
  const char* section;
  const char* name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Key real_key(const char* section, const char* name, T RunConfig::*group, double T::*field) {
  return {section, name, [=](RunConfig& c, std::string_view v) { c.*group.*field = to_real(v); },
          [=](const RunConfig& c) { return format_number(c.*group.*field); }};
}

template <class T, class Int>
Key int_key(const char* section, const char* name, T RunConfig::*group, Int T::*field) {
  return {section, name,
          [=](RunConfig& c, std::string_view v) { c.*group.*field = to_integer<Int>(v); },
          [=](const RunConfig& c) { return std::to_string(c.*group.*field); }};
}

const std::vector<Key>& schema() {
  using thermal::DomainSpec;
  using dataset::IntensityScheme;
  using optim::MnsloConfig;
  using moea::MoeaConfig;
  static const std::vector<Key> keys = {
      real_key("domain", "side_length_m", &RunConfig::domain, &DomainSpec::side_length_m),
      real_key("domain", "conductivity", &RunConfig::domain, &DomainSpec::conductivity),
      real_key("domain", "sink_temperature_K", &RunConfig::domain, &DomainSpec::sink_temperature_K),
      real_key("domain", "sink_width_m", &RunConfig::domain, &DomainSpec::sink_width_m),
      {"domain", "sink_edge",
       [](RunConfig& c, std::string_view v) {
         try {
           c.domain.sink_edge = thermal::parse_sink_edge(v);
         } catch (const DomainError& e) {
           throw ConfigError(e.what());
         }
       },
       [](const RunConfig& c) { return std::string(thermal::to_string(c.domain.sink_edge)); }},
      real_key("domain", "sink_center_fraction", &RunConfig::domain, &DomainSpec::sink_center_fraction),
      int_key("domain", "fine_resolution", &RunConfig::domain, &DomainSpec::fine_resolution),
      int_key("domain", "cell_partition", &RunConfig::domain, &DomainSpec::cell_partition),

      {"scheme", "kind",
       [](RunConfig& c, std::string_view v) {
         try {
           c.scheme.kind = IntensityScheme::parse_kind(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       },
       [](const RunConfig& c) { return std::string(c.scheme.name()); }},
      int_key("scheme", "source_count", &RunConfig::scheme, &IntensityScheme::source_count),
      real_key("scheme", "intensity", &RunConfig::scheme, &IntensityScheme::intensity),

      int_key("mnslo", "population_size", &RunConfig::mnslo, &MnsloConfig::population_size),
      int_key("mnslo", "group_count", &RunConfig::mnslo, &MnsloConfig::group_count),
      int_key("mnslo", "archive_capacity", &RunConfig::mnslo, &MnsloConfig::archive_capacity),
      real_key("mnslo", "epsilon", &RunConfig::mnslo, &MnsloConfig::epsilon),
      int_key("mnslo", "max_sweeps", &RunConfig::mnslo, &MnsloConfig::max_sweeps),
      {"mnslo", "evaluator", [](RunConfig& c, std::string_view v) { c.evaluator = std::string(v); },
       [](const RunConfig& c) { return c.evaluator; }},
      {"mnslo", "cache_capacity",
       [](RunConfig& c, std::string_view v) { c.cache_capacity = to_integer<std::size_t>(v); },
       [](const RunConfig& c) { return std::to_string(c.cache_capacity); }},
      {"mnslo", "tolerance", [](RunConfig& c, std::string_view v) { c.tolerance = to_real(v); },
       [](const RunConfig& c) { return format_number(c.tolerance); }},

      int_key("moea", "population_size", &RunConfig::moea, &MoeaConfig::population_size),
      int_key("moea", "generations", &RunConfig::moea, &MoeaConfig::generations),
      real_key("moea", "pc", &RunConfig::moea, &MoeaConfig::pc),
      real_key("moea", "pm", &RunConfig::moea, &MoeaConfig::pm),
      int_key("moea", "m_max", &RunConfig::moea, &MoeaConfig::m_max),
      int_key("moea", "layer_count", &RunConfig::moea, &MoeaConfig::layer_count),
  };
  return keys;
}

void check_section(std::string_view section) {
  if (!std::ranges::any_of(schema(), [&](const Key& k) { return k.section == section; })) {
    throw ConfigError("unknown section [" + std::string(section) + "]");
  }
}

const Key& find_key(std::string_view section, std::string_view name) {
  check_section(section);
  for (const auto& k : schema()) {
    if (k.section == section && k.name == name) return k;
  }
  throw ConfigError("unknown key '" + std::string(name) + "' in [" + std::string(section) + "]");
}

}  // namespace

RunConfig::RunConfig() { mnslo.group_count = 3; }

void RunConfig::set(std::string_view section, std::string_view key, std::string_view value) {
  const auto& k = find_key(section, key);
  try {
    k.set(*this, value);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(section) + "." + std::string(key) + ": " + e.what());
  }
}

void RunConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.substr(0, eq).find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not section.key=value");
  }
  set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
      trim(assignment.substr(eq + 1)));
}

void RunConfig::load(std::istream& in, const std::string& source) {
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = source + ":" + std::to_string(number) + ": ";
    auto text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(where + "unterminated section header");
      section = std::string(trim(text.substr(1, text.size() - 2)));
      try {
        check_section(section);
      } catch (const ConfigError& e) {
        throw ConfigError(where + e.what());
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of a section");
    try {
      set(section, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  load(in, path.string());
}

void RunConfig::finalize() {
  if (domain.cell_partition >= 1) domain.source_side_m = domain.side_length_m / domain.cell_partition;
  mnslo.seed = seed;
  mnslo.workers = workers;
  moea.seed = seed;
  moea.workers = workers;
  try {
    domain.validate();
    scheme.validate(domain);
    if (!(tolerance > 0.0)) throw ConfigError("mnslo.tolerance must be positive");
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  mnslo.validate();
  moea.validate();
  if (workers < 1) throw ConfigError("workers must be >= 1");
}

void RunConfig::write(std::ostream& out) const {
  std::string section;
  for (const auto& k : schema()) {
    if (k.section != section) {
      if (!section.empty()) out << '\n';
      section = k.section;
      out << '[' << section << "]\n";
    }
    out << k.name << " = " << k.get(*this) << '\n';
  }
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& k : schema()) out.push_back(std::string(k.section) + "." + k.name);
  return out;
}

}  // namespace hslo::cli
