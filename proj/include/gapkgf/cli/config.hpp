#pragma once

// Scenario configuration files.
//
// Grammar (see README): '#' comments, "key = value" lines, optional
// "[section]" headers. Values are numbers, booleans (true/false), words,
// comma-separated number lists or linspace(start, stop, count).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gapkgf/error.hpp"
#include "gapkgf/materials.hpp"
#include "gapkgf/occupation.hpp"
#include "gapkgf/scenario.hpp"
#include "gapkgf/spectra.hpp"
#include "gapkgf/table_io.hpp"

namespace gapkgf::cli {

struct GridSpec {
  std::vector<double> omega;
  std::vector<double> q;
  std::vector<double> phi{0.0};
  double z = 0.0;
  double zp = 0.0;
};

struct OutputSpec {
  bool map = true;
  bool spectrum = false;
  bool plot = false;
};

struct ScenarioConfig {
  Scenario scenario;
  GridSpec grid;
  OutputSpec outputs;
  QuadratureSpec quadrature;
  std::optional<double> length_scale;  // metres per natural length unit
  std::string source;
  std::string canonical;  // sorted "section.key=value" lines
  std::string digest;     // FNV-1a 64 of canonical, hex
};

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

inline const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"", {"geometry", "gap"}},
      {"lower", {"material", "eps_re", "eps_im", "plasma_frequency", "damping", "resonance_frequency", "table",
                 "temperature", "occupation_table", "beta"}},
      {"upper", {"material", "eps_re", "eps_im", "plasma_frequency", "damping", "resonance_frequency", "table",
                 "temperature", "occupation_table", "beta"}},
      {"grid", {"omega", "q", "phi", "z", "zp"}},
      {"output", {"map", "spectrum", "plot"}},
      {"quadrature", {"rel_tol", "abs_tol", "max_subdivisions", "qmax_scale", "force_phi"}},
      {"units", {"length_scale"}},
      {"debug", {"kgf_delta0_scale"}},
  };
  return keys;
}

class Reader {
 public:
  Reader(std::map<std::string, Section> sections, std::string source, std::filesystem::path base)
      : sections_(std::move(sections)), source_(std::move(source)), base_(std::move(base)) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& what) const {
    const Entry* e = find(section, key);
    const std::string where = source_ + (e ? ":" + std::to_string(e->line) : std::string());
    throw Error(ErrorCode::ConfigError, where + ": " + name(section, key) + ": " + what);
  }

  static std::string name(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  std::optional<std::string> word(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::optional<double> number(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    double v = 0;
    if (!gapkgf::detail::parse_double(e->value, v) || !std::isfinite(v))
      fail(section, key, "expected a number, got '" + e->value + "'");
    return v;
  }

  std::optional<bool> boolean(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    fail(section, key, "expected true or false, got '" + e->value + "'");
  }

  std::optional<std::vector<double>> list(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::string_view text = e->value;
    std::vector<double> out;
    if (text.starts_with("linspace(") && text.ends_with(")")) {
      const auto args = split(text.substr(9, text.size() - 10));
      if (args.size() != 3) fail(section, key, "linspace needs (start, stop, count)");
      double count = 0;
      if (!gapkgf::detail::parse_double(args[2], count) || count < 1 || count != std::floor(count))
        fail(section, key, "linspace count must be a positive integer");
      const double a = parse_or_fail(section, key, args[0]);
      const double b = parse_or_fail(section, key, args[1]);
      const auto n = static_cast<std::size_t>(count);
      for (std::size_t i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * double(i) / double(n - 1));
      return out;
    }
    for (const auto& item : split(text)) out.push_back(parse_or_fail(section, key, item));
    return out;
  }

  std::filesystem::path path(const std::string& section, const std::string& key) const {
    std::filesystem::path p(find(section, key)->value);
    return p.is_absolute() ? p : base_ / p;
  }

 private:
  static std::vector<std::string_view> split(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      out.push_back(gapkgf::detail::trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  }

  double parse_or_fail(const std::string& section, const std::string& key, std::string_view item) const {
    double v = 0;
    if (!gapkgf::detail::parse_double(item, v) || !std::isfinite(v))
      fail(section, key, "malformed number '" + std::string(item) + "'");
    return v;
  }

  std::map<std::string, Section> sections_;
  std::string source_;
  std::filesystem::path base_;
};

[[noreturn]] inline void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ValidationError, field + ": " + what);
}

inline PermittivityModel read_material(const Reader& r, const std::string& side) {
  const std::string kind = r.word(side, "material").value_or("vacuum");
  auto need = [&](const char* key) {
    const auto v = r.number(side, key);
    if (!v) invalid(Reader::name(side, key), "required for material '" + kind + "'");
    return *v;
  };
  PermittivityModel model;
  if (kind == "vacuum") {
    model = material::Vacuum{};
  } else if (kind == "constant") {
    model = material::Constant{{need("eps_re"), r.number(side, "eps_im").value_or(0.0)}};
  } else if (kind == "drude") {
    model = material::Drude{need("plasma_frequency"), r.number(side, "damping").value_or(0.0)};
  } else if (kind == "lorentz") {
    model = material::Lorentz{need("resonance_frequency"), need("plasma_frequency"), r.number(side, "damping").value_or(0.0)};
  } else if (kind == "table") {
    if (!r.find(side, "table")) invalid(Reader::name(side, "table"), "required for material 'table'");
    model = load_permittivity_table(r.path(side, "table").string());
  } else if (kind == "mirror") {
    model = material::PerfectMirror{};
  } else {
    r.fail(side, "material", "unknown material '" + kind + "' (vacuum|constant|drude|lorentz|table|mirror)");
  }
  try {
    validate_model(model);
  } catch (const Error& e) {
    invalid(Reader::name(side, "material"), e.what());
  }
  return model;
}

inline OccupationSpectrum read_occupation(const Reader& r, const std::string& side) {
  const auto t = r.number(side, "temperature");
  const bool has_table = r.find(side, "occupation_table") != nullptr;
  if (t && has_table) invalid(Reader::name(side, "occupation_table"), "conflicts with temperature");
  if (has_table) {
    return occupation::Custom{
        std::make_shared<const OccupationTable>(load_occupation_table(r.path(side, "occupation_table").string()))};
  }
  if (!t || *t == 0.0) return occupation::Vacuum{};
  if (*t < 0) invalid(Reader::name(side, "temperature"), "must be non-negative");
  return occupation::Thermal{*t};
}

inline std::map<std::string, Section> tokenize(std::istream& in, const std::string& source) {
  std::map<std::string, Section> sections;
  sections[""];
  std::string current;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = gapkgf::detail::trim(view);
    if (view.empty()) continue;
    const std::string where = source + ":" + std::to_string(number) + ": ";
    if (view.front() == '[') {
      if (view.back() != ']') throw Error(ErrorCode::ConfigError, where + "malformed section header");
      current = std::string(gapkgf::detail::trim(view.substr(1, view.size() - 2)));
      if (!allowed_keys().contains(current) || current.empty())
        throw Error(ErrorCode::ConfigError, where + "unknown section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::ConfigError, where + "expected 'key = value'");
    const std::string key(gapkgf::detail::trim(view.substr(0, eq)));
    const std::string value(gapkgf::detail::trim(view.substr(eq + 1)));
    if (key.empty()) throw Error(ErrorCode::ConfigError, where + "empty key");
    if (!allowed_keys().at(current).contains(key))
      throw Error(ErrorCode::ConfigError, where + "unknown key '" + Reader::name(current, key) + "'");
    if (value.empty()) throw Error(ErrorCode::ConfigError, where + "empty value for '" + Reader::name(current, key) + "'");
    if (!sections[current].emplace(key, Entry{value, number}).second)
      throw Error(ErrorCode::ConfigError, where + "duplicate key '" + Reader::name(current, key) + "'");
  }
  return sections;
}

inline std::string canonicalize(const std::map<std::string, Section>& sections) {
  std::string out;
  for (const auto& [section, entries] : sections)
    for (const auto& [key, entry] : entries) out += Reader::name(section, key) + "=" + entry.value + "\n";
  return out;
}

}  // namespace detail

/// Parses and validates a configuration. Syntax problems and unknown keys
/// raise ConfigError (with file:line); invariant breaches raise
/// ValidationError naming the offending field. Relative table paths resolve
/// against base_dir.
inline ScenarioConfig parse_config_stream(std::istream& in, const std::string& source,
                                          const std::filesystem::path& base_dir) {
  auto sections = detail::tokenize(in, source);
  ScenarioConfig cfg;
  cfg.source = source;
  cfg.canonical = detail::canonicalize(sections);
  cfg.digest = fnv1a_hex(cfg.canonical);
  const detail::Reader r(sections, source, base_dir);

  const auto geometry = r.word("", "geometry");
  if (!geometry) throw Error(ErrorCode::ConfigError, source + ": missing required key 'geometry'");
  Scenario& scn = cfg.scenario;
  if (*geometry == "free") scn.geometry = Geometry::Free;
  else if (*geometry == "single_rest") scn.geometry = Geometry::SingleRest;
  else if (*geometry == "single_moving") scn.geometry = Geometry::SingleMoving;
  else if (*geometry == "cavity") scn.geometry = Geometry::Cavity;
  else r.fail("", "geometry", "expected free|single_rest|single_moving|cavity");

  scn.gap = r.number("", "gap").value_or(1.0);
  if (scn.geometry == Geometry::Cavity && !r.find("", "gap")) detail::invalid("gap", "required for cavity geometry");
  if (!(scn.gap > 0)) detail::invalid("gap", "must be positive");

  for (const std::string side : {"lower", "upper"}) {
    InterfaceSpec& spec = side == "lower" ? scn.lower : scn.upper;
    spec.side = side == "lower" ? Side::Lower : Side::Upper;
    spec.material = detail::read_material(r, side);
    spec.occupation = detail::read_occupation(r, side);
    spec.beta = r.number(side, "beta").value_or(0.0);
    if (!(std::abs(spec.beta) < 1.0)) detail::invalid(side + ".beta", "|beta| must be < 1");
  }
  if (scn.lower.beta != 0.0) detail::invalid("lower.beta", "the lower interface is the rest frame; beta must be 0");
  if (scn.upper.beta != 0.0 && scn.geometry != Geometry::SingleMoving && scn.geometry != Geometry::Cavity)
    detail::invalid("upper.beta", "must be 0 unless geometry is single_moving or cavity");
  scn.kgf_delta0_scale = r.number("debug", "kgf_delta0_scale").value_or(1.0);

  GridSpec& grid = cfg.grid;
  grid.omega = r.list("grid", "omega").value_or(std::vector<double>{});
  if (grid.omega.empty()) detail::invalid("grid.omega", "at least one frequency is required");
  for (double w : grid.omega)
    if (w == 0.0) detail::invalid("grid.omega", "omega = 0 is excluded from all grids");
  grid.q = r.list("grid", "q").value_or(std::vector<double>{});
  for (double q : grid.q)
    if (q < 0) detail::invalid("grid.q", "q must be non-negative");
  grid.phi = r.list("grid", "phi").value_or(std::vector<double>{0.0});
  grid.z = r.number("grid", "z").value_or(0.0);
  grid.zp = r.number("grid", "zp").value_or(grid.z);
  for (const auto& [field, value] : {std::pair{"grid.z", grid.z}, std::pair{"grid.zp", grid.zp}}) {
    if ((scn.geometry == Geometry::SingleRest || scn.geometry == Geometry::SingleMoving) && value > 0)
      detail::invalid(field, "single-interface heights must be <= 0 (body fills z >= 0)");
    if (scn.geometry == Geometry::Cavity && std::abs(value) > scn.gap / 2)
      detail::invalid(field, "cavity heights must lie in [-gap/2, gap/2]");
  }

  cfg.outputs.map = r.boolean("output", "map").value_or(true);
  cfg.outputs.spectrum = r.boolean("output", "spectrum").value_or(false);
  cfg.outputs.plot = r.boolean("output", "plot").value_or(false);
  if (cfg.outputs.map && grid.q.empty()) detail::invalid("grid.q", "required when output.map is enabled");

  QuadratureSpec& quad = cfg.quadrature;
  quad.rel_tol = r.number("quadrature", "rel_tol").value_or(quad.rel_tol);
  quad.abs_tol = r.number("quadrature", "abs_tol").value_or(quad.abs_tol);
  quad.qmax_scale = r.number("quadrature", "qmax_scale").value_or(quad.qmax_scale);
  quad.force_phi_quadrature = r.boolean("quadrature", "force_phi").value_or(false);
  if (const auto n = r.number("quadrature", "max_subdivisions")) {
    if (*n < 1 || *n != std::floor(*n)) detail::invalid("quadrature.max_subdivisions", "must be a positive integer");
    quad.max_subdivisions = static_cast<int>(*n);
  }
  try {
    validate(quad);
  } catch (const Error& e) {
    detail::invalid("quadrature", e.what());
  }
  if (const auto l = r.number("units", "length_scale")) {
    if (!(*l > 0)) detail::invalid("units.length_scale", "must be positive");
    cfg.length_scale = *l;
  }
  try {
    validate(scn);
  } catch (const Error& e) {
    detail::invalid("scenario", e.what());
  }
  return cfg;
}

inline ScenarioConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = ".",
                                        const std::string& source = "<config>") {
  std::istringstream in(text);
  return parse_config_stream(in, source, base_dir);
}

inline ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path.string() + "'");
  return parse_config_stream(in, path.string(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace gapkgf::cli
