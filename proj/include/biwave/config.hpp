#pragma once

// Run configuration: a flat text file of `key = value` lines.
//
//   # bubble, second mesh of the ladder
//   mesh.kind = type1
//   mesh.n = 32
//   scheme.tau = 2e-4
//   t_end = 0.25
//
// Blank lines and lines starting with '#' are ignored. Unknown or repeated
// keys are errors. mesh.n, scheme.tau and t_end have no default.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "biwave/errors.hpp"
#include "biwave/initial_data.hpp"
#include "biwave/mesh.hpp"
#include "biwave/scheme_types.hpp"

namespace biwave {

struct RunConfig {
  MeshKind mesh_kind{MeshKind::Type1Triangles2D};
  std::size_t mesh_n{0};
  double box_lower{-1.0};
  double box_upper{1.0};

  VariantKind variant{VariantKind::Dissipative};
  double tau{0.0};
  double alpha{2.0};
  double c_stab{0.01};  // read only by the stabilized variant
  double fp_tolerance{1e-8};
  int fp_max_iters{500};
  double linear_tolerance{1e-12};
  int linear_max_iters{2000};
  BoundaryMode bc{BoundaryMode::NaturalNeumann};

  double t_end{0.0};

  InitialKind initial{InitialKind::Bubble2D};
  int frequency{1};
  std::string initial_path;
  bool initial_velocity{false};  // FromFile: also read V from the snapshot

  std::string csv_path{"history.csv"};
  std::string snapshot_dir;  // empty: no snapshots
  int snapshot_every{10};

  std::uint64_t seed{0};

  Box box() const { return Box::cube(box_lower, box_upper); }

  SchemeVariant scheme_variant() const {
    switch (variant) {
      case VariantKind::Dissipative: return SchemeVariant::dissipative();
      case VariantKind::Stabilized: return SchemeVariant::stabilized(alpha, c_stab);
      case VariantKind::Conservative: return SchemeVariant::conservative();
    }
    return {};
  }

  /// Number of steps needed to reach t >= t_end.
  std::size_t steps() const {
    const double r = t_end / tau;
    const double k = std::ceil(r - 1e-9 * r);
    return static_cast<std::size_t>(k < 1.0 ? 1.0 : k);
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
  return value;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("invalid value for " + std::string(key) + ": '" + std::string(text) +
                    "' (expected true or false)");
}

inline MeshKind parse_mesh_kind(std::string_view v) {
  if (v == "interval") return MeshKind::Interval1D;
  if (v == "type1") return MeshKind::Type1Triangles2D;
  if (v == "type2") return MeshKind::Type2Tetrahedra3D;
  throw ConfigError("unknown mesh.kind '" + std::string(v) + "' (interval, type1, type2)");
}

inline VariantKind parse_variant(std::string_view v) {
  if (v == "dissipative") return VariantKind::Dissipative;
  if (v == "stabilized") return VariantKind::Stabilized;
  if (v == "conservative") return VariantKind::Conservative;
  throw ConfigError("unknown scheme.variant '" + std::string(v) +
                    "' (dissipative, stabilized, conservative)");
}

inline BoundaryMode parse_bc(std::string_view v) {
  if (v == "neumann") return BoundaryMode::NaturalNeumann;
  if (v == "dirichlet") return BoundaryMode::DirichletU;
  throw ConfigError("unknown scheme.bc '" + std::string(v) + "' (neumann, dirichlet)");
}

inline InitialKind parse_initial(std::string_view v) {
  if (v == "bubble") return InitialKind::Bubble2D;
  if (v == "singular") return InitialKind::Singular2D;
  if (v == "smooth1d") return InitialKind::Smooth1D;
  if (v == "file") return InitialKind::FromFile;
  throw ConfigError("unknown initial '" + std::string(v) + "' (bubble, singular, smooth1d, file)");
}

}  // namespace detail

/// Checks the cross-field invariants of a parsed configuration.
inline void validate(const RunConfig& c) {
  if (c.mesh_n == 0) throw ConfigError("mesh.n must be positive");
  if (!(c.box_lower < c.box_upper)) throw ConfigError("mesh.lower must be below mesh.upper");
  if (!(c.tau > 0.0)) throw ConfigError("scheme.tau must be positive");
  if (!(c.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(c.fp_tolerance > 0.0)) throw ConfigError("scheme.fp_tolerance must be positive");
  if (c.fp_max_iters < 1) throw ConfigError("scheme.fp_max_iters must be at least 1");
  if (!(c.linear_tolerance > 0.0)) throw ConfigError("scheme.linear_tolerance must be positive");
  if (c.linear_max_iters < 1) throw ConfigError("scheme.linear_max_iters must be at least 1");
  if (c.variant == VariantKind::Stabilized) {
    if (!(c.alpha > 0.0 && c.alpha <= 2.0)) throw ConfigError("scheme.alpha must lie in (0, 2]");
    if (!(c.c_stab >= 0.0)) throw ConfigError("scheme.c_stab must be non-negative");
  }
  if (c.snapshot_every < 1) throw ConfigError("output.snapshot_every must be at least 1");
  if (c.frequency < 1) throw ConfigError("initial.frequency must be at least 1");
  if (c.initial == InitialKind::FromFile && c.initial_path.empty())
    throw ConfigError("initial = file needs initial.path");
  if (c.initial == InitialKind::Singular2D && c.bc != BoundaryMode::DirichletU)
    throw ConfigError("initial = singular needs scheme.bc = dirichlet");
  const int d = dimension_of(c.mesh_kind);
  if ((c.initial == InitialKind::Bubble2D || c.initial == InitialKind::Singular2D) && d != 2)
    throw ConfigError("initial = " + to_string(c.initial) + " needs mesh.kind = type1");
  if (c.initial == InitialKind::Smooth1D && d != 1)
    throw ConfigError("initial = smooth1d needs mesh.kind = interval");
}

/// Parses configuration text. Throws ConfigError with the offending line.
inline RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = detail::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty value for " + key);
    if (!seen.emplace(key, std::string(value)).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + key);

    using detail::parse_number;
    if (key == "mesh.kind") c.mesh_kind = detail::parse_mesh_kind(value);
    else if (key == "mesh.n") {
      const auto n = parse_number<long long>(key, value);
      if (n <= 0) throw ConfigError("mesh.n must be positive");
      c.mesh_n = static_cast<std::size_t>(n);
    }
    else if (key == "mesh.lower") c.box_lower = parse_number<double>(key, value);
    else if (key == "mesh.upper") c.box_upper = parse_number<double>(key, value);
    else if (key == "scheme.variant") c.variant = detail::parse_variant(value);
    else if (key == "scheme.tau") c.tau = parse_number<double>(key, value);
    else if (key == "scheme.alpha") c.alpha = parse_number<double>(key, value);
    else if (key == "scheme.c_stab") c.c_stab = parse_number<double>(key, value);
    else if (key == "scheme.fp_tolerance") c.fp_tolerance = parse_number<double>(key, value);
    else if (key == "scheme.fp_max_iters") c.fp_max_iters = parse_number<int>(key, value);
    else if (key == "scheme.linear_tolerance") c.linear_tolerance = parse_number<double>(key, value);
    else if (key == "scheme.linear_max_iters") c.linear_max_iters = parse_number<int>(key, value);
    else if (key == "scheme.bc") c.bc = detail::parse_bc(value);
    else if (key == "t_end") c.t_end = parse_number<double>(key, value);
    else if (key == "initial") c.initial = detail::parse_initial(value);
    else if (key == "initial.frequency") c.frequency = parse_number<int>(key, value);
    else if (key == "initial.path") c.initial_path = std::string(value);
    else if (key == "initial.velocity") c.initial_velocity = detail::parse_bool(key, value);
    else if (key == "output.csv") c.csv_path = std::string(value);
    else if (key == "output.snapshot_dir") c.snapshot_dir = std::string(value);
    else if (key == "output.snapshot_every") c.snapshot_every = parse_number<int>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else throw ConfigError("line " + std::to_string(line_no) + ": unknown key " + key);
  }
  for (const char* required : {"mesh.n", "scheme.tau", "t_end"})
    if (seen.find(std::string_view(required)) == seen.end())
      throw ConfigError(std::string("missing required key ") + required);
  validate(c);
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace biwave
