#pragma once

// Property suites behind the `check` and `rates` subcommands. Every suite
// runs over a mesh ladder, records what it measured and compares it with a
// fixed criterion. Random inputs come from seeded mt19937_64 streams, so a
// report depends only on the seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "biwave/diagnostics.hpp"
#include "biwave/field.hpp"
#include "biwave/initial_data.hpp"
#include "biwave/mesh.hpp"
#include "biwave/operators.hpp"
#include "biwave/scheme.hpp"
#include "biwave/stepper.hpp"
#include "biwave/verification.hpp"
#include "json.hpp"

namespace biwave {

enum class CheckSuite { Operators, ProductRule, Consistency, EnergyLaws, All };

inline std::string to_string(CheckSuite s) {
  switch (s) {
    case CheckSuite::Operators: return "Operators";
    case CheckSuite::ProductRule: return "ProductRule";
    case CheckSuite::Consistency: return "Consistency";
    case CheckSuite::EnergyLaws: return "EnergyLaws";
    case CheckSuite::All: return "All";
  }
  return "?";
}

inline CheckSuite parse_check_suite(const std::string& name) {
  for (CheckSuite s : {CheckSuite::Operators, CheckSuite::ProductRule, CheckSuite::Consistency,
                       CheckSuite::EnergyLaws, CheckSuite::All})
    if (name == to_string(s)) return s;
  throw ConfigError("unknown suite '" + name +
                    "' (Operators, ProductRule, Consistency, EnergyLaws, All)");
}

/// Random numbers for property checks.
class CheckRng {
 public:
  /// Independent stream per (seed, stream id).
  CheckRng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    gen_.seed(seq);
  }

  /// Uniform in [a, b) from the top 53 bits (same sequence on every platform).
  double uniform(double a, double b) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

  Vec3 vec(double a, double b) { return {uniform(a, b), uniform(a, b), uniform(a, b)}; }

 private:
  std::mt19937_64 gen_;
};

inline VectorField random_vector_field(const Mesh& mesh, CheckRng& rng) {
  VectorField f(mesh);
  for (auto& v : f) v = rng.vec(-1.0, 1.0);
  return f;
}

inline ScalarField random_scalar_field(const Mesh& mesh, CheckRng& rng) {
  ScalarField f(mesh);
  for (auto& v : f) v = rng.uniform(-1.0, 1.0);
  return f;
}

/// A smooth scalar function sin(<a, x> + b) + c with random coefficients.
struct SmoothWave {
  Point a{};
  double b{0.0};
  double c{0.0};

  static SmoothWave random(CheckRng& rng, int dim) {
    SmoothWave w;
    for (int r = 0; r < dim; ++r) w.a[r] = rng.uniform(0.5, 2.0);
    w.b = rng.uniform(0.0, 2.0 * std::numbers::pi);
    w.c = rng.uniform(-0.5, 0.5);
    return w;
  }

  double operator()(const Point& x) const {
    return std::sin(a[0] * x[0] + a[1] * x[1] + a[2] * x[2] + b) + c;
  }
};

/// Three independent smooth waves, one per component.
struct SmoothVectorWave {
  std::array<SmoothWave, 3> k;

  static SmoothVectorWave random(CheckRng& rng, int dim) {
    return {{SmoothWave::random(rng, dim), SmoothWave::random(rng, dim),
             SmoothWave::random(rng, dim)}};
  }

  Vec3 operator()(const Point& x) const { return {k[0](x), k[1](x), k[2](x)}; }
};

/// Refinement ladder used by the suites; 3D meshes stop one level earlier.
inline std::vector<std::size_t> check_ladder(MeshKind kind) {
  if (kind == MeshKind::Type2Tetrahedra3D) return {4, 8, 16};
  return {8, 16, 32};
}

inline constexpr MeshKind kAllMeshKinds[] = {MeshKind::Interval1D, MeshKind::Type1Triangles2D,
                                             MeshKind::Type2Tetrahedra3D};

/// Collects check entries into an ordered JSON report.
class CheckReport {
 public:
  explicit CheckReport(std::uint64_t seed) : seed_(seed) {}

  void add(const std::string& suite, const std::string& name, const std::string& mesh,
           const std::vector<std::size_t>& ladder, const std::vector<double>& values,
           double measured, const std::string& criterion, bool pass) {
    nlohmann::ordered_json e;
    e["suite"] = suite;
    e["name"] = name;
    e["mesh"] = mesh;
    e["ladder"] = ladder;
    e["values"] = values;
    e["measured"] = measured;
    e["criterion"] = criterion;
    e["pass"] = pass;
    entries_.push_back(std::move(e));
    (pass ? passed_ : failed_) += 1;
  }

  bool all_passed() const { return failed_ == 0; }
  int passed() const { return passed_; }
  int failed() const { return failed_; }

  nlohmann::ordered_json to_json(const std::string& suite) const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["seed"] = seed_;
    j["checks"] = entries_;
    j["passed"] = passed_;
    j["failed"] = failed_;
    j["pass"] = all_passed();
    return j;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::vector<nlohmann::ordered_json> entries_;
  int passed_{0};
  int failed_{0};
};

namespace detail {

inline Mesh ladder_mesh(MeshKind kind, std::size_t n) {
  return build_mesh(kind, n, Box::cube(-1.0, 1.0));
}

inline std::vector<double> cell_sizes(const std::vector<std::size_t>& ladder) {
  std::vector<double> h;
  for (std::size_t n : ladder) h.push_back(2.0 / static_cast<double>(n));
  return h;
}

inline double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

inline std::uint64_t stream_id(CheckSuite s, MeshKind k, int item) {
  return (static_cast<std::uint64_t>(s) << 16) | (static_cast<std::uint64_t>(k) << 8) |
         static_cast<std::uint64_t>(item);
}

}  // namespace detail

/// Ratio bound used for "measured constant stays bounded along the ladder".
inline constexpr double kBoundedSpread = 1.5;

inline void check_operators(CheckReport& report, int random_fields = 20) {
  const std::string suite = "Operators";
  for (MeshKind kind : kAllMeshKinds) {
    const auto ladder = check_ladder(kind);
    const std::string mk = to_string(kind);
    const int d = dimension_of(kind);
    std::vector<double> mass_err, const_err, sym_err, ratio_lo, ratio_hi, inv_c, gap_c;
    int violations = 0;
    CheckRng rng(report.seed(), detail::stream_id(CheckSuite::Operators, kind, 0));
    for (std::size_t n : ladder) {
      const Mesh mesh = detail::ladder_mesh(kind, n);
      double total = 0.0;
      for (double b : mesh.lumped_weights()) total += b;
      mass_err.push_back(std::abs(total - mesh.domain_volume()) / mesh.domain_volume());

      const VectorField ones(mesh, Vec3{1.0, 1.0, 1.0});
      double kc = 0.0;
      for (const Vec3& s : apply_stiffness(mesh, ones)) kc = std::max(kc, norm(s));
      const_err.push_back(kc);

      double sym = 0.0, lo = INFINITY, hi = 0.0, inv = 0.0;
      for (int i = 0; i < random_fields; ++i) {
        const VectorField u = random_vector_field(mesh, rng);
        const VectorField v = random_vector_field(mesh, rng);
        const VectorField ku = apply_stiffness(mesh, u);
        const VectorField kv = apply_stiffness(mesh, v);
        double a = 0.0, b = 0.0;
        for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
          a += dot(ku[z], v[z]);
          b += dot(u[z], kv[z]);
        }
        sym = std::max(sym, std::abs(a - b) / std::max(std::abs(a) + std::abs(b), 1e-300));

        const double r = lumped_to_exact_ratio(mesh, u);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        if (!(r >= 1.0 - 1e-12 && r <= (d + 2) * (1.0 + 1e-12))) ++violations;
        inv = std::max(inv, inverse_estimate_constant(mesh, u));
      }
      sym_err.push_back(sym);
      ratio_lo.push_back(lo);
      ratio_hi.push_back(hi);
      inv_c.push_back(inv);

      const auto vw = SmoothVectorWave::random(rng, d);
      const auto ww = SmoothVectorWave::random(rng, d);
      const VectorField v = nodal_interpolate(mesh, vw);
      const VectorField w = nodal_interpolate(mesh, ww);
      const double gap = std::abs(lumped_inner(mesh, v, w) - consistent_inner(mesh, v, w));
      gap_c.push_back(gap / (mesh.cell_h() * std::sqrt(consistent_inner(mesh, v, v)) *
                             gradient_norms(mesh, w).l2));
    }
    const double m1 = *std::max_element(mass_err.begin(), mass_err.end());
    report.add(suite, "lumped_mass_total", mk, ladder, mass_err, m1, "<= 1e-12", m1 <= 1e-12);
    const double m2 = *std::max_element(const_err.begin(), const_err.end());
    report.add(suite, "stiffness_annihilates_constants", mk, ladder, const_err, m2, "<= 1e-10",
               m2 <= 1e-10);
    const double m3 = *std::max_element(sym_err.begin(), sym_err.end());
    report.add(suite, "stiffness_symmetry", mk, ladder, sym_err, m3, "<= 1e-12", m3 <= 1e-12);
    const double m4 = *std::max_element(ratio_hi.begin(), ratio_hi.end());
    report.add(suite, "norm_equivalence_upper", mk, ladder, ratio_hi, m4,
               "||v||_h^2 / ||v||^2 <= d+2", violations == 0 && m4 <= d + 2);
    const double m5 = *std::min_element(ratio_lo.begin(), ratio_lo.end());
    report.add(suite, "norm_equivalence_lower", mk, ladder, ratio_lo, m5,
               "||v||_h^2 / ||v||^2 >= 1", violations == 0 && m5 >= 1.0 - 1e-12);
    const double s6 = detail::spread(inv_c);
    report.add(suite, "inverse_estimate_constant", mk, ladder, inv_c, s6,
               "max/min over ladder <= 1.5", s6 <= kBoundedSpread);
    const double m7 = *std::max_element(gap_c.begin(), gap_c.end());
    report.add(suite, "quadrature_gap_constant", mk, ladder, gap_c, m7,
               "C(n) <= 1.5 C(coarsest)", m7 <= kBoundedSpread * gap_c.front());
  }
}

/// Test functions for the consistency ladders.
inline double cos_product(const Point& x, int dim) {
  double p = 1.0;
  for (int r = 0; r < dim; ++r) p *= std::cos(std::numbers::pi * x[r]);
  return p;
}

/// Max deep-interior consistency error of cos(pi x_1)...cos(pi x_d) along a ladder.
inline std::vector<double> consistency_ladder(MeshKind kind, const std::vector<std::size_t>& ladder) {
  const int d = dimension_of(kind);
  std::vector<double> err;
  for (std::size_t n : ladder) {
    const Mesh mesh = detail::ladder_mesh(kind, n);
    err.push_back(laplacian_consistency_error(
        mesh, [d](const Point& x) { return cos_product(x, d); },
        [d](const Point& x) { return -d * std::numbers::pi * std::numbers::pi * cos_product(x, d); }));
  }
  return err;
}

inline void check_consistency(CheckReport& report) {
  const std::string suite = "Consistency";
  for (MeshKind kind : kAllMeshKinds) {
    const auto ladder = check_ladder(kind);
    const std::string mk = to_string(kind);
    const int d = dimension_of(kind);
    const auto err = consistency_ladder(kind, ladder);
    const auto h = detail::cell_sizes(ladder);
    const double rate = fitted_rate(h, err);
    report.add(suite, "cos_product_rate", mk, ladder, err, rate, "rate in [1.8, 2.2]",
               rate >= 1.8 && rate <= 2.2);

    std::vector<double> lin, quad;
    for (std::size_t n : ladder) {
      const Mesh mesh = detail::ladder_mesh(kind, n);
      lin.push_back(laplacian_consistency_error(
          mesh, [d](const Point& x) { return 0.3 + x[0] - 2.0 * x[d - 1]; },
          [](const Point&) { return 0.0; }));
      quad.push_back(laplacian_consistency_error(
          mesh, [](const Point& x) { return x[0] * x[0]; }, [](const Point&) { return 2.0; }));
    }
    const double ml = *std::max_element(lin.begin(), lin.end());
    report.add(suite, "linear_exact", mk, ladder, lin, ml, "<= 1e-11", ml <= 1e-11);
    const double mq = *std::max_element(quad.begin(), quad.end());
    report.add(suite, "quadratic_exact", mk, ladder, quad, mq, "<= 1e-10", mq <= 1e-10);
  }
}

/// Product-rule defect normalised by the scale of its terms.
inline double normalized_product_residual(const ProductRuleTerms& t) {
  return t.residual / std::max(t.scale(), 1e-300);
}

/// Product-rule defect / (||grad u|| ||grad v|| ||grad I_h w||_inf) for fixed
/// smooth generators along a ladder.
inline std::vector<double> product_rule_ladder(MeshKind kind, const std::vector<std::size_t>& ladder,
                                               const SmoothVectorWave& vg, const SmoothWave& wg,
                                               const SmoothVectorWave& ug) {
  std::vector<double> out;
  for (std::size_t n : ladder) {
    const Mesh mesh = detail::ladder_mesh(kind, n);
    const VectorField v = nodal_interpolate(mesh, vg);
    const VectorField u = nodal_interpolate(mesh, ug);
    const double res = product_rule_residual(mesh, v, wg, u);
    const double scale = gradient_norms(mesh, u).l2 * gradient_norms(mesh, v).l2 *
                         gradient_norms(mesh, nodal_interpolate(mesh, wg)).linf;
    out.push_back(res / scale);
  }
  return out;
}

inline void check_product_rule(CheckReport& report, int triples = 50) {
  const std::string suite = "ProductRule";
  {
    CheckRng rng(report.seed(), detail::stream_id(CheckSuite::ProductRule, MeshKind::Interval1D, 0));
    const auto ladder = check_ladder(MeshKind::Interval1D);
    std::vector<double> worst;
    for (std::size_t n : ladder) {
      const Mesh mesh = detail::ladder_mesh(MeshKind::Interval1D, n);
      double m = 0.0;
      for (int i = 0; i < triples; ++i) {
        const VectorField v = random_vector_field(mesh, rng);
        const VectorField u = random_vector_field(mesh, rng);
        const SmoothWave w = SmoothWave::random(rng, 1);
        m = std::max(m, normalized_product_residual(product_rule_terms(mesh, v, w, u)));
      }
      worst.push_back(m);
    }
    const double m = *std::max_element(worst.begin(), worst.end());
    report.add(suite, "one_dimensional_identity", to_string(MeshKind::Interval1D), ladder, worst, m,
               "normalized residual <= 1e-12", m <= 1e-12);
  }
  for (MeshKind kind : kAllMeshKinds) {
    CheckRng rng(report.seed(), detail::stream_id(CheckSuite::ProductRule, kind, 1));
    const auto ladder = check_ladder(kind);
    const int d = dimension_of(kind);
    std::vector<double> ones;
    for (std::size_t n : ladder) {
      const Mesh mesh = detail::ladder_mesh(kind, n);
      const VectorField v = random_vector_field(mesh, rng);
      const VectorField u = random_vector_field(mesh, rng);
      ones.push_back(product_rule_residual(mesh, v, [](const Point&) { return 1.0; }, u));
    }
    const double m = *std::max_element(ones.begin(), ones.end());
    report.add(suite, "constant_multiplier", to_string(kind), ladder, ones, m, "<= 1e-13",
               m <= 1e-13);
    if (d < 2) continue;
    const auto vg = SmoothVectorWave::random(rng, d);
    const auto wg = SmoothWave::random(rng, d);
    const auto ug = SmoothVectorWave::random(rng, d);
    const auto res = product_rule_ladder(kind, ladder, vg, wg, ug);
    const double rate = fitted_rate(detail::cell_sizes(ladder), res);
    report.add(suite, "defect_rate", to_string(kind), ladder, res, rate, "rate >= 0.9",
               rate >= 0.9);
  }
}

/// 1D smooth datum with a seeded tangent initial velocity.
inline InitialData energy_check_data(const Mesh& mesh, CheckRng& rng) {
  InitialData d = builtin_initial(InitialKind::Smooth1D, mesh, 1);
  const SmoothWave a = SmoothWave::random(rng, 1);
  const SmoothWave b = SmoothWave::random(rng, 1);
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    const Vec3& u = d.u0[z];
    const Vec3 t{-u[1], u[0], 0.0};  // tangent in the plane of the curve
    d.v0[z] = a(mesh.node(z)) * t + Vec3{0.0, 0.0, b(mesh.node(z))};
  }
  return d;
}

inline void check_energy_laws(CheckReport& report, int steps = 40) {
  const std::string suite = "EnergyLaws";
  const std::vector<std::size_t> ladder{32};
  const Mesh mesh = detail::ladder_mesh(MeshKind::Interval1D, 32);
  CheckRng rng(report.seed(), detail::stream_id(CheckSuite::EnergyLaws, MeshKind::Interval1D, 0));
  const InitialData init = energy_check_data(mesh, rng);
  const std::string mk = to_string(MeshKind::Interval1D);

  std::vector<EnergyRecord> dissipative_history;
  for (const SchemeVariant& variant :
       {SchemeVariant::dissipative(), SchemeVariant::stabilized(2.0, 0.01),
        SchemeVariant::conservative(), SchemeVariant::stabilized(2.0, 0.0)}) {
    SchemeParams p;
    p.variant = variant;
    p.tau = mesh.cell_h() / 10.0;
    std::string label = to_string(variant.kind);
    if (variant.kind == VariantKind::Stabilized && variant.c_stab == 0.0) label += "_c0";
    std::vector<EnergyRecord> history;
    double constraint = 0.0;
    bool failed = false;
    try {
      SimState s = init_state(mesh, init.u0, init.v0, p);
      history.push_back(energy(mesh, s, p));
      for (int k = 0; k < steps; ++k) {
        s = advance(mesh, s, p).state;
        history.push_back(energy(mesh, s, p));
        constraint = std::max(constraint, history.back().constraint_violation);
      }
    } catch (const Error&) {
      failed = true;
    }
    if (variant.kind == VariantKind::Stabilized && variant.c_stab == 0.0) {
      bool same = !failed && history.size() == dissipative_history.size();
      for (std::size_t i = 0; same && i < history.size(); ++i)
        same = history[i].e_h == dissipative_history[i].e_h &&
               history[i].damping_accum == dissipative_history[i].damping_accum;
      report.add(suite, "stabilized_c0_matches_dissipative", mk, ladder, {}, same ? 0.0 : 1.0,
                 "bitwise equal energy history", same);
      continue;
    }
    if (variant.kind == VariantKind::Dissipative) dissipative_history = history;
    const double law = failed ? INFINITY : energy_law_residual(history, variant.kind);
    report.add(suite, "energy_law_" + label, mk, ladder, {law}, law, "relative <= 1e-6",
               law <= 1e-6);
    const double c = failed ? INFINITY : constraint;
    report.add(suite, "sphere_constraint_" + label, mk, ladder, {c}, c, "<= 1e-12", c <= 1e-12);
    if (variant.kind != VariantKind::Conservative) {
      const double inc = failed ? INFINITY : max_energy_increase(history, variant.kind);
      report.add(suite, "energy_monotone_" + label, mk, ladder, {inc}, inc,
                 "relative increase <= 1e-6", inc <= 1e-6);
    }
  }
}

inline nlohmann::ordered_json run_check(CheckSuite suite, std::uint64_t seed) {
  CheckReport report(seed);
  const bool all = suite == CheckSuite::All;
  if (all || suite == CheckSuite::Operators) check_operators(report);
  if (all || suite == CheckSuite::ProductRule) check_product_rule(report);
  if (all || suite == CheckSuite::Consistency) check_consistency(report);
  if (all || suite == CheckSuite::EnergyLaws) check_energy_laws(report);
  return report.to_json(to_string(suite));
}

}  // namespace biwave
