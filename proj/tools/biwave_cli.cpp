// Command-line front end: run a configuration, run property suites, print
// refinement ladders.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "biwave/biwave.hpp"

namespace {

int cmd_run(const std::string& path) {
  biwave::RunConfig config;
  try {
    config = biwave::load_config(path);
  } catch (const biwave::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return biwave::kExitConfigError;
  }
  return biwave::run(config, std::cerr).exit_code;
}

int cmd_check(const std::string& suite_name, std::uint64_t seed) {
  biwave::CheckSuite suite;
  try {
    suite = biwave::parse_check_suite(suite_name);
  } catch (const biwave::Error& e) {
    std::cerr << e.what() << '\n';
    return biwave::kExitConfigError;
  }
  const auto report = biwave::run_check(suite, seed);
  std::cout << report.dump(2) << '\n';
  return report["pass"].get<bool>() ? 0 : 1;
}

void print_ladder(const char* title, const std::vector<std::size_t>& ladder,
                  const std::vector<double>& err) {
  std::printf("%s\n%8s %12s %14s %8s\n", title, "n", "cell_h", "error", "rate");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const double h = 2.0 / static_cast<double>(ladder[i]);
    if (i == 0) {
      std::printf("%8zu %12.6g %14.6e %8s\n", ladder[i], h, err[i], "-");
    } else {
      const double rate = std::log(err[i - 1] / err[i]) / std::log(2.0);
      std::printf("%8zu %12.6g %14.6e %8.3f\n", ladder[i], h, err[i], rate);
    }
  }
  std::vector<double> hs;
  for (std::size_t n : ladder) hs.push_back(2.0 / static_cast<double>(n));
  std::printf("fitted rate %.4f\n\n", biwave::fitted_rate(hs, err));
}

int cmd_rates(std::uint64_t seed) {
  using biwave::MeshKind;
  for (MeshKind kind : biwave::kAllMeshKinds) {
    const auto ladder = biwave::check_ladder(kind);
    const std::string title = "Laplacian consistency, " + biwave::to_string(kind);
    print_ladder(title.c_str(), ladder, biwave::consistency_ladder(kind, ladder));
  }
  biwave::CheckRng rng(seed, 0);
  for (MeshKind kind : {MeshKind::Type1Triangles2D, MeshKind::Type2Tetrahedra3D}) {
    const int d = biwave::dimension_of(kind);
    const auto vg = biwave::SmoothVectorWave::random(rng, d);
    const auto wg = biwave::SmoothWave::random(rng, d);
    const auto ug = biwave::SmoothVectorWave::random(rng, d);
    const auto ladder = biwave::check_ladder(kind);
    const std::string title = "Product rule defect, " + biwave::to_string(kind);
    print_ladder(title.c_str(), ladder, biwave::product_rule_ladder(kind, ladder, vg, wg, ug));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving solver for bi-harmonic wave maps into the sphere"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a configuration file");
  run->add_option("config", config_path, "key = value configuration")->required();

  std::string suite = "All";
  std::uint64_t seed = 0;
  auto* check = app.add_subcommand("check", "Run a property suite and print a JSON report");
  check->add_option("suite", suite, "Operators, ProductRule, Consistency, EnergyLaws or All")
      ->required();
  check->add_option("--seed", seed, "Seed for randomized inputs");

  std::uint64_t rates_seed = 0;
  auto* rates = app.add_subcommand("rates", "Print consistency and product-rule ladders");
  rates->add_option("--seed", rates_seed, "Seed for the product-rule generators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : biwave::kExitConfigError;
  }

  if (*run) return cmd_run(config_path);
  if (*check) return cmd_check(suite, seed);
  if (*rates) return cmd_rates(rates_seed);
  return biwave::kExitConfigError;
}
