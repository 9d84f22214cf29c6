// tpa: two-photon absorption spectra from the command line.
//
//   tpa scan --config scan.json [--out file.csv] [--workers n]
//   tpa figure --fig 4 [--out fig4.csv] [--a-values 0.5,1] [--gamma-v-max 10] [--points 101]
//   tpa validate --level fast|full
//
// Exit codes: 0 success, 1 validation failure, 2 usage, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tpa/errors.hpp"
#include "tpa/scan.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

int emit(const tpa::scan::SpectrumScan& scan, const std::string& path) {
  if (path.empty()) {
    tpa::scan::write_csv(std::cout, scan);
    return 0;
  }
  std::ofstream os(path);
  if (!os) {
    std::cerr << "tpa: cannot open '" << path << "' for writing\n";
    return kUsage;
  }
  tpa::scan::write_csv(os, scan);
  return os ? 0 : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon absorption spectra of Doppler-broadened three-level atoms"};
  app.require_subcommand(1);

  int workers = tpa::scan::default_workers();
  std::string config_path, out_path, level = "fast";
  int fig = 0;
  tpa::scan::FigureOptions fig_opts;

  auto* scan = app.add_subcommand("scan", "evaluate an observable along one parameter axis");
  scan->add_option("--config", config_path, "JSON scan configuration")->required()->check(CLI::ExistingFile);
  scan->add_option("--out", out_path, "CSV output path (overrides the config)");
  scan->add_option("--workers", workers, "worker threads (default TPA_WORKERS or 1)")->check(CLI::Range(1, 1024));

  auto* figure = app.add_subcommand("figure", "emit the dataset of one figure");
  figure->add_option("--fig", fig, "figure number")->required()->check(CLI::IsMember({2, 3, 4, 5}));
  figure->add_option("--out", out_path, "CSV output path (default stdout)");
  figure->add_option("--workers", workers, "worker threads")->check(CLI::Range(1, 1024));
  figure->add_option("--a-values", fig_opts.a_values, "field ratios A to plot")->delimiter(',');
  figure->add_option("--gamma-v-max", fig_opts.gamma_v_max, "upper end of the gamma_v grid");
  figure->add_option("--points", fig_opts.points, "grid points")->check(CLI::Range(2, 100000));

  auto* validate = app.add_subcommand("validate", "run the invariant suites and print a table");
  validate->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*scan) {
      std::ifstream in(config_path);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "tpa: config is not valid JSON: " << e.what() << '\n';
        return kUsage;
      }
      auto config = tpa::scan::scan_config_from_json(doc);
      if (!out_path.empty()) config.out = out_path;
      return emit(tpa::scan::run_scan(config, workers), config.out);
    }
    if (*figure) {
      fig_opts.workers = workers;
      return emit(tpa::scan::run_figure(fig, fig_opts), out_path);
    }
    const auto report = tpa::scan::run_validation(level == "full" ? tpa::scan::ValidationLevel::Full
                                                                  : tpa::scan::ValidationLevel::Fast);
    tpa::scan::write_report(std::cout, report);
    return report.all_passed() ? 0 : 1;
  } catch (const tpa::InvalidParameter& e) {
    std::cerr << "tpa: invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const tpa::Error& e) {
    std::cerr << "tpa: numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
