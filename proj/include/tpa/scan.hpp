#pragma once

// Parameter sweeps, figure datasets and the validation report behind the
// command-line tool. Output is CSV preceded by a '#'-prefixed JSON metadata
// line; values are printed with 17 significant digits.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpa/averaging.hpp"
#include "tpa/core.hpp"

namespace tpa::scan {

inline constexpr const char* kVersion = "1.0.0";

enum class Observable { N2, N2PlusN3, OracleAvg, Width, Stark, N2Max };

std::string_view to_string(Observable o);
Observable observable_from_string(std::string_view name);

/// Axis names are the raw parameter keys: delta, gamma_v, a_ratio, mu, phi,
/// delta_big. With gamma = 1 (the default) they are the normalized values.
struct SweepAxis {
  std::string axis;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;

  std::vector<double> values() const;
};

struct ScanConfig {
  Observable observable = Observable::N2;
  SweepAxis sweep;
  ParameterSet fixed;
  averaging::QuadratureSpec quad = averaging::QuadratureSpec::adaptive();
  double refine_tol = 1e-15;
  int harmonic_cap = oracle::kDefaultHarmonicCap;
  std::string out;  ///< empty: standard output
};

/// Parameters used when a config leaves a key out.
ParameterSet default_parameters();

/// Parses a ScanConfig document; throws InvalidParameter on any violation
/// (unknown keys, empty range, swept key also fixed, ...).
ScanConfig scan_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ScanConfig& config);

struct SpectrumScan {
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> columns;  ///< columns[0] is the axis
  nlohmann::json metadata;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

void write_csv(std::ostream& os, const SpectrumScan& scan);

/// Value of the configured observable at one parameter point. n_used is
/// set for oracle observables, else left at 0.
double evaluate_observable(const ScanConfig& config, const ParameterSet& point, int* n_used = nullptr);

/// Evaluates every sweep point, on up to `workers` threads; rows are
/// gathered in axis order so the output does not depend on scheduling.
SpectrumScan run_scan(const ScanConfig& config, int workers = 1);

struct FigureOptions {
  std::vector<double> a_values;  ///< empty: the figure's default set
  double gamma_v_max = 10.0;
  int points = 101;
  int workers = 1;
};

SpectrumScan run_figure(int fig, const FigureOptions& options = {});

enum class ValidationLevel { Fast, Full };

struct ValidationCheck {
  std::string name;
  bool passed;
  double achieved;
  double threshold;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

ValidationReport run_validation(ValidationLevel level);
void write_report(std::ostream& os, const ValidationReport& report);

/// Worker count from TPA_WORKERS, or 1.
int default_workers();

}  // namespace tpa::scan
