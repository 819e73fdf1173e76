#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kaar/bounds.hpp"
#include "kaar/dataset.hpp"
#include "kaar/kernel.hpp"
#include "kaar/predictors.hpp"

namespace kaar {

enum class Algorithm { kaar, aar, rr_prequential };

Algorithm parse_algorithm(std::string_view name);
std::string to_string(Algorithm algorithm);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kaar;
  Kernel kernel = Kernel::linear();
  double ridge = 1.0;
  std::optional<double> y_bound;
  bool certify = false;
  bool clip = false;  // clamp predictions to [-Y, Y]; requires a declared Y, not certifiable
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  std::vector<double> cumulative_loss;
  std::vector<double> step_seconds;
  std::optional<BoundCertificate> certificate;

  double total_loss() const { return cumulative_loss.empty() ? 0.0 : cumulative_loss.back(); }
};

inline constexpr int kReportSchemaVersion = 1;

/// Runs the online protocol over rows pulled from `reader`: each signal is
/// predicted on before its outcome is read. Numeric failures are rethrown
/// with the trial number.
ExperimentReport run_experiment(CsvTrialReader& reader, const ExperimentConfig& config);
ExperimentReport run_experiment(const Sequence& data, const ExperimentConfig& config);

/// Timing lives under the "timing" key; everything else is deterministic.
nlohmann::json report_to_json(const ExperimentReport& report, bool include_timing = true);

/// Writes the report as JSON; "-" means stdout.
void emit_report(const ExperimentReport& report, const std::filesystem::path& out_path,
                 bool include_timing = true);

/// Per-trial losses recovered from an emitted report.
std::vector<double> losses_from_report(const nlohmann::json& report);

}  // namespace kaar
