#include "kaar/experiment.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <variant>

#include "kaar/error.hpp"

namespace kaar {

Algorithm parse_algorithm(std::string_view name) {
  if (name == "kaar") return Algorithm::kaar;
  if (name == "aar") return Algorithm::aar;
  if (name == "rr-prequential" || name == "rr") return Algorithm::rr_prequential;
  throw InvalidArgument("unknown algorithm '" + std::string(name) + "' (expected kaar, aar or rr-prequential)");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kaar: return "kaar";
    case Algorithm::aar: return "aar";
    case Algorithm::rr_prequential: return "rr-prequential";
  }
  return "unknown";
}

namespace {

void validate(const ExperimentConfig& config) {
  if (!(config.ridge > 0.0)) throw InvalidArgument("ridge must be > 0");
  if (config.algorithm == Algorithm::aar && !config.kernel.is_linear()) {
    throw InvalidArgument("aar works on the dot product; use --kernel linear or the kaar algorithm");
  }
  if (config.certify && config.algorithm == Algorithm::rr_prequential) {
    throw InvalidArgument("loss bound certificates apply to kaar and aar only");
  }
  if (config.clip && !config.y_bound) throw InvalidArgument("clipping needs a declared Y bound");
  if (config.clip && config.certify) throw InvalidArgument("clipped runs cannot be certified");
}

// One learner per run, created at the first signal so AAR can size itself.
class Learner {
 public:
  explicit Learner(const ExperimentConfig& config) : config_(config) {}

  TrialRecord step(const Signal& x, double y) {
    if (std::holds_alternative<std::monostate>(state_)) start(x);
    return std::visit(
        [&](auto& s) -> TrialRecord {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, std::monostate>) {
            return {};
          } else if constexpr (std::is_same_v<S, RidgePredictor>) {
            if (!config_.clip) return s.update(x, y);
            TrialRecord rec = s.update(x, y);
            rec.prediction = clip_prediction(rec.prediction, *config_.y_bound);
            rec.loss = (y - rec.prediction) * (y - rec.prediction);
            return rec;
          } else {
            auto p = s.predict(x);
            if (config_.clip) p.gamma = clip_prediction(p.gamma, *config_.y_bound);
            return s.observe(p, y);
          }
        },
        state_);
  }

 private:
  void start(const Signal& x) {
    switch (config_.algorithm) {
      case Algorithm::kaar: state_.emplace<KaarPredictor>(config_.kernel, config_.ridge); break;
      case Algorithm::aar: state_.emplace<AarPredictor>(x.size(), config_.ridge); break;
      case Algorithm::rr_prequential: state_.emplace<RidgePredictor>(config_.kernel, config_.ridge); break;
    }
  }

  const ExperimentConfig& config_;
  std::variant<std::monostate, KaarPredictor, AarPredictor, RidgePredictor> state_;
};

template <typename NextRow>
ExperimentReport run(NextRow next_row, const ExperimentConfig& config) {
  validate(config);
  ExperimentReport report;
  report.config = config;
  Learner learner(config);

  double cumulative = 0.0;
  while (auto row = next_row()) {
    const std::size_t t = report.trials.size() + 1;
    const auto& [x, y] = *row;
    if (config.y_bound && std::abs(y) > *config.y_bound) {
      throw BoundViolation("trial " + std::to_string(t) + ": outcome " + std::to_string(y) +
                           " exceeds the declared bound Y = " + std::to_string(*config.y_bound));
    }
    const auto start = std::chrono::steady_clock::now();
    TrialRecord rec;
    try {
      rec = learner.step(x, y);
    } catch (const NumericFailure& e) {
      throw NumericFailure("trial " + std::to_string(t) + ": " + e.what());
    } catch (const DimensionMismatch& e) {
      throw DimensionMismatch("trial " + std::to_string(t) + ": " + e.what());
    }
    const auto stop = std::chrono::steady_clock::now();
    rec.index = t;
    cumulative += rec.loss;
    report.trials.push_back(std::move(rec));
    report.cumulative_loss.push_back(cumulative);
    report.step_seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }

  if (config.certify) {
    report.certificate = loss_bound_certificate(report.trials, config.kernel, config.ridge, config.y_bound);
  }
  return report;
}

}  // namespace

ExperimentReport run_experiment(CsvTrialReader& reader, const ExperimentConfig& config) {
  return run(
      [&]() -> std::optional<std::pair<Signal, double>> {
        auto row = reader.next();
        if (!row) return std::nullopt;
        return std::pair{std::move(row->signal), row->outcome};
      },
      config);
}

ExperimentReport run_experiment(const Sequence& data, const ExperimentConfig& config) {
  std::size_t i = 0;
  return run(
      [&]() -> std::optional<std::pair<Signal, double>> {
        if (i == data.size()) return std::nullopt;
        ++i;
        return std::pair{data.signals[i - 1], data.outcomes[i - 1]};
      },
      config);
}

nlohmann::json report_to_json(const ExperimentReport& report, bool include_timing) {
  using nlohmann::json;
  const auto& cfg = report.config;
  json config{{"algorithm", to_string(cfg.algorithm)},
              {"kernel", cfg.kernel.to_string()},
              {"ridge", cfg.ridge},
              {"ybound", cfg.y_bound ? json(*cfg.y_bound) : json(nullptr)},
              {"clip", cfg.clip}};

  json trials = json::array();
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    const auto& t = report.trials[i];
    trials.push_back(json{{"t", t.index},
                          {"x", std::vector<double>(t.signal.data(), t.signal.data() + t.signal.size())},
                          {"prediction", t.prediction},
                          {"outcome", t.outcome},
                          {"loss", t.loss},
                          {"cumulative_loss", report.cumulative_loss[i]}});
  }

  json out{{"schema_version", kReportSchemaVersion},
           {"config", config},
           {"trials", trials},
           {"total_loss", report.total_loss()}};
  if (report.certificate) out["certificate"] = to_json(*report.certificate);
  if (include_timing) {
    double total = 0.0;
    for (double s : report.step_seconds) total += s;
    out["timing"] = json{{"step_seconds", report.step_seconds}, {"total_seconds", total}};
  }
  return out;
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& out_path,
                 bool include_timing) {
  const std::string text = report_to_json(report, include_timing).dump(2) + "\n";
  if (out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot open " + out_path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error("failed writing " + out_path.string());
}

std::vector<double> losses_from_report(const nlohmann::json& report) {
  std::vector<double> losses;
  for (const auto& t : report.at("trials")) losses.push_back(t.at("loss").get<double>());
  return losses;
}

}  // namespace kaar
