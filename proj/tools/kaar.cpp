// kaar: online kernel regression experiments from the command line.
//
//   kaar run       --data trials.csv --algo kaar --kernel rbf:0.5 --ridge 1
//   kaar certify   --data trials.csv --kernel poly:2 --ridge 1 --ybound 1
//   kaar cap-select --data trials.csv --m-max 8 --ridge 1 --ybound 1
//   kaar relations --data trials.csv --kernel linear --ridge 1
//   kaar verify    --seed 7

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kaar/bounds.hpp"
#include "kaar/cap.hpp"
#include "kaar/checks/suite.hpp"
#include "kaar/dataset.hpp"
#include "kaar/error.hpp"
#include "kaar/experiment.hpp"

namespace {

struct Options {
  std::string data;
  std::string kernel = "linear";
  double ridge = 1.0;
  std::optional<double> ybound;
  std::string out = "-";
  std::uint64_t seed = 20040707;
  std::string algo = "kaar";
  bool clip = false;
  bool no_timing = false;
  int m_min = 1;
  int m_max = 8;
  double offset = 1.0;
};

void write_json(const nlohmann::json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw kaar::Error("cannot open " + out + " for writing");
  f << text;
  if (!f.flush()) throw kaar::Error("failed writing " + out);
}

std::ifstream open_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kaar::ParseError("cannot open " + path);
  return in;
}

int run_or_certify(const Options& opt, bool certify) {
  kaar::ExperimentConfig cfg;
  cfg.algorithm = kaar::parse_algorithm(opt.algo);
  cfg.kernel = kaar::parse_kernel(opt.kernel);
  cfg.ridge = opt.ridge;
  cfg.y_bound = opt.ybound;
  cfg.certify = certify;
  cfg.clip = opt.clip;

  std::ifstream in = open_data(opt.data);
  kaar::CsvTrialReader reader(in, opt.data);
  const auto report = kaar::run_experiment(reader, cfg);
  kaar::emit_report(report, opt.out, !opt.no_timing);
  if (report.certificate && report.certificate->slack < 0.0) {
    std::cerr << "warning: certificate slack is negative (" << report.certificate->slack << ")\n";
  }
  return 0;
}

int cap_select(const Options& opt) {
  const auto ds = kaar::parse_dataset(std::filesystem::path(opt.data));
  const auto [y, source] = kaar::resolve_y_bound(ds.trials.outcomes, opt.ybound);
  const auto sel = kaar::cap_select(ds.trials, kaar::polynomial_family(opt.offset), opt.m_min,
                                    opt.m_max, opt.ridge, y);
  auto doc = kaar::to_json(sel);
  doc["ridge"] = opt.ridge;
  doc["y_bound"] = y;
  doc["y_bound_source"] = kaar::to_string(source);
  doc["family"] = "poly";
  doc["offset"] = opt.offset;
  write_json(doc, opt.out);
  return 0;
}

int relations(const Options& opt) {
  const auto ds = kaar::parse_dataset(std::filesystem::path(opt.data));
  const kaar::Kernel kernel = kaar::parse_kernel(opt.kernel);
  nlohmann::json steps = nlohmann::json::array();
  bool ok = true;
  for (std::size_t t = 0; t < ds.trials.size(); ++t) {
    const auto rep = kaar::relation_report(ds.trials.prefix(t), ds.trials.signals[t], kernel, opt.ridge);
    const double tol = 1e-10 * (1.0 + std::abs(rep.gamma));
    ok = ok && rep.ratio_residual <= tol && (!rep.linear_ratio_residual || *rep.linear_ratio_residual <= tol);
    nlohmann::json step{{"t", t + 1},
                        {"gamma", rep.gamma},
                        {"rr", rep.rr},
                        {"schur", rep.schur},
                        {"ratio_residual", rep.ratio_residual},
                        {"linear_ratio_residual", rep.linear_ratio_residual ? nlohmann::json(*rep.linear_ratio_residual) : nlohmann::json(nullptr)}};
    steps.push_back(std::move(step));
  }
  write_json(nlohmann::json{{"kernel", kernel.to_string()}, {"ridge", opt.ridge}, {"within_tolerance", ok}, {"steps", steps}},
             opt.out);
  return ok ? 0 : 1;
}

int verify(const Options& opt) {
  const auto results = kaar::checks::run_invariant_suite(opt.seed);
  return kaar::checks::print_results(results, std::cout) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online kernel regression: KAAR, AAR and ridge regression with loss bound certificates"};
  app.require_subcommand(1);
  Options opt;

  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", opt.data, "CSV file with columns x1..xn,y")->required()->check(CLI::ExistingFile);
    sub->add_option("--ridge", opt.ridge, "Ridge parameter a > 0")->check(CLI::PositiveNumber);
    sub->add_option("--ybound", opt.ybound, "Outcome bound Y; inferred as max |y| when omitted");
    sub->add_option("--out", opt.out, "Output path, '-' for stdout");
  };

  auto* run = app.add_subcommand("run", "Run an online predictor over a dataset");
  add_data(run);
  run->add_option("--kernel", opt.kernel, "linear | poly:<m>[:<offset>] | rbf:<width>");
  run->add_option("--algo", opt.algo, "kaar | aar | rr-prequential");
  run->add_flag("--clip", opt.clip, "Clamp predictions to [-Y, Y] (needs --ybound)");
  run->add_flag("--no-timing", opt.no_timing, "Omit wall-clock timings from the report");

  auto* certify = app.add_subcommand("certify", "Run and attach the loss bound certificate");
  add_data(certify);
  certify->add_option("--kernel", opt.kernel, "linear | poly:<m>[:<offset>] | rbf:<width>");
  certify->add_option("--algo", opt.algo, "kaar | aar");
  certify->add_flag("--no-timing", opt.no_timing, "Omit wall-clock timings from the report");

  auto* cap = app.add_subcommand("cap-select", "Choose a polynomial kernel degree by complexity approximation");
  add_data(cap);
  cap->add_option("--m-min", opt.m_min, "Smallest degree")->check(CLI::PositiveNumber);
  cap->add_option("--m-max", opt.m_max, "Largest degree")->check(CLI::PositiveNumber);
  cap->add_option("--offset", opt.offset, "Polynomial offset")->check(CLI::NonNegativeNumber);

  auto* rel = app.add_subcommand("relations", "Per-trial KAAR / ridge regression identity residuals");
  add_data(rel);
  rel->add_option("--kernel", opt.kernel, "linear | poly:<m>[:<offset>] | rbf:<width>");

  auto* ver = app.add_subcommand("verify", "Run the invariant suite on random instances");
  ver->add_option("--seed", opt.seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_or_certify(opt, false);
    if (*certify) return run_or_certify(opt, true);
    if (*cap) return cap_select(opt);
    if (*rel) return relations(opt);
    if (*ver) return verify(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
