// acousep/experiment.hpp
//
// Copyright 2026 The acousep authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACOUSEP_EXPERIMENT_HPP_
#define ACOUSEP_EXPERIMENT_HPP_

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "acousep/error.hpp"
#include "acousep/fastica.hpp"
#include "acousep/features.hpp"
#include "acousep/knn.hpp"
#include "acousep/metrics.hpp"
#include "acousep/mixing.hpp"
#include "acousep/rng.hpp"
#include "acousep/svm.hpp"
#include "acousep/synth.hpp"

namespace acousep {

enum class Classifier { kSvm, kKnn };

inline constexpr std::string_view to_string(Classifier c) {
  return c == Classifier::kSvm ? "SVM" : "KNN";
}

inline Classifier classifier_from_string(std::string_view s) {
  if (s == "SVM" || s == "svm") return Classifier::kSvm;
  if (s == "KNN" || s == "knn") return Classifier::kKnn;
  throw ParameterError("unknown classifier: '" + std::string(s) + "'");
}

// random: a fresh condition-bounded mixing matrix per trial.  identity: the
// observation equals the sources and separation is a pass-through, giving
// the clean-pipeline baseline (exact recovery, SIR at the cap).
enum class MixingMode { kRandom, kIdentity };

inline constexpr std::string_view to_string(MixingMode m) {
  return m == MixingMode::kRandom ? "random" : "identity";
}

inline MixingMode mixing_mode_from_string(std::string_view s) {
  if (s == "random") return MixingMode::kRandom;
  if (s == "identity") return MixingMode::kIdentity;
  throw ParameterError("unknown mixing mode: '" + std::string(s) + "'");
}

// Full description of a study run.  One trial synthesizes every configured
// source at max(block_lengths) samples and mixes once; each configured L is
// then evaluated on the leading L samples of that mixture, so
// trials_per_length blocks exist at every length and the train/test split
// can stay trial-disjoint.
struct ExperimentConfig {
  std::vector<int> block_lengths{1000, 4000, 7000, 10000};
  int trials_per_length = 50;
  std::vector<SourceSpec> source_specs;
  double train_fraction = 0.7;
  std::uint64_t seed = 42;
  std::vector<FeatureMethod> methods{FeatureMethod::kPsd9,
                                     FeatureMethod::kRmsPsd9,
                                     FeatureMethod::kMfcc12};
  std::vector<Classifier> classifiers{Classifier::kSvm, Classifier::kKnn};
  MixingMode mixing = MixingMode::kRandom;
  int sample_rate = 22050;
  Contrast contrast = Contrast::kTanh;
  int max_iterations = 200;
  double tolerance = 1e-6;
  int ica_restarts = 5;
  double svm_c = 1.0;
  int knn_k = 5;
  double max_condition = 100.0;
};

// Three drones with detuned rotor fundamentals plus three interferers.
// Detuning matters: ICA assumes mutually independent sources, and two
// drones sharing one fundamental are correlated and inseparable.
inline ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  const double detuned[] = {180.0, 210.0, 245.0};
  for (double f0 : detuned) {
    SourceSpec s = default_spec(SourceLabel::kDrone);
    s.fundamental_hz = f0;
    cfg.source_specs.push_back(s);
  }
  cfg.source_specs.push_back(default_spec(SourceLabel::kAeroplane));
  cfg.source_specs.push_back(default_spec(SourceLabel::kBird));
  cfg.source_specs.push_back(default_spec(SourceLabel::kWind));
  return cfg;
}

// Two detuned drones flying at once plus four interferers, the harder
// detection-event scenario: a test trial only counts as a success for the
// all-drones-detected rate when both drone channels are classified drone.
inline ExperimentConfig multi_drone_experiment_config() {
  ExperimentConfig cfg;
  cfg.block_lengths = {4000, 10000};
  cfg.trials_per_length = 30;
  const double detuned[] = {180.0, 235.0};
  for (double f0 : detuned) {
    SourceSpec s = default_spec(SourceLabel::kDrone);
    s.fundamental_hz = f0;
    cfg.source_specs.push_back(s);
  }
  cfg.source_specs.push_back(default_spec(SourceLabel::kAeroplane));
  cfg.source_specs.push_back(default_spec(SourceLabel::kBird));
  cfg.source_specs.push_back(default_spec(SourceLabel::kWind));
  cfg.source_specs.push_back(default_spec(SourceLabel::kRain));
  return cfg;
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.source_specs.size() < 2)
    throw ConfigurationError("experiment: need at least 2 sources");
  int drones = 0, others = 0;
  for (const SourceSpec& s : cfg.source_specs)
    (is_drone(s.label) ? drones : others)++;
  if (drones < 1 || others < 1)
    throw ConfigurationError(
        "experiment: need at least one drone and one non-drone source");
  if (cfg.block_lengths.empty())
    throw ConfigurationError("experiment: no block lengths");
  for (int l : cfg.block_lengths) {
    if (l < 2 * static_cast<int>(cfg.source_specs.size()))
      throw ConfigurationError("experiment: block length " + std::to_string(l) +
                               " < 2 x source count");
  }
  if (!(cfg.train_fraction > 0.0) || !(cfg.train_fraction < 1.0))
    throw ConfigurationError("experiment: train_fraction must lie in (0, 1)");
  if (cfg.trials_per_length < 1)
    throw ConfigurationError("experiment: trials_per_length must be >= 1");
  if (cfg.methods.empty())
    throw ConfigurationError("experiment: no feature methods configured");
  if (cfg.classifiers.empty())
    throw ConfigurationError("experiment: no classifiers configured");
  if (cfg.sample_rate <= 0)
    throw ConfigurationError("experiment: sample rate must be positive");
  if (cfg.knn_k < 1 || cfg.knn_k % 2 == 0)
    throw ConfigurationError("experiment: knn_k must be odd and >= 1");
  if (!(cfg.svm_c > 0.0))
    throw ConfigurationError("experiment: svm_c must be positive");
  if (cfg.ica_restarts < 1)
    throw ConfigurationError("experiment: ica_restarts must be >= 1");
}

// -------------------------------------------------------------------------
// JSON <-> config

inline nlohmann::ordered_json to_json(const SourceSpec& s) {
  nlohmann::ordered_json j;
  j["label"] = to_string(s.label);
  j["fundamental_hz"] = s.fundamental_hz;
  j["harmonic_count"] = s.harmonic_count;
  j["noise_floor"] = s.noise_floor;
  j["am_rate_hz"] = s.am_rate_hz;
  j["am_depth"] = s.am_depth;
  j["band_low_hz"] = s.band_low_hz;
  j["band_high_hz"] = s.band_high_hz;
  j["impulse_prob"] = s.impulse_prob;
  j["impulse_amp"] = s.impulse_amp;
  j["impulse_shape"] =
      s.impulse_shape == ImpulseShape::kLaplace ? "laplace" : "gaussian";
  return j;
}

// Starts from the class defaults and overrides whatever fields are present,
// so {"label": "drone", "fundamental_hz": 180} is a complete spec.
inline SourceSpec source_spec_from_json(const nlohmann::json& j) {
  SourceSpec s = default_spec(source_label_from_string(
      j.at("label").get<std::string>()));
  if (j.contains("fundamental_hz")) s.fundamental_hz = j["fundamental_hz"].get<double>();
  if (j.contains("harmonic_count")) s.harmonic_count = j["harmonic_count"].get<int>();
  if (j.contains("noise_floor")) s.noise_floor = j["noise_floor"].get<double>();
  if (j.contains("am_rate_hz")) s.am_rate_hz = j["am_rate_hz"].get<double>();
  if (j.contains("am_depth")) s.am_depth = j["am_depth"].get<double>();
  if (j.contains("band_low_hz")) s.band_low_hz = j["band_low_hz"].get<double>();
  if (j.contains("band_high_hz")) s.band_high_hz = j["band_high_hz"].get<double>();
  if (j.contains("impulse_prob")) s.impulse_prob = j["impulse_prob"].get<double>();
  if (j.contains("impulse_amp")) s.impulse_amp = j["impulse_amp"].get<double>();
  if (j.contains("impulse_shape")) {
    const auto sh = j["impulse_shape"].get<std::string>();
    if (sh == "laplace") s.impulse_shape = ImpulseShape::kLaplace;
    else if (sh == "gaussian") s.impulse_shape = ImpulseShape::kGaussian;
    else throw ParameterError("unknown impulse_shape: '" + sh + "'");
  }
  return s;
}

inline nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["block_lengths"] = cfg.block_lengths;
  j["trials_per_length"] = cfg.trials_per_length;
  nlohmann::ordered_json specs = nlohmann::ordered_json::array();
  for (const SourceSpec& s : cfg.source_specs) specs.push_back(to_json(s));
  j["source_specs"] = specs;
  j["train_fraction"] = cfg.train_fraction;
  j["seed"] = cfg.seed;
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (FeatureMethod m : cfg.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  nlohmann::ordered_json classifiers = nlohmann::ordered_json::array();
  for (Classifier c : cfg.classifiers) classifiers.push_back(to_string(c));
  j["classifiers"] = classifiers;
  j["mixing"] = to_string(cfg.mixing);
  j["sample_rate"] = cfg.sample_rate;
  j["contrast"] = to_string(cfg.contrast);
  j["max_iterations"] = cfg.max_iterations;
  j["tolerance"] = cfg.tolerance;
  j["ica_restarts"] = cfg.ica_restarts;
  j["svm_c"] = cfg.svm_c;
  j["knn_k"] = cfg.knn_k;
  j["max_condition"] = cfg.max_condition;
  return j;
}

// Field-for-field mirror of ExperimentConfig; absent fields keep defaults.
// An absent source_specs list means the default six-source roster.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg = default_experiment_config();
  if (j.contains("block_lengths"))
    cfg.block_lengths = j["block_lengths"].get<std::vector<int>>();
  if (j.contains("trials_per_length"))
    cfg.trials_per_length = j["trials_per_length"].get<int>();
  if (j.contains("source_specs")) {
    cfg.source_specs.clear();
    for (const auto& s : j["source_specs"])
      cfg.source_specs.push_back(source_spec_from_json(s));
  }
  if (j.contains("train_fraction"))
    cfg.train_fraction = j["train_fraction"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : j["methods"])
      cfg.methods.push_back(feature_method_from_string(m.get<std::string>()));
  }
  if (j.contains("classifiers")) {
    cfg.classifiers.clear();
    for (const auto& c : j["classifiers"])
      cfg.classifiers.push_back(classifier_from_string(c.get<std::string>()));
  }
  if (j.contains("mixing"))
    cfg.mixing = mixing_mode_from_string(j["mixing"].get<std::string>());
  if (j.contains("sample_rate")) cfg.sample_rate = j["sample_rate"].get<int>();
  if (j.contains("contrast"))
    cfg.contrast = contrast_from_string(j["contrast"].get<std::string>());
  if (j.contains("max_iterations"))
    cfg.max_iterations = j["max_iterations"].get<int>();
  if (j.contains("tolerance")) cfg.tolerance = j["tolerance"].get<double>();
  if (j.contains("ica_restarts"))
    cfg.ica_restarts = j["ica_restarts"].get<int>();
  if (j.contains("svm_c")) cfg.svm_c = j["svm_c"].get<double>();
  if (j.contains("knn_k")) cfg.knn_k = j["knn_k"].get<int>();
  if (j.contains("max_condition"))
    cfg.max_condition = j["max_condition"].get<double>();
  return cfg;
}

// -------------------------------------------------------------------------
// Report

struct CellResult {
  int block_length = 0;
  FeatureMethod method = FeatureMethod::kRmsPsd9;
  Classifier classifier = Classifier::kKnn;
  AccuracyReport accuracy;
  // Fraction of test trials in which EVERY drone channel was predicted
  // drone -- the detection-event view of the multi-drone case.
  double all_drones_detected_pct = 0.0;
};

struct SirResult {
  int block_length = 0;
  double mean_sir_db = 0.0;
  double min_abs_correlation = 0.0;  // worst matched |corr| over all trials
  int trials = 0;
  int converged = 0;
};

struct TrialFailure {
  int trial = 0;
  std::string stage;
  std::string message;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SirResult> sir;      // one per block length, config order
  std::vector<CellResult> cells;   // L x method x classifier, config order
  std::vector<int> train_trials;   // sorted
  std::vector<int> test_trials;    // sorted
  std::vector<TrialFailure> failures;
  bool degenerate_split = false;   // single-trial runs train and test alike
};

// Accuracy grid published for the original field-recording study, printed
// next to measured numbers for qualitative comparison.
struct ReferenceCell {
  double svm = 0.0;
  double knn = 0.0;
};

inline std::optional<ReferenceCell> published_reference(int block_length,
                                                        FeatureMethod method) {
  struct Row {
    int l;
    FeatureMethod m;
    ReferenceCell ref;
  };
  static const Row kTable[] = {
      {10000, FeatureMethod::kPsd9, {92.57, 97.9}},
      {10000, FeatureMethod::kRmsPsd9, {96.1, 99.1}},
      {10000, FeatureMethod::kMfcc12, {88.2, 97.4}},
      {7000, FeatureMethod::kPsd9, {91.0, 97.2}},
      {7000, FeatureMethod::kRmsPsd9, {94.9, 98.3}},
      {7000, FeatureMethod::kMfcc12, {87.6, 97.0}},
      {4000, FeatureMethod::kPsd9, {90.3, 96.7}},
      {4000, FeatureMethod::kRmsPsd9, {94.1, 98.0}},
      {4000, FeatureMethod::kMfcc12, {87.0, 96.7}},
      {1000, FeatureMethod::kPsd9, {89.7, 96.0}},
      {1000, FeatureMethod::kRmsPsd9, {93.3, 97.1}},
      {1000, FeatureMethod::kMfcc12, {86.8, 95.3}},
  };
  for (const Row& r : kTable) {
    if (r.l == block_length && r.m == method) return r.ref;
  }
  return std::nullopt;
}

// -------------------------------------------------------------------------
// Run

using ExperimentLogger = std::function<void(const std::string&)>;

namespace detail {

struct FeatureRow {
  int trial = 0;
  int length = 0;
  FeatureVector fv;
};

inline double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace detail

// Executes the full study: per trial, synthesize -> mix -> (separate per
// block length) -> align to truth for labels -> extract features; then split
// train/test at trial granularity and evaluate every configured
// method x classifier cell at every length.  A trial that throws is logged
// and skipped; more than 10% failed trials aborts the run.  Timing goes to
// the logger only, never into the report, which is reproducible
// byte-for-byte from (config, seed).
inline ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                       const ExperimentLogger& log = {}) {
  validate(cfg);
  const auto say = [&](const std::string& s) {
    if (log) log(s);
  };

  ExperimentReport report;
  report.config = cfg;

  const int n_sources = static_cast<int>(cfg.source_specs.size());
  const int lmax =
      *std::max_element(cfg.block_lengths.begin(), cfg.block_lengths.end());
  const int trials = cfg.trials_per_length;

  std::vector<detail::FeatureRow> rows;
  struct SirAccum {
    double sum = 0.0;
    double min_corr = 1.0;
    int n = 0;
    int converged = 0;
  };
  std::vector<SirAccum> sir_acc(cfg.block_lengths.size());
  std::vector<int> ok_trials;

  for (int t = 0; t < trials; ++t) {
    const auto t_start = std::chrono::steady_clock::now();
    std::string stage = "synthesize";
    try {
      std::vector<Signal> sources;
      for (int i = 0; i < n_sources; ++i) {
        Rng r(substream_seed(cfg.seed, "source", static_cast<std::uint64_t>(t),
                             static_cast<std::uint64_t>(i)));
        sources.push_back(synthesize(cfg.source_specs[static_cast<std::size_t>(i)],
                                     static_cast<std::size_t>(lmax),
                                     cfg.sample_rate, r));
      }

      stage = "mix";
      MixingModel model;
      if (cfg.mixing == MixingMode::kIdentity) {
        model.a = Eigen::MatrixXd::Identity(n_sources, n_sources);
      } else {
        Rng r(substream_seed(cfg.seed, "mixing", static_cast<std::uint64_t>(t)));
        model = random_mixing_model(n_sources, r, cfg.max_condition);
      }
      const MixedBlock block = mix(model, sources);

      for (std::size_t li = 0; li < cfg.block_lengths.size(); ++li) {
        const int l = cfg.block_lengths[li];
        const Eigen::MatrixXd truth = block.truth_sources->leftCols(l);
        const Eigen::MatrixXd x = block.x.leftCols(l);

        stage = "separate";
        Eigen::MatrixXd y;
        bool converged = false;
        int iterations = 0;
        if (cfg.mixing == MixingMode::kIdentity) {
          y = x;  // observation == sources; separation is a no-op
          converged = true;
        } else {
          FastICAConfig fcfg;
          fcfg.contrast = cfg.contrast;
          fcfg.max_iterations = cfg.max_iterations;
          fcfg.tolerance = cfg.tolerance;
          fcfg.seed = substream_seed(cfg.seed, "fastica",
                                     static_cast<std::uint64_t>(t),
                                     static_cast<std::uint64_t>(l));
          SeparationResult res = separate_best(x, fcfg, cfg.ica_restarts);
          y = std::move(res.y);
          converged = res.converged;
          iterations = res.iterations;
        }

        stage = "align";
        const AlignmentMap amap = align(y, truth);
        const Eigen::MatrixXd aligned = apply_alignment(amap, y);
        const double trial_sir = mean_sir_db(aligned, truth);
        SirAccum& acc = sir_acc[li];
        acc.sum += trial_sir;
        acc.n += 1;
        acc.converged += converged ? 1 : 0;
        for (double c : amap.correlations)
          acc.min_corr = std::min(acc.min_corr, c);

        // Channel labels come from truth alignment only; classifier output
        // never feeds back into labeling.
        std::vector<SourceLabel> channel_label(
            static_cast<std::size_t>(n_sources), SourceLabel::kDrone);
        for (std::size_t truth_row = 0; truth_row < amap.permutation.size();
             ++truth_row) {
          channel_label[amap.permutation[truth_row]] =
              block.truth_labels[truth_row];
        }

        stage = "features";
        for (int ch = 0; ch < n_sources; ++ch) {
          Signal sig;
          sig.sample_rate = cfg.sample_rate;
          sig.samples.assign(y.row(ch).begin(), y.row(ch).end());
          sig.label = channel_label[static_cast<std::size_t>(ch)];
          for (FeatureMethod m : cfg.methods) {
            detail::FeatureRow row;
            row.trial = t;
            row.length = l;
            row.fv = extract_features(sig, m);
            rows.push_back(std::move(row));
          }
        }

        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "[trial %d] L=%d: %s in %d iterations, SIR %.2f dB",
                      t, l, converged ? "converged" : "NOT converged",
                      iterations, trial_sir);
        say(buf);
      }
      ok_trials.push_back(t);
      char buf[96];
      std::snprintf(buf, sizeof(buf), "[trial %d] done in %.2f s", t,
                    detail::seconds_since(t_start));
      say(buf);
    } catch (const Error& e) {
      report.failures.push_back({t, stage, e.what()});
      say("[trial " + std::to_string(t) + "] FAILED at " + stage + ": " +
          e.what());
    }
  }

  if (static_cast<double>(report.failures.size()) >
      0.10 * static_cast<double>(trials)) {
    throw ExperimentError("experiment: " +
                          std::to_string(report.failures.size()) + " of " +
                          std::to_string(trials) +
                          " trials failed (budget is 10%)");
  }
  if (ok_trials.empty())
    throw ExperimentError("experiment: no successful trials");

  for (std::size_t li = 0; li < cfg.block_lengths.size(); ++li) {
    const SirAccum& acc = sir_acc[li];
    SirResult s;
    s.block_length = cfg.block_lengths[li];
    s.mean_sir_db = acc.n > 0 ? acc.sum / acc.n : 0.0;
    s.min_abs_correlation = acc.min_corr;
    s.trials = acc.n;
    s.converged = acc.converged;
    report.sir.push_back(s);
  }

  // Trial-granularity split: shuffle the successful trials once and cut.
  std::vector<int> order = ok_trials;
  Rng split_rng(substream_seed(cfg.seed, "split"));
  split_rng.shuffle(order);
  const auto n_ok = static_cast<int>(order.size());
  std::vector<int> train_ids, test_ids;
  if (n_ok == 1) {
    // Single-trial runs cannot be split; train and evaluate on the same
    // trial and say so in the report.
    report.degenerate_split = true;
    train_ids = order;
    test_ids = order;
  } else {
    int n_train = static_cast<int>(
        std::lround(cfg.train_fraction * static_cast<double>(n_ok)));
    n_train = std::clamp(n_train, 1, n_ok - 1);
    train_ids.assign(order.begin(), order.begin() + n_train);
    test_ids.assign(order.begin() + n_train, order.end());
  }
  std::sort(train_ids.begin(), train_ids.end());
  std::sort(test_ids.begin(), test_ids.end());
  report.train_trials = train_ids;
  report.test_trials = test_ids;
  const std::set<int> train_set(train_ids.begin(), train_ids.end());

  const auto eval_start = std::chrono::steady_clock::now();
  for (int l : cfg.block_lengths) {
    for (FeatureMethod m : cfg.methods) {
      std::vector<FeatureVector> train_fv, test_fv;
      std::vector<int> test_trial_of;  // parallel to test_fv
      for (const detail::FeatureRow& row : rows) {
        if (row.length != l || row.fv.method != m) continue;
        if (train_set.count(row.trial)) {
          train_fv.push_back(row.fv);
        } else {
          test_fv.push_back(row.fv);
          test_trial_of.push_back(row.trial);
        }
      }
      if (report.degenerate_split) {
        test_fv = train_fv;
        test_trial_of.assign(test_fv.size(), train_ids.front());
      }

      for (Classifier cls : cfg.classifiers) {
        std::vector<int> preds, labels;
        preds.reserve(test_fv.size());
        if (cls == Classifier::kSvm) {
          const SVMModel model = svm_train(train_fv, cfg.svm_c);
          for (const FeatureVector& fv : test_fv)
            preds.push_back(svm_predict(model, fv).label);
        } else {
          const KNNModel model = knn_train(train_fv, cfg.knn_k);
          for (const FeatureVector& fv : test_fv)
            preds.push_back(knn_predict(model, fv));
        }
        for (const FeatureVector& fv : test_fv)
          labels.push_back(*fv.drone_label ? +1 : -1);

        CellResult cell;
        cell.block_length = l;
        cell.method = m;
        cell.classifier = cls;
        cell.accuracy = accuracy(preds, labels);

        int detected = 0, trials_with_drones = 0;
        for (int trial : test_ids) {
          bool any_drone = false, all_detected = true;
          for (std::size_t i = 0; i < test_fv.size(); ++i) {
            if (test_trial_of[i] != trial) continue;
            if (labels[i] > 0) {
              any_drone = true;
              if (preds[i] <= 0) all_detected = false;
            }
          }
          if (any_drone) {
            ++trials_with_drones;
            if (all_detected) ++detected;
          }
        }
        cell.all_drones_detected_pct =
            trials_with_drones > 0
                ? 100.0 * detected / trials_with_drones
                : 100.0;
        report.cells.push_back(cell);
      }
    }
  }
  {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "classification stage done in %.2f s",
                  detail::seconds_since(eval_start));
    say(buf);
  }
  return report;
}

// -------------------------------------------------------------------------
// Rendering

inline nlohmann::ordered_json to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["config"] = to_json(r.config);
  nlohmann::ordered_json sir = nlohmann::ordered_json::array();
  for (const SirResult& s : r.sir) {
    nlohmann::ordered_json row;
    row["block_length"] = s.block_length;
    row["mean_sir_db"] = s.mean_sir_db;
    row["min_abs_correlation"] = s.min_abs_correlation;
    row["trials"] = s.trials;
    row["converged"] = s.converged;
    sir.push_back(row);
  }
  j["sir"] = sir;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const CellResult& c : r.cells) {
    nlohmann::ordered_json row;
    row["block_length"] = c.block_length;
    row["method"] = to_string(c.method);
    row["classifier"] = to_string(c.classifier);
    row["accuracy_pct"] = c.accuracy.percent;
    row["tp"] = c.accuracy.true_positive;
    row["fp"] = c.accuracy.false_positive;
    row["tn"] = c.accuracy.true_negative;
    row["fn"] = c.accuracy.false_negative;
    row["all_drones_detected_pct"] = c.all_drones_detected_pct;
    cells.push_back(row);
  }
  j["cells"] = cells;
  j["train_trials"] = r.train_trials;
  j["test_trials"] = r.test_trials;
  j["degenerate_split"] = r.degenerate_split;
  nlohmann::ordered_json failures = nlohmann::ordered_json::array();
  for (const TrialFailure& f : r.failures) {
    nlohmann::ordered_json row;
    row["trial"] = f.trial;
    row["stage"] = f.stage;
    row["message"] = f.message;
    failures.push_back(row);
  }
  j["failures"] = failures;
  return j;
}

inline ExperimentReport report_from_json(const nlohmann::json& j) {
  ExperimentReport r;
  r.config = experiment_config_from_json(j.at("config"));
  for (const auto& row : j.at("sir")) {
    SirResult s;
    s.block_length = row.at("block_length").get<int>();
    s.mean_sir_db = row.at("mean_sir_db").get<double>();
    s.min_abs_correlation = row.at("min_abs_correlation").get<double>();
    s.trials = row.at("trials").get<int>();
    s.converged = row.at("converged").get<int>();
    r.sir.push_back(s);
  }
  for (const auto& row : j.at("cells")) {
    CellResult c;
    c.block_length = row.at("block_length").get<int>();
    c.method = feature_method_from_string(row.at("method").get<std::string>());
    c.classifier =
        classifier_from_string(row.at("classifier").get<std::string>());
    c.accuracy.percent = row.at("accuracy_pct").get<double>();
    c.accuracy.true_positive = row.at("tp").get<int>();
    c.accuracy.false_positive = row.at("fp").get<int>();
    c.accuracy.true_negative = row.at("tn").get<int>();
    c.accuracy.false_negative = row.at("fn").get<int>();
    c.all_drones_detected_pct = row.at("all_drones_detected_pct").get<double>();
    r.cells.push_back(c);
  }
  r.train_trials = j.at("train_trials").get<std::vector<int>>();
  r.test_trials = j.at("test_trials").get<std::vector<int>>();
  r.degenerate_split = j.value("degenerate_split", false);
  for (const auto& row : j.at("failures")) {
    TrialFailure f;
    f.trial = row.at("trial").get<int>();
    f.stage = row.at("stage").get<std::string>();
    f.message = row.at("message").get<std::string>();
    r.failures.push_back(f);
  }
  return r;
}

// One data row per configured (L, method, classifier) cell.
inline std::string render_report_csv(const ExperimentReport& r) {
  std::string out =
      "block_length,method,classifier,accuracy_pct,tp,fp,tn,fn,"
      "all_drones_detected_pct\n";
  char buf[160];
  for (const CellResult& c : r.cells) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%s,%.4f,%d,%d,%d,%d,%.4f\n",
                  c.block_length, std::string(to_string(c.method)).c_str(),
                  std::string(to_string(c.classifier)).c_str(),
                  c.accuracy.percent, c.accuracy.true_positive,
                  c.accuracy.false_positive, c.accuracy.true_negative,
                  c.accuracy.false_negative, c.all_drones_detected_pct);
    out += buf;
  }
  return out;
}

namespace detail {

inline const char* method_display(FeatureMethod m) {
  switch (m) {
    case FeatureMethod::kPsd9: return "PSD";
    case FeatureMethod::kRmsPsd9: return "RMS PSD";
    case FeatureMethod::kMfcc12: return "MFCC";
  }
  return "?";
}

}  // namespace detail

// Human-readable grid: rows are L x method, columns the measured SVM/KNN
// accuracies followed by the published reference values where available.
inline std::string render_report_text(const ExperimentReport& r) {
  std::string out;
  char buf[256];
  int drones = 0, others = 0;
  for (const SourceSpec& s : r.config.source_specs)
    (is_drone(s.label) ? drones : others)++;

  out += "acousep experiment report\n";
  std::snprintf(buf, sizeof(buf),
                "seed %llu | %d trials/length | %d sources (%d drone, %d "
                "other) | train fraction %.2f | mixing %s\n",
                static_cast<unsigned long long>(r.config.seed),
                r.config.trials_per_length,
                static_cast<int>(r.config.source_specs.size()), drones, others,
                r.config.train_fraction,
                std::string(to_string(r.config.mixing)).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "contrast %s | tolerance %g | max %d iterations | rate %d Hz\n\n",
                std::string(to_string(r.config.contrast)).c_str(),
                r.config.tolerance, r.config.max_iterations,
                r.config.sample_rate);
  out += buf;

  out += "Classification accuracy (%)\n";
  out +=
      "Block size   Method     SVM       KNN    | ref SVM   ref KNN\n"
      "-----------------------------------------+------------------\n";
  const bool has_svm =
      std::find(r.config.classifiers.begin(), r.config.classifiers.end(),
                Classifier::kSvm) != r.config.classifiers.end();
  const bool has_knn =
      std::find(r.config.classifiers.begin(), r.config.classifiers.end(),
                Classifier::kKnn) != r.config.classifiers.end();
  for (int l : r.config.block_lengths) {
    bool first = true;
    for (FeatureMethod m : r.config.methods) {
      std::string svm_txt = "    -", knn_txt = "    -";
      for (const CellResult& c : r.cells) {
        if (c.block_length != l || c.method != m) continue;
        char num[32];
        std::snprintf(num, sizeof(num), "%8.2f", c.accuracy.percent);
        if (c.classifier == Classifier::kSvm && has_svm) svm_txt = num;
        if (c.classifier == Classifier::kKnn && has_knn) knn_txt = num;
      }
      std::string ref_svm = "      -", ref_knn = "      -";
      if (const auto ref = published_reference(l, m)) {
        char num[32];
        std::snprintf(num, sizeof(num), "%7.2f", ref->svm);
        ref_svm = num;
        std::snprintf(num, sizeof(num), "%7.2f", ref->knn);
        ref_knn = num;
      }
      char head[32];
      if (first) {
        std::snprintf(head, sizeof(head), "L=%-8d", l);
        first = false;
      } else {
        std::snprintf(head, sizeof(head), "%-10s", "");
      }
      std::snprintf(buf, sizeof(buf), "%s   %-8s %8s  %8s | %s   %s\n", head,
                    detail::method_display(m), svm_txt.c_str(),
                    knn_txt.c_str(), ref_svm.c_str(), ref_knn.c_str());
      out += buf;
    }
  }
  out +=
      "(ref columns: published reference results on field recordings, for "
      "qualitative comparison)\n\n";

  out += "Separation quality\n";
  for (const SirResult& s : r.sir) {
    std::snprintf(buf, sizeof(buf),
                  "L=%-8d mean aligned SIR %7.2f dB | min |corr| %.4f | "
                  "%d/%d converged\n",
                  s.block_length, s.mean_sir_db, s.min_abs_correlation,
                  s.converged, s.trials);
    out += buf;
  }

  std::snprintf(buf, sizeof(buf),
                "\nAll-drones-detected rate (RMS PSD + KNN, L=%d): ",
                r.config.block_lengths.back());
  out += buf;
  bool found = false;
  for (const CellResult& c : r.cells) {
    if (c.block_length == r.config.block_lengths.back() &&
        c.method == FeatureMethod::kRmsPsd9 &&
        c.classifier == Classifier::kKnn) {
      std::snprintf(buf, sizeof(buf), "%.1f%%\n", c.all_drones_detected_pct);
      out += buf;
      found = true;
      break;
    }
  }
  if (!found) out += "-\n";

  std::snprintf(buf, sizeof(buf), "\nFailed trials: %d of %d\n",
                static_cast<int>(r.failures.size()),
                r.config.trials_per_length);
  out += buf;
  out += "Train trials:";
  for (int t : r.train_trials) out += " " + std::to_string(t);
  out += "\nTest trials:";
  for (int t : r.test_trials) out += " " + std::to_string(t);
  out += "\n";
  if (r.degenerate_split)
    out += "NOTE: single-trial run; train and test sets coincide.\n";
  return out;
}

}  // namespace acousep

#endif  // ACOUSEP_EXPERIMENT_HPP_
