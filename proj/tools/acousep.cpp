// tools/acousep.cpp
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
//
// Command-line front end.  Exit codes: 0 success, 1 usage error (unknown
// subcommand, bad flags), 2 processing error with a one-line JSON
// diagnostic on stderr.  Every write lands inside --output-dir.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acousep/error.hpp"
#include "acousep/experiment.hpp"
#include "acousep/fastica.hpp"
#include "acousep/features.hpp"
#include "acousep/knn.hpp"
#include "acousep/metrics.hpp"
#include "acousep/mixing.hpp"
#include "acousep/rng.hpp"
#include "acousep/signal.hpp"
#include "acousep/svm.hpp"
#include "acousep/synth.hpp"
#include "acousep/wav.hpp"

namespace fs = std::filesystem;

namespace {

// All outputs are <output_dir>/<name>; names must be bare file names so no
// subcommand can write outside the chosen directory.
fs::path out_path(const fs::path& dir, const std::string& name) {
  const fs::path p(name);
  if (p.is_absolute() || p.has_parent_path())
    throw acousep::ParameterError("output name '" + name +
                                  "' must be a bare file name");
  return dir / p;
}

fs::path prepare_output_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec)
    throw acousep::ParameterError("cannot create output directory '" + dir +
                                  "': " + ec.message());
  return p;
}

// "drone_12" -> drone; "bird" -> bird.  Used to label WAVs by file name.
std::optional<acousep::SourceLabel> label_from_stem(std::string stem) {
  const auto us = stem.find_last_of('_');
  if (us != std::string::npos && us + 1 < stem.size()) {
    bool digits = true;
    for (std::size_t i = us + 1; i < stem.size(); ++i)
      digits = digits && (std::isdigit(static_cast<unsigned char>(stem[i])) != 0);
    if (digits) stem.resize(us);
  }
  try {
    return acousep::source_label_from_string(stem);
  } catch (const acousep::Error&) {
    return std::nullopt;
  }
}

std::vector<acousep::FeatureVector> read_features_any(const fs::path& path) {
  if (path.extension() == ".json") return acousep::read_features_json(path);
  return acousep::read_features_csv(path);
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::vector<std::string> classes{"drone"};
  int count = 1;
  int length = 22050;
  int rate = 22050;
  std::uint64_t seed = 0;
  double fundamental = 0.0;  // 0 = class default; applies to drones
  std::string output_dir = ".";
};

void run_synth(const SynthArgs& a) {
  const fs::path dir = prepare_output_dir(a.output_dir);
  for (std::size_t ci = 0; ci < a.classes.size(); ++ci) {
    acousep::SourceSpec spec = acousep::default_spec(
        acousep::source_label_from_string(a.classes[ci]));
    if (a.fundamental > 0.0 && acousep::is_drone(spec.label))
      spec.fundamental_hz = a.fundamental;
    for (int i = 0; i < a.count; ++i) {
      acousep::Rng rng(acousep::substream_seed(
          a.seed, "synth", static_cast<std::uint64_t>(ci),
          static_cast<std::uint64_t>(i)));
      const acousep::Signal s = acousep::synthesize(
          spec, static_cast<std::size_t>(a.length), a.rate, rng);
      const fs::path p = out_path(
          dir, a.classes[ci] + "_" + std::to_string(i) + ".wav");
      acousep::store_wav_pcm16(p, s);
      std::cout << "wrote " << p.string() << " (" << a.length << " samples @ "
                << a.rate << " Hz)\n";
    }
  }
}

// ---------------------------------------------------------------------------
// mix

struct MixArgs {
  std::vector<std::string> inputs;
  std::string labels;  // comma list overriding stem inference
  std::string name = "mixture";
  std::uint64_t seed = 0;
  double max_condition = 100.0;
  bool identity = false;
  std::string output_dir = ".";
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    if (comma == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

void run_mix(const MixArgs& a) {
  const fs::path dir = prepare_output_dir(a.output_dir);
  std::vector<acousep::Signal> sources;
  for (const std::string& in : a.inputs) {
    acousep::Signal s = acousep::load_wav_mono(in);
    s.label = label_from_stem(fs::path(in).stem().string());
    sources.push_back(std::move(s));
  }
  if (!a.labels.empty()) {
    const std::vector<std::string> names = split_csv(a.labels);
    if (names.size() != sources.size())
      throw acousep::ParameterError(
          "--labels lists " + std::to_string(names.size()) + " names for " +
          std::to_string(sources.size()) + " inputs");
    for (std::size_t i = 0; i < names.size(); ++i)
      sources[i].label = acousep::source_label_from_string(names[i]);
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (!sources[i].label)
      throw acousep::ParameterError(
          "cannot infer a class label from '" + a.inputs[i] +
          "'; pass --labels");
  }

  acousep::MixingModel model;
  const int n = static_cast<int>(sources.size());
  if (a.identity) {
    model.a = Eigen::MatrixXd::Identity(n, n);
  } else {
    acousep::Rng rng(acousep::substream_seed(a.seed, "mixing"));
    model = acousep::random_mixing_model(n, rng, a.max_condition);
  }
  const acousep::MixedBlock block = acousep::mix(model, sources);
  const fs::path wav = out_path(dir, a.name + ".wav");
  const fs::path sidecar = out_path(dir, a.name + ".json");
  acousep::save_mixed_block(block, wav, sidecar);
  char cond[32];
  std::snprintf(cond, sizeof(cond), "%.2f", model.condition_number());
  std::cout << "wrote " << wav.string() << " + " << sidecar.string() << " ("
            << n << " sources, condition " << cond << ")\n";
}

// ---------------------------------------------------------------------------
// separate

struct SeparateArgs {
  std::string input;
  std::string sidecar;  // empty = look for <input>.json
  std::string contrast = "tanh";
  int max_iterations = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  std::string prefix = "source";
  std::string output_dir = ".";
};

void run_separate(const SeparateArgs& a) {
  const fs::path dir = prepare_output_dir(a.output_dir);
  std::optional<fs::path> sidecar;
  if (!a.sidecar.empty()) {
    sidecar = fs::path(a.sidecar);
  } else {
    fs::path guess = fs::path(a.input);
    guess.replace_extension(".json");
    if (fs::exists(guess)) sidecar = guess;
  }
  const acousep::MixedBlock block = acousep::load_mixed_block(a.input, sidecar);

  acousep::FastICAConfig cfg;
  cfg.contrast = acousep::contrast_from_string(a.contrast);
  cfg.max_iterations = a.max_iterations;
  cfg.tolerance = a.tolerance;
  cfg.seed = acousep::substream_seed(a.seed, "fastica");
  const acousep::SeparationResult res = acousep::separate(block.x, cfg);

  nlohmann::ordered_json diag;
  diag["input"] = a.input;
  diag["microphones"] = block.x.rows();
  diag["samples"] = block.x.cols();
  diag["sample_rate"] = block.sample_rate;
  diag["contrast"] = std::string(acousep::to_string(cfg.contrast));
  diag["tolerance"] = cfg.tolerance;
  diag["iterations"] = res.iterations;
  diag["converged"] = res.converged;
  {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < res.unmixing.rows(); ++r) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (Eigen::Index c = 0; c < res.unmixing.cols(); ++c)
        row.push_back(res.unmixing(r, c));
      rows.push_back(row);
    }
    diag["unmixing"] = rows;
  }

  std::vector<std::string> channel_name(
      static_cast<std::size_t>(res.y.rows()));
  for (std::size_t ch = 0; ch < channel_name.size(); ++ch)
    channel_name[ch] = a.prefix + "_" + std::to_string(ch);

  if (block.truth_sources) {
    const acousep::AlignmentMap amap =
        acousep::align(res.y, *block.truth_sources);
    const Eigen::MatrixXd aligned = acousep::apply_alignment(amap, res.y);
    nlohmann::ordered_json al;
    al["permutation"] = amap.permutation;
    al["signs"] = amap.signs;
    al["scales"] = amap.scales;
    al["correlations"] = amap.correlations;
    nlohmann::ordered_json sirs = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < aligned.rows(); ++r) {
      std::vector<double> av(aligned.row(r).begin(), aligned.row(r).end());
      std::vector<double> tv(block.truth_sources->row(r).begin(),
                             block.truth_sources->row(r).end());
      sirs.push_back(acousep::sir_db(av, tv));
    }
    al["sir_db"] = sirs;
    al["mean_sir_db"] = acousep::mean_sir_db(aligned, *block.truth_sources);
    if (!block.truth_labels.empty()) {
      nlohmann::ordered_json labels = nlohmann::ordered_json::array();
      for (std::size_t t = 0; t < amap.permutation.size(); ++t) {
        labels.push_back(std::string(
            acousep::to_string(block.truth_labels[t])));
        channel_name[amap.permutation[t]] =
            a.prefix + "_" + std::to_string(amap.permutation[t]) + "_" +
            std::string(acousep::to_string(block.truth_labels[t]));
      }
      al["truth_labels"] = labels;
    }
    diag["alignment"] = al;
  }

  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (Eigen::Index ch = 0; ch < res.y.rows(); ++ch) {
    const fs::path p = out_path(
        dir, channel_name[static_cast<std::size_t>(ch)] + ".wav");
    acousep::store_wav_float32(p, res.y.row(ch), block.sample_rate);
    files.push_back(p.filename().string());
    std::cout << "wrote " << p.string() << "\n";
  }
  diag["files"] = files;

  const fs::path report = out_path(dir, a.prefix + "_separation.json");
  std::ofstream out(report, std::ios::trunc);
  if (!out)
    throw acousep::FormatError("cannot open '" + report.string() +
                               "' for writing");
  out << diag.dump(2) << '\n';
  std::cout << "wrote " << report.string() << " ("
            << (res.converged ? "converged" : "did not converge") << " in "
            << res.iterations << " iterations)\n";
}

// ---------------------------------------------------------------------------
// features

struct FeaturesArgs {
  std::vector<std::string> inputs;
  std::string method = "RMSPSD9";
  std::string label;  // override for every input
  std::string format = "csv";
  std::string name = "features";
  std::string output_dir = ".";
};

void run_features(const FeaturesArgs& a) {
  const fs::path dir = prepare_output_dir(a.output_dir);
  const acousep::FeatureMethod method =
      acousep::feature_method_from_string(a.method);
  std::vector<acousep::FeatureVector> rows;
  for (const std::string& in : a.inputs) {
    acousep::Signal s = acousep::load_wav_mono(in);
    if (!a.label.empty())
      s.label = acousep::source_label_from_string(a.label);
    else
      s.label = label_from_stem(fs::path(in).stem().string());
    rows.push_back(acousep::extract_features(s, method));
  }
  fs::path p;
  if (a.format == "csv") {
    p = out_path(dir, a.name + ".csv");
    acousep::write_features_csv(p, rows);
  } else if (a.format == "json") {
    p = out_path(dir, a.name + ".json");
    acousep::write_features_json(p, rows);
  } else {
    throw acousep::ParameterError("unknown format '" + a.format +
                                  "' (csv or json)");
  }
  std::cout << "wrote " << p.string() << " (" << rows.size() << " rows, "
            << acousep::to_string(method) << ")\n";
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string features;
  std::string classifier = "SVM";
  double c = 1.0;
  int k = 5;
  std::string name = "model";
  std::string output_dir = ".";
};

void run_train(const TrainArgs& a) {
  const fs::path dir = prepare_output_dir(a.output_dir);
  const std::vector<acousep::FeatureVector> rows =
      read_features_any(a.features);
  const acousep::Classifier cls = acousep::classifier_from_string(a.classifier);
  const fs::path p = out_path(dir, a.name + ".json");
  if (cls == acousep::Classifier::kSvm) {
    acousep::save_svm(acousep::svm_train(rows, a.c), p);
  } else {
    acousep::save_knn(acousep::knn_train(rows, a.k), p);
  }
  std::cout << "wrote " << p.string() << " (" << acousep::to_string(cls)
            << " on " << rows.size() << " rows)\n";
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  std::string model;
  std::string features;
  std::string name = "predictions";
  std::string output_dir = ".";
};

void run_predict(const PredictArgs& a) {
  const fs::path dir = prepare_output_dir(a.output_dir);
  const std::vector<acousep::FeatureVector> rows =
      read_features_any(a.features);
  if (rows.empty()) throw acousep::ParameterError("predict: no feature rows");

  std::ifstream in(a.model);
  if (!in) throw acousep::FormatError("cannot open '" + a.model + "'");
  nlohmann::json mj;
  try {
    in >> mj;
  } catch (const nlohmann::json::exception& e) {
    throw acousep::FormatError("model '" + a.model +
                               "' is not valid JSON: " + e.what());
  }
  const std::string type = mj.value("type", "");

  std::vector<int> preds;
  std::vector<double> decisions;
  if (type == "svm") {
    const acousep::SVMModel model = acousep::svm_from_json(mj);
    for (const acousep::FeatureVector& fv : rows) {
      const acousep::SVMPrediction p = acousep::svm_predict(model, fv);
      preds.push_back(p.label);
      decisions.push_back(p.decision_value);
    }
  } else if (type == "knn") {
    const acousep::KNNModel model = acousep::knn_from_json(mj);
    for (const acousep::FeatureVector& fv : rows) {
      preds.push_back(acousep::knn_predict(model, fv));
      decisions.push_back(static_cast<double>(preds.back()));
    }
  } else {
    throw acousep::FormatError("model '" + a.model +
                               "' has unknown type '" + type + "'");
  }

  const fs::path p = out_path(dir, a.name + ".csv");
  std::ofstream out(p, std::ios::trunc);
  if (!out)
    throw acousep::FormatError("cannot open '" + p.string() + "' for writing");
  out << "index,label,predicted,decision_value\n";
  char buf[96];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%s,%d,%.17g\n", i,
                  rows[i].label_text().c_str(), preds[i], decisions[i]);
    out << buf;
  }
  out.close();

  int labeled = 0, correct = 0, predicted_drone = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (preds[i] > 0) ++predicted_drone;
    if (rows[i].drone_label) {
      ++labeled;
      const int truth = *rows[i].drone_label ? +1 : -1;
      if (truth == preds[i]) ++correct;
    }
  }
  std::cout << "wrote " << p.string() << " (" << rows.size() << " rows, "
            << predicted_drone << " predicted drone)\n";
  if (labeled > 0) {
    char acc[64];
    std::snprintf(acc, sizeof(acc), "accuracy %.2f%% on %d labeled rows\n",
                  100.0 * correct / labeled, labeled);
    std::cout << acc;
  }
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
  std::string config;  // JSON file; empty = preset
  std::string preset = "default";
  int trials = -1;          // -1 = keep preset/config value
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string mixing;       // empty = keep
  std::string name = "report";
  bool quiet = false;
  std::string output_dir = ".";
};

void run_experiment_cmd(const ExperimentArgs& a) {
  const fs::path dir = prepare_output_dir(a.output_dir);
  acousep::ExperimentConfig cfg;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw acousep::FormatError("cannot open '" + a.config + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw acousep::FormatError("config '" + a.config +
                                 "' is not valid JSON: " + e.what());
    }
    cfg = acousep::experiment_config_from_json(j);
  } else if (a.preset == "default") {
    cfg = acousep::default_experiment_config();
  } else if (a.preset == "multi-drone") {
    cfg = acousep::multi_drone_experiment_config();
  } else {
    throw acousep::ParameterError("unknown preset '" + a.preset +
                                  "' (default or multi-drone)");
  }
  if (a.trials > 0) cfg.trials_per_length = a.trials;
  if (a.seed_set) cfg.seed = a.seed;
  if (!a.mixing.empty()) cfg.mixing = acousep::mixing_mode_from_string(a.mixing);

  acousep::ExperimentLogger log;
  if (!a.quiet)
    log = [](const std::string& line) { std::cerr << line << "\n"; };
  const acousep::ExperimentReport report = acousep::run_experiment(cfg, log);

  const fs::path json_path = out_path(dir, a.name + ".json");
  const fs::path csv_path = out_path(dir, a.name + ".csv");
  const fs::path txt_path = out_path(dir, a.name + ".txt");
  {
    std::ofstream out(json_path, std::ios::trunc);
    if (!out)
      throw acousep::FormatError("cannot open '" + json_path.string() +
                                 "' for writing");
    out << acousep::to_json(report).dump(2) << '\n';
  }
  {
    std::ofstream out(csv_path, std::ios::trunc);
    if (!out)
      throw acousep::FormatError("cannot open '" + csv_path.string() +
                                 "' for writing");
    out << acousep::render_report_csv(report);
  }
  const std::string text = acousep::render_report_text(report);
  {
    std::ofstream out(txt_path, std::ios::trunc);
    if (!out)
      throw acousep::FormatError("cannot open '" + txt_path.string() +
                                 "' for writing");
    out << text;
  }
  std::cout << text;
  std::cout << "wrote " << json_path.string() << ", " << csv_path.string()
            << ", " << txt_path.string() << "\n";
}

// ---------------------------------------------------------------------------

const char* error_kind(const acousep::Error& e) {
  if (dynamic_cast<const acousep::ParameterError*>(&e)) return "parameter";
  if (dynamic_cast<const acousep::FormatError*>(&e)) return "format";
  if (dynamic_cast<const acousep::DegeneracyError*>(&e)) return "degeneracy";
  if (dynamic_cast<const acousep::ConfigurationError*>(&e)) return "configuration";
  if (dynamic_cast<const acousep::TrainingError*>(&e)) return "training";
  if (dynamic_cast<const acousep::ExperimentError*>(&e)) return "experiment";
  return "error";
}

int fail(const char* kind, const char* what) {
  nlohmann::ordered_json diag;
  diag["error"] = kind;
  diag["message"] = what;
  std::cerr << diag.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acousep: separate and detect drone sources in microphone mixtures"};
  app.set_version_flag("--version", "acousep 0.1.0");
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* c_synth =
      app.add_subcommand("synth", "synthesize labeled source recordings");
  c_synth->add_option("--classes", synth.classes,
                      "source classes (drone aeroplane bird wind rain thunder)")
      ->delimiter(',');
  c_synth->add_option("--count", synth.count, "files per class")
      ->check(CLI::PositiveNumber);
  c_synth->add_option("--length", synth.length, "samples per file")
      ->check(CLI::PositiveNumber);
  c_synth->add_option("--rate", synth.rate, "sample rate in Hz")
      ->check(CLI::PositiveNumber);
  c_synth->add_option("--seed", synth.seed, "random seed");
  c_synth->add_option("--fundamental", synth.fundamental,
                      "drone rotor fundamental in Hz (0 = class default)");
  c_synth->add_option("--output-dir", synth.output_dir, "output directory");
  c_synth->callback([&] { run_synth(synth); });

  MixArgs mixa;
  CLI::App* c_mix =
      app.add_subcommand("mix", "mix mono sources through a random matrix");
  c_mix->add_option("inputs", mixa.inputs, "mono source WAVs")
      ->required()
      ->expected(-2);
  c_mix->add_option("--labels", mixa.labels,
                    "comma-separated class labels overriding file names");
  c_mix->add_option("--name", mixa.name, "output base name");
  c_mix->add_option("--seed", mixa.seed, "random seed");
  c_mix->add_option("--max-condition", mixa.max_condition,
                    "condition-number bound for the mixing matrix");
  c_mix->add_flag("--identity", mixa.identity, "use the identity matrix");
  c_mix->add_option("--output-dir", mixa.output_dir, "output directory");
  c_mix->callback([&] { run_mix(mixa); });

  SeparateArgs sep;
  CLI::App* c_sep =
      app.add_subcommand("separate", "unmix a recording with FastICA");
  c_sep->add_option("input", sep.input, "multichannel mixture WAV")->required();
  c_sep->add_option("--sidecar", sep.sidecar,
                    "ground-truth sidecar JSON (default: <input>.json if present)");
  c_sep->add_option("--contrast", sep.contrast, "tanh, gauss, or cubic");
  c_sep->add_option("--max-iterations", sep.max_iterations, "iteration cap")
      ->check(CLI::PositiveNumber);
  c_sep->add_option("--tolerance", sep.tolerance, "convergence tolerance");
  c_sep->add_option("--seed", sep.seed, "random seed");
  c_sep->add_option("--prefix", sep.prefix, "output file prefix");
  c_sep->add_option("--output-dir", sep.output_dir, "output directory");
  c_sep->callback([&] { run_separate(sep); });

  FeaturesArgs feat;
  CLI::App* c_feat =
      app.add_subcommand("features", "extract feature vectors from WAVs");
  c_feat->add_option("inputs", feat.inputs, "mono WAV files")
      ->required()
      ->expected(-1);
  c_feat->add_option("--method", feat.method, "PSD9, RMSPSD9, or MFCC12");
  c_feat->add_option("--label", feat.label,
                     "class label applied to every input (default: from file name)");
  c_feat->add_option("--format", feat.format, "csv or json");
  c_feat->add_option("--name", feat.name, "output base name");
  c_feat->add_option("--output-dir", feat.output_dir, "output directory");
  c_feat->callback([&] { run_features(feat); });

  TrainArgs train;
  CLI::App* c_train =
      app.add_subcommand("train", "train a drone/non-drone classifier");
  c_train->add_option("--features", train.features, "feature CSV or JSON")
      ->required();
  c_train->add_option("--classifier", train.classifier, "SVM or KNN");
  c_train->add_option("--c", train.c, "SVM regularization C");
  c_train->add_option("--k", train.k, "KNN neighbor count (odd)");
  c_train->add_option("--name", train.name, "output base name");
  c_train->add_option("--output-dir", train.output_dir, "output directory");
  c_train->callback([&] { run_train(train); });

  PredictArgs pred;
  CLI::App* c_pred =
      app.add_subcommand("predict", "classify feature vectors with a model");
  c_pred->add_option("--model", pred.model, "model JSON from train")->required();
  c_pred->add_option("--features", pred.features, "feature CSV or JSON")
      ->required();
  c_pred->add_option("--name", pred.name, "output base name");
  c_pred->add_option("--output-dir", pred.output_dir, "output directory");
  c_pred->callback([&] { run_predict(pred); });

  ExperimentArgs exp;
  CLI::App* c_exp =
      app.add_subcommand("experiment", "run the full synthetic study");
  c_exp->add_option("--config", exp.config, "experiment config JSON");
  c_exp->add_option("--preset", exp.preset, "default or multi-drone");
  c_exp->add_option("--trials", exp.trials, "override trials per length");
  c_exp->add_option("--seed", exp.seed, "override seed")
      ->trigger_on_parse()
      ->each([&](const std::string&) { exp.seed_set = true; });
  c_exp->add_option("--mixing", exp.mixing, "random or identity");
  c_exp->add_option("--name", exp.name, "report base name");
  c_exp->add_flag("--quiet", exp.quiet, "suppress progress on stderr");
  c_exp->add_option("--output-dir", exp.output_dir, "output directory");
  c_exp->callback([&] { run_experiment_cmd(exp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const acousep::Error& e) {
    return fail(error_kind(e), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
