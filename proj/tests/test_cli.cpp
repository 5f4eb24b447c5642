// tests/test_cli.cpp
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
// End-to-end checks of the acousep command-line tool: exit codes, the
// one-line JSON diagnostic contract on stderr, seed determinism of every
// artifact, and a full synth -> mix -> separate -> features -> train ->
// predict pipeline driven purely through the binary.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

#ifndef ACOUSEP_CLI_PATH
#error "ACOUSEP_CLI_PATH must point at the built acousep binary"
#endif

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with `args` appended, from `dir` as working directory,
// capturing stdout/stderr via temp files.
CommandResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out_file = dir / "cli_stdout.txt";
  const fs::path err_file = dir / "cli_stderr.txt";
  const std::string cmd = "cd '" + dir.string() + "' && '" +
                          ACOUSEP_CLI_PATH + "' " + args + " > '" +
                          out_file.string() + "' 2> '" + err_file.string() +
                          "'";
  const int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  fs::remove(out_file);
  fs::remove(err_file);
  return r;
}

// Scratch directory unique to this process, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("acousep_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

// Sorted list of regular-file names directly inside `dir`.
std::vector<std::string> file_names(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) names.push_back(entry.path().filename());
  std::sort(names.begin(), names.end());
  return names;
}

void require_identical_trees(const fs::path& a, const fs::path& b) {
  const std::vector<std::string> na = file_names(a);
  const std::vector<std::string> nb = file_names(b);
  REQUIRE(na == nb);
  REQUIRE_FALSE(na.empty());
  for (const std::string& name : na) {
    INFO("file " << name);
    REQUIRE(slurp(a / name) == slurp(b / name));
  }
}

}  // namespace

TEST_CASE("--version succeeds and prints the tool banner") {
  TempDir tmp("version");
  const CommandResult r = run_cli("--version", tmp.path);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("acousep") != std::string::npos);
}

TEST_CASE("usage problems exit with code 1") {
  TempDir tmp("usage");
  SECTION("unknown subcommand") {
    const CommandResult r = run_cli("frobnicate", tmp.path);
    REQUIRE(r.exit_code == 1);
  }
  SECTION("no subcommand at all") {
    const CommandResult r = run_cli("", tmp.path);
    REQUIRE(r.exit_code == 1);
  }
  SECTION("missing required option") {
    const CommandResult r = run_cli("train", tmp.path);
    REQUIRE(r.exit_code == 1);
  }
  SECTION("unknown flag") {
    const CommandResult r = run_cli("synth --bogus 3", tmp.path);
    REQUIRE(r.exit_code == 1);
  }
}

TEST_CASE("processing failures exit with code 2 and a one-line JSON diagnostic") {
  TempDir tmp("procerr");
  SECTION("separate on a missing file") {
    const CommandResult r =
        run_cli("separate no_such_file.wav --output-dir " + tmp.str(),
                tmp.path);
    REQUIRE(r.exit_code == 2);
    // stderr carries exactly one line, and that line is a JSON object with
    // the error kind and a human-readable message.
    REQUIRE_FALSE(r.err.empty());
    REQUIRE(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    const nlohmann::json diag =
        nlohmann::json::parse(r.err.substr(0, r.err.find('\n')));
    REQUIRE(diag.at("error").get<std::string>() == "format");
    REQUIRE_FALSE(diag.at("message").get<std::string>().empty());
  }
  SECTION("synth with an unknown class name") {
    const CommandResult r = run_cli(
        "synth --classes lawnmower --output-dir " + tmp.str(), tmp.path);
    REQUIRE(r.exit_code == 2);
    const nlohmann::json diag =
        nlohmann::json::parse(r.err.substr(0, r.err.find('\n')));
    REQUIRE(diag.at("error").get<std::string>() == "parameter");
  }
  SECTION("experiment with an unreadable config") {
    const CommandResult r = run_cli(
        "experiment --config missing.json --output-dir " + tmp.str(),
        tmp.path);
    REQUIRE(r.exit_code == 2);
    const nlohmann::json diag =
        nlohmann::json::parse(r.err.substr(0, r.err.find('\n')));
    REQUIRE(diag.at("error").get<std::string>() == "format");
  }
  SECTION("output name that tries to escape the output directory") {
    REQUIRE(run_cli("synth --classes drone,wind --length 2000 --output-dir " +
                        tmp.str(),
                    tmp.path)
                .exit_code == 0);
    const CommandResult r =
        run_cli("mix " + tmp.str() + "/drone_0.wav " + tmp.str() +
                "/wind_0.wav --identity --name ../evil --output-dir " +
                tmp.str(),
                tmp.path);
    REQUIRE(r.exit_code == 2);
    REQUIRE_FALSE(fs::exists(tmp.path.parent_path() / "evil.wav"));
    const nlohmann::json diag =
        nlohmann::json::parse(r.err.substr(0, r.err.find('\n')));
    REQUIRE(diag.at("error").get<std::string>() == "parameter");
  }
}

TEST_CASE("synth writes the requested recordings deterministically") {
  TempDir a("synth_a");
  TempDir b("synth_b");
  const std::string args =
      "synth --classes drone,bird --count 2 --length 4000 --seed 77"
      " --output-dir ";
  REQUIRE(run_cli(args + a.str(), a.path).exit_code == 0);
  REQUIRE(run_cli(args + b.str(), b.path).exit_code == 0);

  const std::vector<std::string> expected = {"bird_0.wav", "bird_1.wav",
                                             "drone_0.wav", "drone_1.wav"};
  REQUIRE(file_names(a.path) == expected);
  require_identical_trees(a.path, b.path);

  // A different seed must change the audio.
  TempDir c("synth_c");
  REQUIRE(run_cli("synth --classes drone,bird --count 2 --length 4000"
                  " --seed 78 --output-dir " +
                      c.str(),
                  c.path)
              .exit_code == 0);
  REQUIRE(slurp(a.path / "drone_0.wav") != slurp(c.path / "drone_0.wav"));
}

TEST_CASE("full pipeline: synth, mix, separate, features, train, predict") {
  TempDir tmp("pipeline");
  const std::string dir = tmp.str();

  // Source recordings: three classes, three takes each.
  REQUIRE(run_cli("synth --classes drone,wind,bird --count 3 --length 6000"
                  " --rate 22050 --seed 5 --output-dir " +
                      dir,
                  tmp.path)
              .exit_code == 0);

  // Mix one take of each class.
  const CommandResult mixed = run_cli(
      "mix " + dir + "/drone_0.wav " + dir + "/wind_0.wav " + dir +
          "/bird_0.wav --seed 11 --name mixture --output-dir " + dir,
      tmp.path);
  REQUIRE(mixed.exit_code == 0);
  REQUIRE(fs::exists(tmp.path / "mixture.wav"));
  REQUIRE(fs::exists(tmp.path / "mixture.json"));

  // Separate; the sidecar is discovered automatically, so the diagnostic
  // report carries an alignment section with truth labels.
  const CommandResult sep = run_cli(
      "separate " + dir + "/mixture.wav --seed 3 --output-dir " + dir,
      tmp.path);
  REQUIRE(sep.exit_code == 0);
  const nlohmann::json report =
      nlohmann::json::parse(slurp(tmp.path / "source_separation.json"));
  REQUIRE(report.at("converged").get<bool>());
  REQUIRE(report.at("microphones").get<int>() == 3);
  REQUIRE(report.contains("alignment"));
  REQUIRE(report.at("alignment").at("mean_sir_db").get<double>() > 10.0);
  REQUIRE(report.at("files").size() == 3);
  for (const auto& f : report.at("files"))
    REQUIRE(fs::exists(tmp.path / f.get<std::string>()));

  // Features over every synthesized take; labels come from the file stems.
  std::string inputs;
  for (const char* cls : {"drone", "wind", "bird"})
    for (int i = 0; i < 3; ++i)
      inputs += " " + dir + "/" + cls + "_" + std::to_string(i) + ".wav";
  REQUIRE(run_cli("features" + inputs +
                      " --method RMSPSD9 --name train_set --output-dir " + dir,
                  tmp.path)
              .exit_code == 0);
  REQUIRE(fs::exists(tmp.path / "train_set.csv"));

  // Train both classifier flavours on the same table.
  REQUIRE(run_cli("train --features " + dir +
                      "/train_set.csv --classifier SVM --name svm_model"
                      " --output-dir " +
                      dir,
                  tmp.path)
              .exit_code == 0);
  REQUIRE(run_cli("train --features " + dir +
                      "/train_set.csv --classifier KNN --k 1 --name knn_model"
                      " --output-dir " +
                      dir,
                  tmp.path)
              .exit_code == 0);

  // Predict with each model on the training table: the rows are separable,
  // so the SVM scores perfectly, and k = 1 self-classification is exact.
  for (const char* model : {"svm_model", "knn_model"}) {
    const CommandResult pred = run_cli(
        "predict --model " + dir + "/" + model + ".json --features " + dir +
            "/train_set.csv --name preds_" + model + " --output-dir " + dir,
        tmp.path);
    REQUIRE(pred.exit_code == 0);
    REQUIRE(pred.out.find("accuracy 100.00% on 9 labeled rows") !=
            std::string::npos);
    const std::string csv =
        slurp(tmp.path / ("preds_" + std::string(model) + ".csv"));
    REQUIRE(csv.rfind("index,label,predicted,decision_value\n", 0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 10);
  }
}

TEST_CASE("repeating any invocation with the same seed is byte-identical") {
  // Two fully independent passes over the same command list must leave
  // byte-for-byte identical artifacts, including the experiment reports.
  TempDir a("rerun_a");
  TempDir b("rerun_b");

  const nlohmann::json config = {
      {"block_lengths", {2000}},
      {"trials_per_length", 4},
      {"source_specs",
       {{{"label", "drone"}, {"fundamental_hz", 210.0}},
        {{"label", "wind"}},
        {{"label", "bird"}}}},
      {"methods", {"RMSPSD9"}},
      {"classifiers", {"KNN"}},
      {"ica_restarts", 2},
      {"knn_k", 1},
      {"seed", 9}};

  // Identical argv in both legs -- all paths are relative to the leg's own
  // working directory, which is exactly the determinism contract.
  for (const TempDir* t : {&a, &b}) {
    {
      std::ofstream out(t->path / "config.json");
      out << config.dump(2) << '\n';
    }
    REQUIRE(run_cli("synth --classes drone,wind --count 1 --length 3000"
                    " --seed 21 --output-dir .",
                    t->path)
                .exit_code == 0);
    REQUIRE(run_cli("mix drone_0.wav wind_0.wav --seed 8 --output-dir .",
                    t->path)
                .exit_code == 0);
    REQUIRE(run_cli("separate mixture.wav --seed 4 --output-dir .", t->path)
                .exit_code == 0);
    REQUIRE(run_cli("features drone_0.wav wind_0.wav --method mfcc"
                    " --format json --output-dir .",
                    t->path)
                .exit_code == 0);
    REQUIRE(run_cli("experiment --config config.json --quiet --output-dir .",
                    t->path)
                .exit_code == 0);
  }
  require_identical_trees(a.path, b.path);
}
