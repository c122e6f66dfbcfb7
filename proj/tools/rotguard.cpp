/* Copyright 2026 The rotguard Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */


// rotguard: command-line front end. Every subcommand is a thin shell over the
// library; stdout carries JSON/CSV, stderr carries logs.
//
// Settings precedence, highest first: command-line flags, environment
// (ROTGUARD_CACHE_DIR, GOOGLE_API_KEY, GOOGLE_ACCESS_TOKEN), the --config
// file, built-in defaults. Exit codes: 0 ok, 1 computation error,
// 2 usage or I/O error, 3 authentication or quota error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotguard/errors.hpp"
#include "rotguard/geometry.hpp"
#include "rotguard/image_io.hpp"
#include "rotguard/labels.hpp"
#include "rotguard/pipeline.hpp"
#include "rotguard/predictor.hpp"
#include "rotguard/providers.hpp"
#include "rotguard/similarity.hpp"
#include "rotguard/sweep.hpp"

namespace fs = std::filesystem;
using namespace rotguard;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAuth = 3;

int exit_code_for(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::Computation: return kExitComputation;
    case ErrorClass::Io: return kExitUsage;
    case ErrorClass::Auth: return kExitAuth;
  }
  return kExitComputation;
}

bool verbose = false;

void log(const std::string& msg) { std::cerr << "rotguard: " << msg << '\n'; }
void debug(const std::string& msg) {
  if (verbose) log(msg);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LabelSet read_label_file(const fs::path& path) {
  const std::string text = read_text(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidLabelSet(path.string() + ": " + e.what());
  }
  return label_set_from_json(doc);
}

// Flat TOML, loadable again through --config.
class ConfigDump {
 public:
  void put(const std::string& key, const std::string& v) { lines_.push_back(key + " = " + quote(v)); }
  void put(const std::string& key, const char* v) { put(key, std::string(v)); }
  void put(const std::string& key, bool v) { lines_.push_back(key + (v ? " = true" : " = false")); }
  void put(const std::string& key, long long v) { lines_.push_back(key + " = " + std::to_string(v)); }
  void put(const std::string& key, int v) { put(key, static_cast<long long>(v)); }
  void put(const std::string& key, std::uint64_t v) { lines_.push_back(key + " = " + std::to_string(v)); }
  void put(const std::string& key, double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    lines_.push_back(key + " = " + ss.str());
  }
  void put(const std::string& key, const std::vector<std::string>& v) {
    std::string s = key + " = [";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + quote(v[i]);
    lines_.push_back(s + "]");
  }
  void section(const std::string& name) { lines_.push_back("\n[" + name + "]"); }
  std::string str() const {
    std::string out;
    for (const auto& l : lines_) out += l + '\n';
    return out;
  }

 private:
  static std::string quote(const std::string& v) { return nlohmann::json(v).dump(); }
  std::vector<std::string> lines_;
};

// ---------------------------------------------------------------------------

struct GlobalSettings {
  std::string config_file;
  bool print_config = false;
  std::uint64_t seed = 0;
  std::string cache_dir;
  bool cache_dir_on_command_line = false;

  void resolve_environment() {
    if (cache_dir_on_command_line) return;
    if (const char* env = std::getenv("ROTGUARD_CACHE_DIR"); env && *env) cache_dir = env;
  }
  void dump(ConfigDump& d) const {
    d.put("seed", seed);
    d.put("cache-dir", cache_dir);
    d.put("verbose", verbose);
  }
};

struct ProviderFlags {
  std::string provider = "live";
  std::string fixture_dir;
  std::string recorded_provider = "google-vision";
  std::string endpoint;
  int retries = 3;
  int backoff_ms = 1000;
  int max_in_flight = 4;
  int requests_per_minute = 600;

  void add(CLI::App* app) {
    app->add_option("--provider", provider, "live, fixture or synthetic")
        ->check(CLI::IsMember({"live", "fixture", "synthetic"}));
    app->add_option("--fixture-dir", fixture_dir, "Recorded responses for the fixture provider");
    app->add_option("--recorded-provider", recorded_provider, "Provider id the fixtures were recorded under");
    app->add_option("--endpoint", endpoint, "Override the Cloud Vision base URL");
    app->add_option("--retries", retries)->check(CLI::NonNegativeNumber);
    app->add_option("--backoff-ms", backoff_ms)->check(CLI::NonNegativeNumber);
    app->add_option("--max-in-flight", max_in_flight)->check(CLI::PositiveNumber);
    app->add_option("--requests-per-minute", requests_per_minute)->check(CLI::NonNegativeNumber);
  }
  providers::ProviderConfig config(std::uint64_t seed) const {
    providers::ProviderConfig cfg;
    cfg.kind = providers::parse_provider_kind(provider);
    cfg.fixture_dir = fixture_dir;
    cfg.recorded_provider_id = recorded_provider;
    cfg.seed = seed;
    if (cfg.kind == providers::ProviderKind::Live) {
      cfg.vision = providers::VisionApiOptions::from_environment();
      if (!endpoint.empty()) cfg.vision.endpoint = endpoint;
      cfg.vision.max_retries = retries;
      cfg.vision.backoff_base = std::chrono::milliseconds(backoff_ms);
      cfg.vision.max_in_flight = max_in_flight;
      cfg.vision.requests_per_minute = requests_per_minute;
    }
    return cfg;
  }
  void dump(ConfigDump& d) const {
    d.put("provider", provider);
    d.put("fixture-dir", fixture_dir);
    d.put("recorded-provider", recorded_provider);
    d.put("endpoint", endpoint);
    d.put("retries", retries);
    d.put("backoff-ms", backoff_ms);
    d.put("max-in-flight", max_in_flight);
    d.put("requests-per-minute", requests_per_minute);
  }
};

struct OracleFlags {
  bool flip180 = false;
  double flip_probability = 1.0;
  double jitter_sigma = 0.0;
  int error_pass = 0;

  void add(CLI::App* app) {
    app->add_flag("--oracle-flip180", flip180, "Oracle answers 180 degrees off");
    app->add_option("--oracle-flip-prob", flip_probability)->check(CLI::Range(0.0, 1.0));
    app->add_option("--oracle-jitter", jitter_sigma, "Gaussian oracle noise, degrees")->check(CLI::NonNegativeNumber);
    app->add_option("--oracle-error-pass", error_pass, "Restrict oracle errors to pass 1 or 2 (0: both)")
        ->check(CLI::Range(0, 2));
  }
  pipeline::OracleErrorMode mode() const {
    if (flip180 && jitter_sigma > 0) throw ConfigError("--oracle-flip180 and --oracle-jitter are exclusive");
    pipeline::OracleErrorMode m;
    if (flip180) {
      m.kind = pipeline::OracleErrorKind::Flip180;
      m.probability = flip_probability;
    } else if (jitter_sigma > 0) {
      m.kind = pipeline::OracleErrorKind::GaussianJitter;
      m.sigma = jitter_sigma;
    }
    m.only_pass = error_pass;
    return m;
  }
  void dump(ConfigDump& d) const {
    d.put("oracle-flip180", flip180);
    d.put("oracle-flip-prob", flip_probability);
    d.put("oracle-jitter", jitter_sigma);
    d.put("oracle-error-pass", error_pass);
  }
};

// ---------------------------------------------------------------------------

struct RotateCmd {
  std::string input, output;
  int angle = 0;
  void add(CLI::App* app) {
    app->add_option("input", input, "Image to rotate")->required();
    app->add_option("-a,--angle", angle, "Counter-clockwise degrees")->required();
    app->add_option("-o,--output", output, "PNG or JPEG path")->required();
  }
  void dump(ConfigDump& d) const {
    d.put("input", input);
    d.put("angle", angle);
    d.put("output", output);
  }
  int run(const GlobalSettings&) const {
    const Image img = io::read_image(input);
    const Image out = geometry::rotate_with_pad(img, AngleDeg(angle));
    io::write_image(output, out);
    debug("rotated " + input + " by " + std::to_string(AngleDeg(angle).value()) + " -> " +
          std::to_string(out.width()) + "x" + std::to_string(out.height()));
    return kExitOk;
  }
};

struct TrimCmd {
  std::string input, output;
  int threshold = geometry::kDefaultBlackThreshold;
  void add(CLI::App* app) {
    app->add_option("input", input)->required();
    app->add_option("-o,--output", output)->required();
    app->add_option("--threshold", threshold, "Per-channel black level")->check(CLI::Range(0, 255));
  }
  void dump(ConfigDump& d) const {
    d.put("input", input);
    d.put("output", output);
    d.put("threshold", threshold);
  }
  int run(const GlobalSettings&) const {
    const Image out = geometry::trim_black_padding(io::read_image(input), static_cast<std::uint8_t>(threshold));
    io::write_image(output, out);
    return kExitOk;
  }
};

struct CorrectCmd {
  std::string input, output, model;
  std::optional<int> oracle_angle;
  OracleFlags oracle;
  int threshold = geometry::kDefaultBlackThreshold;
  void add(CLI::App* app) {
    app->add_option("input", input)->required();
    app->add_option("-o,--output", output)->required();
    auto* m = app->add_option("--model", model, "ONNX orientation classifier (sidecar: <model>.json)");
    auto* o = app->add_option("--oracle-angle", oracle_angle, "Use the oracle predictor with this true rotation");
    m->excludes(o);
    oracle.add(app);
    app->add_option("--threshold", threshold)->check(CLI::Range(0, 255));
  }
  void dump(ConfigDump& d) const {
    d.put("input", input);
    d.put("output", output);
    d.put("model", model);
    if (oracle_angle) d.put("oracle-angle", *oracle_angle);
    oracle.dump(d);
    d.put("threshold", threshold);
  }
  int run(const GlobalSettings& g) const {
    std::unique_ptr<pipeline::AnglePredictor> predictor;
    const std::string subject = "input";
    if (!model.empty()) {
      predictor = std::make_unique<pipeline::ModelPredictor>(model);
    } else if (oracle_angle) {
      auto o = std::make_unique<pipeline::OraclePredictor>(oracle.mode(), g.seed);
      o->record(subject, AngleDeg(*oracle_angle));
      predictor = std::move(o);
    } else {
      throw ConfigError("correct needs --model or --oracle-angle");
    }
    const Image img = io::read_image(input);
    pipeline::PipelineOptions opts;
    opts.black_threshold = static_cast<std::uint8_t>(threshold);
    const auto result = pipeline::correct_double_pass(*predictor, img, subject, opts);
    io::write_image(output, result.corrected);
    const nlohmann::json summary{{"pass1", result.pass1_prediction.value()},
                                 {"pass2", result.pass2_prediction.value()},
                                 {"total", result.total_correction.value()}};
    std::cout << summary.dump() << '\n';
    return kExitOk;
  }
};

struct LabelCmd {
  std::string input;
  ProviderFlags provider;
  int max_results = providers::kDefaultMaxResults;
  std::string subject_id;
  int true_rotation = 0;
  bool no_cache = false;
  void add(CLI::App* app) {
    app->add_option("input", input)->required();
    provider.add(app);
    app->add_option("--max-results", max_results)->check(CLI::PositiveNumber);
    app->add_option("--subject-id", subject_id, "Synthetic provider: image id (default: file stem)");
    app->add_option("--true-rotation", true_rotation, "Synthetic provider: rotation the image carries");
    app->add_flag("--no-cache", no_cache, "Bypass the label cache");
  }
  void dump(ConfigDump& d) const {
    d.put("input", input);
    provider.dump(d);
    d.put("max-results", max_results);
    d.put("subject-id", subject_id);
    d.put("true-rotation", true_rotation);
    d.put("no-cache", no_cache);
  }
  int run(const GlobalSettings& g) const {
    const Image img = io::read_image(input);
    auto backend = providers::make_provider(provider.config(g.seed));
    providers::CountingProvider counted(*backend);
    const std::string id = subject_id.empty() ? fs::path(input).stem().string() : subject_id;
    const auto req = providers::make_request(img, max_results, providers::SubjectHint{id, AngleDeg(true_rotation)});
    LabelSet labels;
    if (no_cache || g.cache_dir.empty()) {
      labels = counted.label(req);
    } else {
      providers::LabelCache cache(g.cache_dir);
      labels = providers::cached_label(cache, counted, req);
    }
    std::cout << dump_label_set(labels) << '\n';
    log("provider calls: " + std::to_string(counted.calls()));
    return kExitOk;
  }
};

struct SimilarityCmd {
  std::string baseline, test;
  int decimals = 2;
  void add(CLI::App* app) {
    app->add_option("baseline", baseline, "Labels of the original image (LabelSet JSON)")->required();
    app->add_option("test", test, "Labels of the variant")->required();
    app->add_option("--decimals", decimals, "Rounding of the display block (-1: omit)")->check(CLI::Range(-1, 12));
  }
  void dump(ConfigDump& d) const {
    d.put("baseline", baseline);
    d.put("test", test);
    d.put("decimals", decimals);
  }
  int run(const GlobalSettings&) const {
    const auto report = similarity_index(read_label_file(baseline), read_label_file(test));
    std::cout << to_json(report, decimals).dump(2) << '\n';
    return kExitOk;
  }
};

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError("cannot write " + path);
  return file;
}

struct SweepCmd {
  std::string corpus;
  int angle_start = 0, angle_stop = 357, angle_step = 3;
  std::vector<std::string> conditions{"rotated", "corrected"};
  ProviderFlags provider;
  std::string predictor = "oracle";
  std::string model;
  OracleFlags oracle;
  int max_results = providers::kDefaultMaxResults;
  int workers = 1;
  int threshold = geometry::kDefaultBlackThreshold;
  std::string records = "-";
  std::string records_jsonl;
  std::string aggregates;

  void add(CLI::App* app) {
    app->add_option("--corpus", corpus, "Directory of upright PNG/JPEG images")->required();
    app->add_option("--angle-start", angle_start);
    app->add_option("--angle-stop", angle_stop);
    app->add_option("--angle-step", angle_step);
    app->add_option("--conditions", conditions)->delimiter(',')->check(CLI::IsMember({"rotated", "corrected"}));
    provider.add(app);
    app->add_option("--predictor", predictor, "oracle, model or none")
        ->check(CLI::IsMember({"oracle", "model", "none"}));
    app->add_option("--model", model, "ONNX model for --predictor model");
    oracle.add(app);
    app->add_option("--max-results", max_results)->check(CLI::PositiveNumber);
    app->add_option("--workers", workers, "Parallel tasks (0: all cores)")->check(CLI::NonNegativeNumber);
    app->add_option("--threshold", threshold)->check(CLI::Range(0, 255));
    app->add_option("--records", records, "Per-record CSV (- for stdout)");
    app->add_option("--records-jsonl", records_jsonl, "Per-record JSON lines");
    app->add_option("--aggregates", aggregates, "Per-angle CSV");
  }
  void dump(ConfigDump& d) const {
    d.put("corpus", corpus);
    d.put("angle-start", angle_start);
    d.put("angle-stop", angle_stop);
    d.put("angle-step", angle_step);
    d.put("conditions", conditions);
    provider.dump(d);
    d.put("predictor", predictor);
    d.put("model", model);
    oracle.dump(d);
    d.put("max-results", max_results);
    d.put("workers", workers);
    d.put("threshold", threshold);
    d.put("records", records);
    d.put("records-jsonl", records_jsonl);
    d.put("aggregates", aggregates);
  }

  int run(const GlobalSettings& g) const {
    sweep::SweepConfig cfg;
    cfg.corpus_dir = corpus;
    cfg.angle_start = angle_start;
    cfg.angle_stop = angle_stop;
    cfg.angle_step = angle_step;
    cfg.conditions.clear();
    for (const auto& c : conditions) cfg.conditions.push_back(sweep::parse_condition(c));
    cfg.max_results = max_results;
    cfg.workers = workers;
    cfg.seed = g.seed;
    cfg.pipeline.black_threshold = static_cast<std::uint8_t>(threshold);
    cfg.provider = provider.config(g.seed);
    cfg.predictor.kind = predictor == "model"  ? sweep::PredictorKind::Model
                         : predictor == "none" ? sweep::PredictorKind::None
                                               : sweep::PredictorKind::Oracle;
    cfg.predictor.model_file = model;
    cfg.predictor.oracle_error = oracle.mode();
    cfg.cache_dir = g.cache_dir.empty() ? fs::path(".rotguard-cache") : fs::path(g.cache_dir);
    cfg.validate();

    const auto images = sweep::load_corpus(cfg.corpus_dir);
    providers::LabelCache cache(cfg.cache_dir);
    auto backend = providers::make_provider(cfg.provider);
    providers::CountingProvider counted(*backend);
    auto pred = sweep::make_predictor(cfg.predictor, cfg.seed);
    log("sweep: " + std::to_string(images.size()) + " images x " + std::to_string(cfg.angles().size()) +
        " angles x " + std::to_string(cfg.conditions.size()) + " conditions, cache " + cfg.cache_dir.string());

    const auto result = sweep::run_sweep(cfg, images, counted, cache, pred.get());

    std::ofstream rec_file;
    sweep::write_records_csv(open_output(records, rec_file), result.records);
    if (!records_jsonl.empty()) {
      std::ofstream f;
      sweep::write_records_jsonl(open_output(records_jsonl, f), result.records);
    }
    if (!aggregates.empty()) {
      std::ofstream f;
      sweep::write_aggregates_csv(open_output(aggregates, f), sweep::aggregate(result.records));
    }
    const auto stats = cache.stats();
    log("records: " + std::to_string(result.records.size()) + ", failures: " + std::to_string(result.failures) +
        " (baseline failures: " + std::to_string(result.baseline_failures) + ")");
    log("provider calls: " + std::to_string(counted.calls()) + " (cache hits " + std::to_string(stats.hits) +
        ", misses " + std::to_string(stats.misses) + ")");
    if (!result.records.empty() && result.failures == static_cast<long>(result.records.size())) {
      log("every measurement failed; first error: " + result.records.front().error);
      return kExitComputation;
    }
    return kExitOk;
  }
};

struct ReportCmd {
  std::string input, output = "-";
  void add(CLI::App* app) {
    app->add_option("records", input, "Records from sweep (.csv or .jsonl)")->required();
    app->add_option("-o,--output", output, "Aggregate CSV (- for stdout)");
  }
  void dump(ConfigDump& d) const {
    d.put("records", input);
    d.put("output", output);
  }
  int run(const GlobalSettings&) const {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + input);
    const bool jsonl = fs::path(input).extension() == ".jsonl";
    const auto recs = jsonl ? sweep::read_records_jsonl(in) : sweep::read_records_csv(in);
    std::ofstream f;
    sweep::write_aggregates_csv(open_output(output, f), sweep::aggregate(recs));
    return kExitOk;
  }
};

bool flag_on_command_line(int argc, char** argv, std::string_view flag) {
  for (int i = 1; i < argc; ++i) {
    std::string_view a = argv[i];
    if (a == "--") break;
    if (a == flag || (a.size() > flag.size() && a.substr(0, flag.size()) == flag && a[flag.size()] == '=')) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotation robustness measurement and orientation correction for image labeling APIs", "rotguard"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalSettings g;
  app.set_config("--config", "", "TOML/INI settings file; [subcommand] sections hold subcommand options");
  app.add_flag("--print-config", g.print_config, "Print the effective settings as TOML and exit");
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--cache-dir", g.cache_dir, "Label cache directory (env: ROTGUARD_CACHE_DIR)");
  app.add_flag("-v,--verbose", verbose, "More logging on stderr");

  RotateCmd rotate;
  TrimCmd trim;
  CorrectCmd correct;
  LabelCmd label;
  SimilarityCmd similarity;
  SweepCmd sweep_cmd;
  ReportCmd report;

  auto* c_rotate = app.add_subcommand("rotate", "Rotate onto an expanded black canvas");
  auto* c_trim = app.add_subcommand("trim", "Strip black padding");
  auto* c_correct = app.add_subcommand("correct", "Double-pass orientation correction");
  auto* c_label = app.add_subcommand("label", "Label an image through a provider");
  auto* c_similarity = app.add_subcommand("similarity", "Similarity index of two label sets");
  auto* c_sweep = app.add_subcommand("sweep", "Rotation sweep over a corpus");
  auto* c_report = app.add_subcommand("report", "Per-angle aggregates from sweep records");
  rotate.add(c_rotate);
  trim.add(c_trim);
  correct.add(c_correct);
  label.add(c_label);
  similarity.add(c_similarity);
  sweep_cmd.add(c_sweep);
  report.add(c_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  g.cache_dir_on_command_line = flag_on_command_line(argc, argv, "--cache-dir");
  g.resolve_environment();

  struct Entry {
    CLI::App* app;
    std::function<void(ConfigDump&)> dump;
    std::function<int()> run;
  };
  const std::vector<Entry> entries{
      {c_rotate, [&](ConfigDump& d) { rotate.dump(d); }, [&] { return rotate.run(g); }},
      {c_trim, [&](ConfigDump& d) { trim.dump(d); }, [&] { return trim.run(g); }},
      {c_correct, [&](ConfigDump& d) { correct.dump(d); }, [&] { return correct.run(g); }},
      {c_label, [&](ConfigDump& d) { label.dump(d); }, [&] { return label.run(g); }},
      {c_similarity, [&](ConfigDump& d) { similarity.dump(d); }, [&] { return similarity.run(g); }},
      {c_sweep, [&](ConfigDump& d) { sweep_cmd.dump(d); }, [&] { return sweep_cmd.run(g); }},
      {c_report, [&](ConfigDump& d) { report.dump(d); }, [&] { return report.run(g); }},
  };

  for (const Entry& e : entries) {
    if (!e.app->parsed()) continue;
    if (g.print_config) {
      ConfigDump d;
      g.dump(d);
      d.section(e.app->get_name());
      e.dump(d);
      std::cout << d.str();
      return kExitOk;
    }
    try {
      return e.run();
    } catch (const Error& err) {
      log(std::string("error: ") + err.what());
      return exit_code_for(err.error_class());
    } catch (const fs::filesystem_error& err) {
      log(std::string("error: ") + err.what());
      return kExitUsage;
    } catch (const std::exception& err) {
      log(std::string("error: ") + err.what());
      return kExitComputation;
    }
  }
  return kExitUsage;
}
