// Copyright 2026 The banding-detector Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "banding/banding.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kBadInput = 2, kBadConfig = 3 };

// Failure while reading the input media or table.
struct InputFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FrameRange {
  std::size_t first = 0;
  std::optional<std::size_t> last;  // inclusive
};

FrameRange parse_frame_range(const std::string& text) {
  auto number = [&](const std::string& s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw banding::ConfigError("bad frame range '" + text + "' (expected a..b)");
    }
    return std::stoull(s);
  };
  FrameRange r;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    r.first = number(text);
    r.last = r.first;
    return r;
  }
  const std::string a = text.substr(0, dots);
  const std::string b = text.substr(dots + 2);
  if (!a.empty()) r.first = number(a);
  if (!b.empty()) r.last = number(b);
  if (r.last && *r.last < r.first) throw banding::ConfigError("empty frame range '" + text + "'");
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json config_json(const banding::AnalysisConfig& config) {
  json out = json::object();
  for (const auto& [key, value] : config.entries()) {
    std::visit([&, k = key](const auto& v) { out[k] = v; }, value);
  }
  return out;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw banding::IoError("cannot create '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

struct AnalyzeOptions {
  std::string input;
  std::string format;
  int width = 0;
  int height = 0;
  std::string subsampling = "420";
  std::string out = ".";
  bool emit_bvm = false;
  bool emit_bem = false;
  bool emit_csv = false;
  double bvm_scale = 20.0;
  std::string config_file;
  std::vector<std::string> overrides;
  std::string frames;
  unsigned workers = 0;
  bool rescale = false;
};

int run_analyze(const AnalyzeOptions& opt) {
  banding::AnalysisConfig config;
  std::optional<FrameRange> range;
  try {
    if (!opt.config_file.empty()) {
      std::ifstream in(opt.config_file);
      if (!in) throw banding::ConfigError("cannot open config file '" + opt.config_file + "'");
      banding::apply_config_text(config, in);
    }
    for (const auto& o : opt.overrides) banding::apply_override(config, o);
    config.validate();
    if (!opt.frames.empty()) range = parse_frame_range(opt.frames);
    if (!(opt.bvm_scale > 0.0)) throw banding::ConfigError("--bvm-scale must be > 0");
  } catch (const banding::Error& e) {
    std::cerr << "error: invalid configuration: " << e.what() << '\n';
    return kBadConfig;
  }

  std::string format = opt.format;
  if (format.empty()) format = fs::path(opt.input).extension() == ".y4m" ? "y4m" : "raw";
  if (format != "y4m" && format != "raw") {
    std::cerr << "error: --format must be y4m or raw\n";
    return kBadConfig;
  }

  banding::VideoStream stream;
  try {
    if (format == "y4m") {
      stream = banding::read_y4m_file(opt.input, {opt.rescale});
    } else {
      if (opt.width < 1 || opt.height < 1) {
        std::cerr << "error: raw input needs --width and --height\n";
        return kBadConfig;
      }
      stream = banding::read_raw_yuv_file(opt.input, opt.width, opt.height,
                                          banding::parse_subsampling(opt.subsampling));
    }
  } catch (const banding::ConfigError& e) {
    std::cerr << "error: invalid configuration: " << e.what() << '\n';
    return kBadConfig;
  } catch (const banding::Error& e) {
    std::cerr << "error: cannot read input '" << opt.input << "': " << e.what() << '\n';
    return kBadInput;
  }

  if (range) {
    std::vector<banding::LumaFrame> kept;
    for (std::size_t i = range->first; i < stream.frames.size() && (!range->last || i <= *range->last); ++i) {
      kept.push_back(stream.frames[i]);
    }
    if (kept.empty()) {
      std::cerr << "error: frame range '" << opt.frames << "' selects no frames\n";
      return kBadConfig;
    }
    stream.frames = std::move(kept);
  }

  try {
    const fs::path out_dir(opt.out);
    fs::create_directories(out_dir);
    const unsigned workers = opt.workers > 0 ? opt.workers : std::max(1u, std::thread::hardware_concurrency());

    std::vector<std::size_t> edge_counts;
    json bvm_files = json::array();
    json bem_files = json::array();
    auto sink = [&](const banding::LumaFrame& frame, const banding::FrameAnalysis& analysis) {
      edge_counts.push_back(analysis.bem.edge_count());
      std::ostringstream stem;
      stem << std::setw(6) << std::setfill('0') << frame.frame_index;
      if (opt.emit_bvm) {
        const std::string name = "bvm_" + stem.str() + ".pgm";
        banding::write_pgm(out_dir / name, banding::bvm_heatmap(analysis.bvm, opt.bvm_scale));
        bvm_files.push_back(name);
      }
      if (opt.emit_bem) {
        const std::string name = "bem_" + stem.str() + ".pgm";
        banding::write_pgm(out_dir / name, banding::bem_label_image(analysis.bem));
        bem_files.push_back(name);
      }
    };
    const auto video = banding::analyze_video(stream, config, workers, sink);

    json frames = json::array();
    for (std::size_t i = 0; i < video.frame_scores.size(); ++i) {
      const auto& f = video.frame_scores[i];
      frames.push_back({{"frame_index", f.frame_index},
                        {"score", f.score},
                        {"raw_pooled", f.raw_pooled},
                        {"pooled_count", f.pooled_count},
                        {"si", f.si},
                        {"ti", f.ti},
                        {"w_si", banding::transfer_weight(f.si, config.pooling.a_si, config.pooling.b_si)},
                        {"w_ti", banding::transfer_weight(f.ti, config.pooling.a_ti, config.pooling.b_ti)},
                        {"edge_count", edge_counts[i]}});
    }
    json doc = {{"tool", "banding"},
                {"version", banding::kVersion},
                {"timestamp", utc_timestamp()},
                {"input",
                 {{"path", opt.input},
                  {"format", format},
                  {"width", stream.width()},
                  {"height", stream.height()},
                  {"frame_count", stream.frame_count()},
                  {"frame_rate", stream.frame_rate}}},
                {"video_score", video.score},
                {"frames", frames},
                {"config", config_json(config)}};
    write_json(out_dir / "scores.json", doc);

    if (opt.emit_csv) {
      std::ofstream csv(out_dir / "frames.csv");
      if (!csv) throw banding::IoError("cannot create frames.csv");
      csv << std::setprecision(17);
      csv << "frame_index,score,raw_pooled,si,ti,w_si,w_ti,edge_count\n";
      for (const auto& f : frames) {
        csv << f["frame_index"].get<std::int64_t>() << ',' << f["score"].get<double>() << ','
            << f["raw_pooled"].get<double>() << ',' << f["si"].get<double>() << ',' << f["ti"].get<double>()
            << ',' << f["w_si"].get<double>() << ',' << f["w_ti"].get<double>() << ','
            << f["edge_count"].get<std::size_t>() << '\n';
      }
    }
    if (opt.emit_bvm) {
      write_json(out_dir / "bvm.json", {{"scale", opt.bvm_scale},
                                        {"mapping", "gray = round(bvm * scale), saturated at 255"},
                                        {"files", bvm_files}});
    }
    std::cout << std::setprecision(10) << "video_score " << video.score << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

int run_eval(const std::string& input, const std::string& output) {
  std::vector<banding::ScoredItem> items;
  {
    std::ifstream in(input);
    if (!in) {
      std::cerr << "error: cannot open '" << input << "'\n";
      return kBadInput;
    }
    try {
      items = banding::read_scored_items(in);
    } catch (const banding::Error& e) {
      std::cerr << "error: " << input << ": " << e.what() << '\n';
      return kBadConfig;
    }
  }
  banding::EvalReport report;
  try {
    report = banding::evaluate(items);
  } catch (const banding::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadConfig;
  }
  const json doc = {{"n", items.size()},
                    {"srcc", report.srcc},
                    {"krcc", report.krcc},
                    {"plcc", report.plcc},
                    {"rmse", report.rmse},
                    {"logistic",
                     {{"b1", report.logistic.b1},
                      {"b2", report.logistic.b2},
                      {"b3", report.logistic.b3},
                      {"b4", report.logistic.b4}}}};
  try {
    if (output.empty() || output == "-") {
      std::cout << doc.dump(2) << '\n';
    } else {
      write_json(output, doc);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

int run_generate(banding::SyntheticBandingSpec spec, const std::string& direction, const std::string& output) {
  try {
    if (direction == "horizontal") {
      spec.direction = banding::RampDirection::kHorizontal;
    } else if (direction == "vertical") {
      spec.direction = banding::RampDirection::kVertical;
    } else if (direction == "diagonal") {
      spec.direction = banding::RampDirection::kDiagonal;
    } else {
      throw banding::ConfigError("--direction must be horizontal, vertical or diagonal");
    }
    spec.validate();
  } catch (const banding::Error& e) {
    std::cerr << "error: invalid fixture spec: " << e.what() << '\n';
    return kBadConfig;
  }
  try {
    banding::write_y4m_file(output, banding::generate_banding_fixture(spec));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"No-reference banding artifact detector"};
  app.require_subcommand(1);
  app.set_version_flag("--version", banding::kVersion);

  AnalyzeOptions analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "Score banding visibility of a video");
  cmd_analyze->add_option("--input", analyze.input, "Y4M or raw YUV file")->required();
  cmd_analyze->add_option("--format", analyze.format, "y4m | raw (default: by extension)");
  cmd_analyze->add_option("--width", analyze.width, "Raw input width");
  cmd_analyze->add_option("--height", analyze.height, "Raw input height");
  cmd_analyze->add_option("--subsampling", analyze.subsampling, "Raw input chroma layout: 420 | 422 | 444 | mono");
  cmd_analyze->add_option("--out", analyze.out, "Output directory");
  cmd_analyze->add_flag("--emit-bvm", analyze.emit_bvm, "Write per-frame visibility heatmaps (PGM)");
  cmd_analyze->add_flag("--emit-bem", analyze.emit_bem, "Write per-frame edge label images (PGM)");
  cmd_analyze->add_flag("--emit-csv", analyze.emit_csv, "Write frames.csv");
  cmd_analyze->add_option("--bvm-scale", analyze.bvm_scale, "Heatmap gray levels per visibility unit");
  cmd_analyze->add_option("--config", analyze.config_file, "key = value parameter file");
  cmd_analyze->add_option("--set", analyze.overrides, "Parameter override key=value (repeatable)");
  cmd_analyze->add_option("--frames", analyze.frames, "Inclusive 0-based frame range a..b");
  cmd_analyze->add_option("--workers", analyze.workers, "Worker threads (default: all cores)");
  cmd_analyze->add_flag("--rescale", analyze.rescale, "Right-shift >8-bit Y4M samples to 8 bits");

  std::string eval_input;
  std::string eval_output;
  auto* cmd_eval = app.add_subcommand("eval", "Correlate predicted scores with MOS");
  cmd_eval->add_option("--input", eval_input, "CSV with item_id,predicted,mos")->required();
  cmd_eval->add_option("--out", eval_output, "Report JSON path (default: stdout)");

  banding::SyntheticBandingSpec spec;
  std::string direction = "horizontal";
  std::string gen_output;
  auto* cmd_generate = app.add_subcommand("generate", "Write a synthetic banded Y4M fixture");
  cmd_generate->add_option("--out", gen_output, "Output Y4M path")->required();
  cmd_generate->add_option("--width", spec.width, "Frame width");
  cmd_generate->add_option("--height", spec.height, "Frame height");
  cmd_generate->add_option("--q", spec.step, "Quantisation step");
  cmd_generate->add_option("--low", spec.low, "Ramp start level");
  cmd_generate->add_option("--high", spec.high, "Ramp end level");
  cmd_generate->add_option("--direction", direction, "horizontal | vertical | diagonal");
  cmd_generate->add_option("--dither", spec.dither, "Dither amplitude in levels");
  cmd_generate->add_option("--seed", spec.seed, "Dither seed");
  cmd_generate->add_option("--frames", spec.frames, "Frame count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  if (*cmd_analyze) return run_analyze(analyze);
  if (*cmd_eval) return run_eval(eval_input, eval_output);
  if (*cmd_generate) return run_generate(spec, direction, gen_output);
  return kBadConfig;
}
