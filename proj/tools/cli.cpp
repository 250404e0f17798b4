#include "cli.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "scriptfocus/effects.hpp"
#include "scriptfocus/error.hpp"
#include "scriptfocus/frame_io.hpp"
#include "scriptfocus/pipeline.hpp"
#include "scriptfocus/png_io.hpp"
#include "scriptfocus/preview.hpp"
#include "scriptfocus/script.hpp"
#include "scriptfocus/sidecar.hpp"
#include "scriptfocus/tracking.hpp"

namespace scriptfocus::cli {
namespace {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInputMissing: return kNoInput;
    case ErrorCode::kBackendUnavailable: return kUnavailable;
    case ErrorCode::kBackendError: return kProtocol;
    case ErrorCode::kIo: return kIoError;
    case ErrorCode::kInvalidArgument: return kUsage;
    case ErrorCode::kMalformedTimecode:
    case ErrorCode::kMalformedCue:
      return kScriptInvalid;
    case ErrorCode::kMalformedFixture:
    case ErrorCode::kMalformedRle:
    case ErrorCode::kDimsInconsistent:
    case ErrorCode::kDimsMismatch:
    case ErrorCode::kEmptySpan:
    case ErrorCode::kEmptyMask:
    case ErrorCode::kEmptySegmentation:
    case ErrorCode::kOutOfFrame:
    case ErrorCode::kDegenerateBox:
      return kDataError;
  }
  return kSoftware;
}

// Flags shared by detect, process and preview. They live on the top-level
// app so that a flat key=value config file can set them.
struct CommonOptions {
  std::string script_path;
  std::string frames_dir;
  std::string out_dir;
  std::string sidecar_path;
  std::string reuse_sidecar;
  std::string backend = "fixture";
  std::string endpoint;
  std::string fixture;
  double fps = 0.0;
  int keyframe_interval = 15;
  int grace_keyframes = 2;
  double ema_alpha = 0.5;
  double box_threshold = 0.3;
  double text_threshold = 0.25;
  int request_timeout_ms = 30000;
  int max_in_flight = 2;
  int workers = 0;
  std::string effect;
  std::string log_level = "warn";
};

BackendConfig backend_config(const CommonOptions& o) {
  BackendConfig b;
  b.kind = o.backend == "remote" ? BackendKind::kRemote : BackendKind::kFixture;
  b.endpoint_url = o.endpoint;
  b.fixture_path = o.fixture;
  b.request_timeout_ms = o.request_timeout_ms;
  b.max_in_flight = o.max_in_flight;
  return b;
}

std::optional<EffectKind> effect_override(const CommonOptions& o) {
  if (o.effect.empty()) return std::nullopt;
  return o.effect == "desaturate" ? EffectKind::kDesaturate : EffectKind::kVignette;
}

RunConfig run_config(const CommonOptions& o) {
  RunConfig c;
  c.keyframe_interval = o.keyframe_interval;
  c.fps = o.fps;
  c.grace_keyframes = o.grace_keyframes;
  c.ema_alpha = o.ema_alpha;
  c.params = {o.box_threshold, o.text_threshold};
  c.backend = backend_config(o);
  c.frames_dir = o.frames_dir;
  c.output_dir = o.out_dir;
  c.sidecar_path = o.sidecar_path;
  c.reuse_sidecar_path = o.reuse_sidecar;
  c.workers = o.workers;
  c.effect_override = effect_override(o);
  return c;
}

void print_summary(std::ostream& out, const RunSummary& s) {
  out << "frames: " << s.frames_total << " total, " << s.frames_rendered << " rendered, "
      << s.frames_copied << " copied, " << s.frames_kept << " kept\n"
      << "keyframes: " << s.keyframes_planned << " planned, " << s.keyframes_active
      << " active, " << s.keyframes_held << " held, " << s.keyframes_lost << " lost, "
      << s.fallback_masks << " box fallbacks\n"
      << "backend: " << s.backend_queries << " queries, " << s.records_reused << " reused, "
      << s.backend_unavailable << " unavailable\n"
      << std::fixed << std::setprecision(3) << "time: detect " << s.detect_seconds
      << " s, render " << s.render_seconds << " s\n";
  out.unsetf(std::ios::floatfield);
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  Script script;
  try {
    script = load_script(path);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInputMissing) {
      err << e.what() << "\n";
      return kNoInput;
    }
    err << path << ":" << e.line().value_or(0) << ": " << e.what() << "\n";
    return kScriptInvalid;
  }
  out << std::left << std::setw(10) << "id" << std::setw(14) << "start" << std::setw(14)
      << "end" << std::setw(12) << "effect" << std::setw(10) << "strength"
      << "prompt\n";
  for (const Cue& c : script.cues) {
    out << std::left << std::setw(10) << c.id << std::setw(14) << format_timecode(c.start)
        << std::setw(14) << format_timecode(c.end) << std::setw(12) << to_string(c.effect)
        << std::setw(10) << c.strength << c.prompt << "\n";
  }
  out << script.cues.size() << " cue(s) OK\n";
  return kOk;
}

int cmd_detect(const CommonOptions& o, bool dry_run, std::ostream& out, std::ostream& err) {
  Script script = load_script(o.script_path);
  RunConfig config = run_config(o);
  if (config.sidecar_path.empty() && config.output_dir.empty()) config.sidecar_path = "sidecar.json";

  if (dry_run) {
    config.validate();
    std::int64_t first = 0;
    std::int64_t last = std::numeric_limits<std::int64_t>::max() / 2;
    if (!o.frames_dir.empty()) {
      const auto frames = list_frames(o.frames_dir);
      if (!frames.empty()) {
        first = frames.begin()->first;
        last = frames.rbegin()->first;
      }
    }
    const auto plans = plan_run(script, config.fps, config.keyframe_interval, first, last);
    for (const CuePlan& plan : plans) {
      const Cue& cue = script.cues[plan.cue_index];
      out << cue.id << " \"" << cue.prompt << "\":";
      for (auto f : plan.keyframes) out << " " << f;
      if (plan.keyframes.empty()) out << " (no frames)";
      out << "\n";
    }
    return kOk;
  }

  const RunSummary summary = detect_keyframes(config, script);
  print_summary(out, summary);
  out << "sidecar: " << config.effective_sidecar_path() << "\n";
  if (summary.backend_unavailable > 0) {
    err << summary.backend_unavailable
        << " keyframe(s) could not reach the backend; the sidecar is partial\n";
    return kUnavailable;
  }
  return kOk;
}

int cmd_process(const CommonOptions& o, bool resume, std::ostream& out, std::ostream& err) {
  Script script = load_script(o.script_path);
  RunConfig config = run_config(o);
  config.resume = resume;
  const RunSummary summary = process_video(config, script);
  print_summary(out, summary);
  if (summary.backend_unavailable > 0) {
    err << summary.backend_unavailable
        << " keyframe(s) could not reach the backend; rerun with --resume to retry them\n";
    return kUnavailable;
  }
  return kOk;
}

std::optional<std::int64_t> index_from_name(const std::string& path) {
  const std::string name = fs::path(path).filename().string();
  const auto frames_like = name.rfind("frame_", 0) == 0 && name.size() > 10;
  if (!frames_like) return std::nullopt;
  try {
    return std::stoll(name.substr(6));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct PreviewOptions {
  std::string frame_path;
  std::int64_t frame_index = -1;
  std::string prompt;
  std::string cue_id;
};

int cmd_preview(const CommonOptions& o, const PreviewOptions& p, std::ostream& out,
                std::ostream& err) {
  Cue cue;
  if (!o.script_path.empty()) {
    const Script script = load_script(o.script_path);
    auto it = std::find_if(script.cues.begin(), script.cues.end(),
                           [&](const Cue& c) { return c.id == p.cue_id; });
    if (p.cue_id.empty() && script.cues.size() == 1) it = script.cues.begin();
    if (it == script.cues.end()) {
      err << "cue '" << p.cue_id << "' not found in " << o.script_path << "\n";
      return kUsage;
    }
    cue = *it;
  }
  if (!p.prompt.empty()) {
    cue.source_prompt = p.prompt;
    cue.prompt = normalize_prompt(p.prompt);
  }
  if (cue.id.empty()) cue.id = "preview";

  const std::int64_t frame_index =
      p.frame_index >= 0 ? p.frame_index : index_from_name(p.frame_path).value_or(0);
  const Image frame = read_png(p.frame_path);

  const fs::path out_dir = o.out_dir.empty() ? fs::path(p.frame_path).parent_path() : fs::path(o.out_dir);
  fs::create_directories(out_dir.empty() ? fs::path(".") : out_dir);
  const std::string stem = fs::path(p.frame_path).stem().string();
  const fs::path panel_a = out_dir / (stem + ".a.png");
  const fs::path panel_b = out_dir / (stem + ".b.png");
  const fs::path panel_c = out_dir / (stem + ".c.png");
  fs::copy_file(p.frame_path, panel_a, fs::copy_options::overwrite_existing);

  std::optional<SidecarRecord> record;
  if (!o.sidecar_path.empty() || !o.reuse_sidecar.empty()) {
    const std::string path = !o.sidecar_path.empty() ? o.sidecar_path : o.reuse_sidecar;
    const Sidecar sidecar = load_sidecar(path);
    for (const SidecarRecord& r : sidecar.records) {
      if (r.frame_index != frame_index) continue;
      if (cue.prompt.empty() || r.prompt == cue.prompt) {
        record = r;
        break;
      }
    }
    if (record && cue.prompt.empty()) {
      cue.prompt = record->prompt;
      cue.source_prompt = record->prompt;
    }
  } else {
    if (cue.prompt.empty()) {
      err << "preview needs --prompt, --script/--cue or --sidecar\n";
      return kUsage;
    }
    auto backend = make_backend(backend_config(o));
    const DetectionParams params{o.box_threshold, o.text_threshold};
    record = query_keyframe(FrameRequest{frame_index, frame}, cue, *backend, params);
    if (!record) {
      err << "backend unavailable\n";
      return kUnavailable;
    }
  }

  if (!record || !record->detection || !record->mask) {
    err << "no detection for frame " << frame_index << " prompt '" << cue.prompt
        << "'; wrote only " << panel_a.string() << "\n";
    return kDataError;
  }
  const BinaryMask mask = rle_decode(*record->mask);
  if (mask.width != frame.width || mask.height != frame.height) {
    throw Error(ErrorCode::kDimsMismatch, "recorded mask does not match the frame");
  }
  write_png(panel_b.string(), render_detection_panel(frame, record->detection->box, mask));
  write_png(panel_c.string(),
            render_effect_panel(frame, mask, cue, effect_override(o).value_or(cue.effect)));
  out << panel_a.string() << "\n" << panel_b.string() << "\n" << panel_c.string() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Script-driven attention guidance for 360-degree equirectangular video.",
               "scriptfocus"};
  app.fallthrough();
  app.require_subcommand(1);
  // Repeating a flag overrides the earlier value, so wrapper scripts can append.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_config("--config", "", "key = value file; command-line flags take precedence");

  CommonOptions o;
  app.add_option("--script", o.script_path, "Attention script (cue blocks)");
  app.add_option("--frames", o.frames_dir, "Directory of input frame_%06d.png files");
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--sidecar", o.sidecar_path,
                 "Sidecar written by this run (default <out>/sidecar.json)");
  app.add_option("--reuse-sidecar", o.reuse_sidecar,
                 "Replay keyframes from this sidecar instead of calling the backend");
  app.add_option("--backend", o.backend, "Detection backend")
      ->check(CLI::IsMember({"remote", "fixture"}))
      ->capture_default_str();
  app.add_option("--endpoint", o.endpoint, "Inference service URL (remote backend)");
  app.add_option("--fixture", o.fixture, "Fixture/sidecar file (fixture backend)");
  app.add_option("--fps", o.fps, "Frame rate of the frame sequence");
  app.add_option("--keyframe-interval", o.keyframe_interval, "Query the backend every N frames")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--grace-keyframes", o.grace_keyframes,
                 "Missed keyframes a region is held before it is dropped")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--ema-alpha", o.ema_alpha, "Smoothing factor for the tracked box center")
      ->capture_default_str();
  app.add_option("--box-threshold", o.box_threshold, "Minimum detection score")
      ->capture_default_str();
  app.add_option("--text-threshold", o.text_threshold, "Minimum phrase-token score")
      ->capture_default_str();
  app.add_option("--request-timeout-ms", o.request_timeout_ms, "Per-request timeout (remote)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-in-flight", o.max_in_flight, "Concurrent backend requests")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--workers", o.workers, "Compositing threads (0 = all CPUs)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--effect", o.effect, "Override every cue's effect")
      ->check(CLI::IsMember({"vignette", "desaturate"}));
  app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off")
      ->capture_default_str();

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse a script and print its cues");
  validate->add_option("script", validate_path, "Script to check");

  bool dry_run = false;
  auto* detect = app.add_subcommand("detect", "Run only the keyframe detection phase");
  detect->add_flag("--dry-run", dry_run, "Print planned keyframes per cue; no backend calls");

  bool resume = false;
  auto* process = app.add_subcommand("process", "Render the attention effect on every frame");
  process->add_flag("--resume", resume,
                    "Continue an interrupted run from its sidecar and existing outputs");

  PreviewOptions p;
  auto* preview = app.add_subcommand("preview", "Write the a/b/c panel triple for one frame");
  preview->add_option("--frame", p.frame_path, "Input frame PNG")->required();
  preview->add_option("--frame-index", p.frame_index,
                      "Frame index for sidecar/fixture lookup (default: from the file name)");
  preview->add_option("--prompt", p.prompt, "Object to look for");
  preview->add_option("--cue", p.cue_id, "Cue id in --script supplying prompt and parameters");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("scriptfocus", sink);
  logger->set_level(spdlog::level::from_str(o.log_level));
  logger->set_pattern("[%l] %v");
  auto previous_logger = spdlog::default_logger();
  spdlog::set_default_logger(logger);
  struct RestoreLogger {
    std::shared_ptr<spdlog::logger> logger;
    ~RestoreLogger() { spdlog::set_default_logger(logger); }
  } restore{previous_logger};

  try {
    if (*validate) {
      const std::string path = validate_path.empty() ? o.script_path : validate_path;
      if (path.empty()) {
        err << "validate needs a script path\n";
        return kUsage;
      }
      return cmd_validate(path, out, err);
    }
    if (*detect) {
      if (o.script_path.empty() || (!dry_run && o.frames_dir.empty()) || o.fps <= 0.0) {
        err << "detect needs --script, --frames and --fps\n";
        return kUsage;
      }
      return cmd_detect(o, dry_run, out, err);
    }
    if (*process) {
      if (o.script_path.empty() || o.frames_dir.empty() || o.out_dir.empty() || o.fps <= 0.0) {
        err << "process needs --script, --frames, --out and --fps\n";
        return kUsage;
      }
      return cmd_process(o, resume, out, err);
    }
    if (*preview) return cmd_preview(o, p, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSoftware;
  }
  return kUsage;
}

}  // namespace scriptfocus::cli
