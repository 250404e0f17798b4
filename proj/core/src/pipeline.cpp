#include "scriptfocus/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "scriptfocus/effects.hpp"
#include "scriptfocus/error.hpp"
#include "scriptfocus/frame_io.hpp"
#include "scriptfocus/png_io.hpp"

namespace scriptfocus {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (keyframe_interval < 1) throw Error(ErrorCode::kInvalidArgument, "keyframe interval must be >= 1");
  if (!(fps > 0.0) || !std::isfinite(fps)) throw Error(ErrorCode::kInvalidArgument, "fps must be > 0");
  if (grace_keyframes < 0) throw Error(ErrorCode::kInvalidArgument, "grace keyframes must be >= 0");
  if (!(ema_alpha > 0.0 && ema_alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ema_alpha must lie in (0, 1]");
  }
  if (workers < 0) throw Error(ErrorCode::kInvalidArgument, "workers must be >= 0");
  params.validate();
}

std::string RunConfig::effective_sidecar_path() const {
  if (!sidecar_path.empty()) return sidecar_path;
  if (output_dir.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no sidecar path and no output directory");
  }
  return (fs::path(output_dir) / "sidecar.json").string();
}

FrameSpan cue_frame_span(const Cue& cue, double fps) {
  FrameSpan span;
  span.first = static_cast<std::int64_t>(std::ceil(static_cast<double>(cue.start.millis) * fps / 1000.0));
  span.last = static_cast<std::int64_t>(std::ceil(static_cast<double>(cue.end.millis) * fps / 1000.0)) - 1;
  if (span.last < span.first) {
    throw Error(ErrorCode::kEmptySpan, "cue '" + cue.id + "' covers no frame at " +
                                           std::to_string(fps) + " fps");
  }
  return span;
}

std::vector<std::int64_t> plan_keyframes(const FrameSpan& span, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "keyframe interval must be >= 1");
  std::vector<std::int64_t> frames;
  for (std::int64_t f = span.first; f <= span.last; f += n) frames.push_back(f);
  if (frames.back() != span.last) frames.push_back(span.last);
  return frames;
}

std::vector<std::int64_t> plan_keyframes(const Cue& cue, double fps, int n) {
  return plan_keyframes(cue_frame_span(cue, fps), n);
}

std::vector<CuePlan> plan_run(const Script& script, double fps, int n, std::int64_t first_frame,
                              std::int64_t last_frame) {
  std::vector<CuePlan> plans;
  for (std::size_t i = 0; i < script.cues.size(); ++i) {
    CuePlan plan;
    plan.cue_index = i;
    FrameSpan span;
    try {
      span = cue_frame_span(script.cues[i], fps);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptySpan) throw;
      spdlog::warn("{}", e.what());
      plans.push_back(plan);
      continue;
    }
    span.first = std::max(span.first, first_frame);
    span.last = std::min(span.last, last_frame);
    if (span.first <= span.last) {
      plan.span = span;
      plan.keyframes = plan_keyframes(span, n);
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct FrameInventory {
  std::map<std::int64_t, std::string> paths;
  int width = 0;
  int height = 0;
};

FrameInventory scan_frames(const std::string& dir) {
  FrameInventory inv;
  inv.paths = list_frames(dir);
  if (inv.paths.empty()) {
    throw Error(ErrorCode::kInputMissing, "no frame_%06d.png files in '" + dir + "'");
  }
  for (const auto& [index, path] : inv.paths) {
    const PngDims dims = read_png_dims(path);
    if (inv.width == 0) {
      inv.width = dims.width;
      inv.height = dims.height;
      if (inv.height <= 0 || inv.width != 2 * inv.height) {
        throw Error(ErrorCode::kDimsInconsistent,
                    path + " is " + std::to_string(dims.width) + "x" +
                        std::to_string(dims.height) + ", expected a 2:1 equirectangular frame");
      }
    } else if (dims.width != inv.width || dims.height != inv.height) {
      throw Error(ErrorCode::kDimsInconsistent, path + " differs in size from the first frame");
    }
  }
  return inv;
}

Image load_frame(const FrameInventory& inv, std::int64_t index) {
  auto it = inv.paths.find(index);
  if (it == inv.paths.end()) {
    throw Error(ErrorCode::kInputMissing, "missing input " + frame_filename(index));
  }
  Image image = read_png(it->second);
  if (image.width != inv.width || image.height != inv.height) {
    throw Error(ErrorCode::kDimsInconsistent, it->second + " changed size while reading");
  }
  return image;
}

// Record lookups keyed the same way as fixtures: (frame_index, prompt).
class RecordCache {
 public:
  void add(const Sidecar& sidecar) {
    for (const SidecarRecord& r : sidecar.records) records_.try_emplace({r.frame_index, r.prompt}, r);
  }
  const SidecarRecord* find(std::int64_t frame, const std::string& prompt) const {
    auto it = records_.find({frame, prompt});
    return it == records_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::pair<std::int64_t, std::string>, SidecarRecord> records_;
};

// Outcome of the keyframe phase: one slot per planned (cue, keyframe).
struct KeyframeTable {
  // records[plan][k] is empty when the backend was unavailable.
  std::vector<std::vector<std::optional<SidecarRecord>>> records;
  Sidecar sidecar;
};

Sidecar collect_sidecar(const RunConfig& config, const std::vector<CuePlan>& plans,
                        const std::vector<std::vector<std::optional<SidecarRecord>>>& records) {
  struct Entry {
    std::int64_t frame;
    std::size_t cue;
    const SidecarRecord* record;
  };
  std::vector<Entry> entries;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    for (std::size_t k = 0; k < plans[p].keyframes.size(); ++k) {
      if (records[p][k]) entries.push_back({plans[p].keyframes[k], plans[p].cue_index, &*records[p][k]});
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.cue < b.cue;
  });
  Sidecar sidecar;
  sidecar.params = config.params;
  for (const Entry& e : entries) sidecar.records.push_back(*e.record);
  return sidecar;
}

KeyframeTable run_keyframes(const RunConfig& config, const Script& script,
                            const FrameInventory& inv, const std::vector<CuePlan>& plans,
                            RunSummary& summary) {
  RecordCache cache;
  if (!config.reuse_sidecar_path.empty()) cache.add(load_sidecar(config.reuse_sidecar_path));
  const std::string sidecar_path = config.effective_sidecar_path();
  if (config.resume && fs::exists(sidecar_path)) cache.add(load_sidecar(sidecar_path));

  KeyframeTable table;
  table.records.resize(plans.size());

  // Keyframes still needing a backend call, grouped by frame so each frame
  // is decoded once.
  std::map<std::int64_t, std::vector<std::pair<std::size_t, std::size_t>>> pending;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    const Cue& cue = script.cues[plans[p].cue_index];
    table.records[p].resize(plans[p].keyframes.size());
    for (std::size_t k = 0; k < plans[p].keyframes.size(); ++k) {
      const std::int64_t frame = plans[p].keyframes[k];
      ++summary.keyframes_planned;
      if (const SidecarRecord* hit = cache.find(frame, cue.prompt)) {
        SidecarRecord r = *hit;
        r.cue_id = cue.id;
        table.records[p][k] = std::move(r);
        ++summary.records_reused;
      } else {
        pending[frame].emplace_back(p, k);
      }
    }
  }

  if (!pending.empty()) {
    std::unique_ptr<Backend> backend = make_backend(config.backend);
    std::vector<std::int64_t> frames;
    for (const auto& [frame, _] : pending) frames.push_back(frame);

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= frames.size()) return;
        const std::int64_t frame_index = frames[i];
        try {
          const Image image = load_frame(inv, frame_index);
          const FrameRequest request{frame_index, image};
          for (const auto& [p, k] : pending.at(frame_index)) {
            const Cue& cue = script.cues[plans[p].cue_index];
            auto record = query_keyframe(request, cue, *backend, config.params);
            std::lock_guard lock(mutex);
            ++summary.backend_queries;
            if (!record) ++summary.backend_unavailable;
            table.records[p][k] = std::move(record);
          }
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!first_error) first_error = std::current_exception();
          failed = true;
        }
      }
    };
    const int threads = std::max(1, std::min<int>(config.backend.max_in_flight,
                                                  static_cast<int>(frames.size())));
    {
      std::vector<std::jthread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (first_error) {
      write_sidecar(collect_sidecar(config, plans, table.records), sidecar_path);
      std::rethrow_exception(first_error);
    }
  }

  table.sidecar = collect_sidecar(config, plans, table.records);
  for (const SidecarRecord& r : table.sidecar.records) {
    if (r.source == RecordSource::kFallbackBox) ++summary.fallback_masks;
  }
  write_sidecar(table.sidecar, sidecar_path);
  return table;
}

struct PreparedRun {
  FrameInventory inventory;
  std::vector<CuePlan> plans;
};

PreparedRun prepare(const RunConfig& config, const Script& script) {
  config.validate();
  PreparedRun run;
  run.inventory = scan_frames(config.frames_dir);
  run.plans = plan_run(script, config.fps, config.keyframe_interval,
                       run.inventory.paths.begin()->first, run.inventory.paths.rbegin()->first);
  return run;
}

// Region state per keyframe of one cue, plus lazily built attenuation fields.
struct CueTrack {
  const Cue* cue = nullptr;
  const CuePlan* plan = nullptr;
  std::vector<RegionState> states;
  std::vector<std::shared_ptr<const AttenuationField>> fields;
  std::vector<bool> field_built;
};

struct FrameJob {
  std::int64_t index = 0;
  std::string input_path;
  std::string output_path;
  struct Layer {
    std::shared_ptr<const AttenuationField> field;
    double strength;
    double floor_luma;
    double e;
    EffectKind effect;
  };
  std::vector<Layer> layers;
  std::vector<std::uint8_t> encoded;
  std::exception_ptr error;
};

}  // namespace

RunSummary detect_keyframes(const RunConfig& config, const Script& script) {
  const auto t0 = Clock::now();
  RunSummary summary;
  PreparedRun run = prepare(config, script);
  summary.frames_total = static_cast<std::int64_t>(run.inventory.paths.size());
  run_keyframes(config, script, run.inventory, run.plans, summary);
  summary.detect_seconds = seconds_since(t0);
  return summary;
}

RunSummary process_video(const RunConfig& config, const Script& script) {
  auto t0 = Clock::now();
  RunSummary summary;
  if (config.output_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "no output directory");
  PreparedRun run = prepare(config, script);
  const FrameInventory& inv = run.inventory;
  summary.frames_total = static_cast<std::int64_t>(inv.paths.size());

  std::error_code ec;
  if (fs::exists(config.output_dir) &&
      fs::equivalent(config.frames_dir, config.output_dir, ec)) {
    throw Error(ErrorCode::kInvalidArgument, "output directory must differ from the input");
  }
  fs::create_directories(config.output_dir);

  KeyframeTable table = run_keyframes(config, script, inv, run.plans, summary);
  summary.detect_seconds = seconds_since(t0);
  t0 = Clock::now();

  // Replay keyframes in order to get the tracked state at each one.
  const TrackingConfig tracking = config.tracking();
  std::vector<CueTrack> tracks;
  for (std::size_t p = 0; p < run.plans.size(); ++p) {
    CueTrack track;
    track.plan = &run.plans[p];
    track.cue = &script.cues[run.plans[p].cue_index];
    std::optional<RegionState> state;
    for (std::size_t k = 0; k < track.plan->keyframes.size(); ++k) {
      state = apply_record(state, *track.cue, table.records[p][k], inv.width, tracking);
      switch (state->status) {
        case RegionStatus::kActive: ++summary.keyframes_active; break;
        case RegionStatus::kHeld: ++summary.keyframes_held; break;
        case RegionStatus::kLost: ++summary.keyframes_lost; break;
      }
      track.states.push_back(*state);
    }
    track.fields.resize(track.states.size());
    track.field_built.resize(track.states.size(), false);
    tracks.push_back(std::move(track));
  }

  const int workers = config.workers > 0
                          ? config.workers
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  // Builds the job list for one frame; fields are computed here, on the
  // coordinator, the first time a keyframe's region is needed.
  auto make_job = [&](std::int64_t index, const std::string& input_path) {
    FrameJob job;
    job.index = index;
    job.input_path = input_path;
    job.output_path = (fs::path(config.output_dir) / frame_filename(index)).string();
    const double t_ms = frame_time_ms(index, config.fps);
    // A zero-intensity layer still takes part in the max-multiplier merge;
    // only a frame where every layer is at zero is copied through.
    bool any_gain = false;
    for (CueTrack& track : tracks) {
      if (!track.plan->span || !track.plan->span->contains(index)) continue;
      const auto& keyframes = track.plan->keyframes;
      const auto it = std::upper_bound(keyframes.begin(), keyframes.end(), index);
      if (it == keyframes.begin()) continue;
      const std::size_t k = static_cast<std::size_t>(it - keyframes.begin()) - 1;
      const Cue& cue = *track.cue;
      const EffectKind effect = config.effect_override.value_or(cue.effect);
      const double e = envelope(cue, t_ms);
      const double gain = effect == EffectKind::kVignette ? cue.strength * e * (1.0 - cue.floor_luma)
                                                          : cue.strength * e;
      any_gain |= gain != 0.0;
      if (!track.field_built[k]) {
        track.field_built[k] = true;
        if (auto region = region_for_frame(track.states[k], index)) {
          if (count_set(region->mask) > 0) {
            track.fields[k] = std::make_shared<const AttenuationField>(
                attenuation_field(region->mask, cue.feather_inner_px, cue.feather_outer_px));
          }
        }
      }
      if (!track.fields[k]) continue;
      job.layers.push_back({track.fields[k], cue.strength, cue.floor_luma, e, effect});
    }
    if (!any_gain) job.layers.clear();
    return job;
  };

  auto render = [](FrameJob& job, int width, int height) {
    try {
      Image frame = read_png(job.input_path);
      if (frame.width != width || frame.height != height) {
        throw Error(ErrorCode::kDimsInconsistent, job.input_path + " changed size");
      }
      std::vector<EffectLayer> layers;
      for (const auto& l : job.layers) {
        layers.push_back({std::cref(*l.field), l.strength, l.floor_luma, l.e, l.effect});
      }
      job.encoded = encode_png(combine_cues(frame, layers, 1));
    } catch (...) {
      job.error = std::current_exception();
    }
  };

  std::int64_t written = 0;
  const std::size_t chunk = static_cast<std::size_t>(workers) * 2;
  auto it = inv.paths.begin();
  while (it != inv.paths.end()) {
    std::vector<FrameJob> jobs;
    for (; it != inv.paths.end() && jobs.size() < chunk; ++it) {
      if (config.resume && fs::exists((fs::path(config.output_dir) / frame_filename(it->first)))) {
        ++summary.frames_kept;
        continue;
      }
      jobs.push_back(make_job(it->first, it->second));
    }

    std::vector<FrameJob*> to_render;
    for (FrameJob& job : jobs) {
      if (!job.layers.empty()) to_render.push_back(&job);
    }
    {
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < to_render.size(); i = next.fetch_add(1)) {
          render(*to_render[i], inv.width, inv.height);
        }
      };
      const int threads = std::min<int>(workers, static_cast<int>(to_render.size()));
      std::vector<std::jthread> pool;
      for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
      worker();
    }

    for (FrameJob& job : jobs) {
      if (config.stop_after_frames && written >= *config.stop_after_frames) {
        summary.stopped_early = true;
        summary.render_seconds = seconds_since(t0);
        return summary;
      }
      if (job.error) std::rethrow_exception(job.error);
      if (job.layers.empty()) {
        const std::string tmp = job.output_path + ".partial";
        fs::copy_file(job.input_path, tmp, fs::copy_options::overwrite_existing);
        fs::rename(tmp, job.output_path);
        ++summary.frames_copied;
      } else {
        write_file_atomic(job.output_path, job.encoded.data(), job.encoded.size());
        ++summary.frames_rendered;
      }
      ++written;
    }
  }
  if (config.stop_after_frames && written >= *config.stop_after_frames &&
      summary.frames_kept + written < summary.frames_total) {
    summary.stopped_early = true;
  }
  summary.render_seconds = seconds_since(t0);
  return summary;
}

}  // namespace scriptfocus
