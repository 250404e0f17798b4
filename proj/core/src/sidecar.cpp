#include "scriptfocus/sidecar.hpp"

#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scriptfocus/error.hpp"

namespace scriptfocus {
namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedFixture, what);
}

json params_to_json(const DetectionParams& p) {
  return {{"box_threshold", p.box_threshold}, {"text_threshold", p.text_threshold}};
}

DetectionParams params_from_json(const json& j) {
  DetectionParams p;
  p.box_threshold = j.at("box_threshold").get<double>();
  p.text_threshold = j.at("text_threshold").get<double>();
  return p;
}

json detection_to_json(const Detection& d) {
  return {{"box", {d.box.x0, d.box.y0, d.box.x1, d.box.y1}},
          {"score", d.score},
          {"phrase", d.phrase}};
}

Detection detection_from_json(const json& j) {
  const auto& box = j.at("box");
  if (!box.is_array() || box.size() != 4) malformed("box must be [x0,y0,x1,y1]");
  Detection d;
  d.box = BBox{box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
               box[3].get<double>()};
  d.score = j.at("score").get<double>();
  d.phrase = j.value("phrase", std::string{});
  return d;
}

json mask_to_json(const MaskRLE& m) {
  return {{"height", m.height}, {"width", m.width}, {"counts", m.counts}};
}

MaskRLE mask_from_json(const json& j) {
  MaskRLE m;
  m.height = j.at("height").get<int>();
  m.width = j.at("width").get<int>();
  m.counts = j.at("counts").get<std::vector<std::uint32_t>>();
  std::uint64_t sum = 0;
  for (auto c : m.counts) sum += c;
  if (m.height < 0 || m.width < 0 ||
      sum != static_cast<std::uint64_t>(m.height) * static_cast<std::uint64_t>(m.width)) {
    malformed("mask counts do not cover height*width");
  }
  return m;
}

RecordSource source_from_string(const std::string& s) {
  if (s == "live") return RecordSource::kLive;
  if (s == "fallback_box") return RecordSource::kFallbackBox;
  if (s == "fixture") return RecordSource::kFixture;
  malformed("unknown record source '" + s + "'");
}

}  // namespace

std::string_view to_string(RecordSource source) {
  switch (source) {
    case RecordSource::kLive: return "live";
    case RecordSource::kFallbackBox: return "fallback_box";
    case RecordSource::kFixture: return "fixture";
  }
  return "live";
}

std::string sidecar_to_json(const Sidecar& sidecar) {
  json records = json::array();
  for (const SidecarRecord& r : sidecar.records) {
    json candidates = json::array();
    for (const Detection& d : r.candidates) candidates.push_back(detection_to_json(d));
    records.push_back({
        {"frame_index", r.frame_index},
        {"cue_id", r.cue_id},
        {"prompt", r.prompt},
        {"params", params_to_json(r.params)},
        {"candidates", std::move(candidates)},
        {"detection", r.detection ? detection_to_json(*r.detection) : json(nullptr)},
        {"mask", r.mask ? mask_to_json(*r.mask) : json(nullptr)},
        {"source", std::string(to_string(r.source))},
    });
  }
  json doc = {{"version", sidecar.version},
              {"params", params_to_json(sidecar.params)},
              {"records", std::move(records)}};
  return doc.dump(1) + "\n";
}

Sidecar sidecar_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) malformed("top level must be an object");
    const int version = doc.at("version").get<int>();
    if (version != kSidecarVersion) {
      malformed("unsupported sidecar version " + std::to_string(version));
    }
    Sidecar sidecar;
    sidecar.version = version;
    sidecar.params = params_from_json(doc.at("params"));
    for (const json& j : doc.at("records")) {
      SidecarRecord r;
      r.frame_index = j.at("frame_index").get<std::int64_t>();
      r.cue_id = j.value("cue_id", std::string{});
      r.prompt = j.at("prompt").get<std::string>();
      r.params = j.contains("params") ? params_from_json(j.at("params")) : sidecar.params;
      if (j.contains("candidates")) {
        for (const json& c : j.at("candidates")) r.candidates.push_back(detection_from_json(c));
      }
      if (j.contains("detection") && !j.at("detection").is_null()) {
        r.detection = detection_from_json(j.at("detection"));
      }
      if (j.contains("mask") && !j.at("mask").is_null()) r.mask = mask_from_json(j.at("mask"));
      if (!r.detection && r.mask) malformed("record has a mask but no detection");
      r.source = source_from_string(j.value("source", std::string("live")));
      sidecar.records.push_back(std::move(r));
    }
    return sidecar;
  } catch (const json::exception& e) {
    malformed(std::string("schema violation: ") + e.what());
  }
}

void write_sidecar(const Sidecar& sidecar, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << sidecar_to_json(sidecar);
    if (!out) throw Error(ErrorCode::kIo, "cannot write sidecar '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

Sidecar load_sidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInputMissing, "cannot open sidecar '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sidecar_from_json(buf.str());
}

FixtureBackend::FixtureBackend(Sidecar sidecar) : sidecar_(std::move(sidecar)) {
  for (std::size_t i = 0; i < sidecar_.records.size(); ++i) {
    const auto& r = sidecar_.records[i];
    index_.try_emplace({r.frame_index, r.prompt}, i);
  }
}

const SidecarRecord* FixtureBackend::find(std::int64_t frame_index, std::string_view prompt) const {
  auto it = index_.find({frame_index, std::string(prompt)});
  return it == index_.end() ? nullptr : &sidecar_.records[it->second];
}

std::vector<Detection> FixtureBackend::detect_candidates(const FrameRequest& frame,
                                                         std::string_view prompt,
                                                         const DetectionParams&) {
  const SidecarRecord* r = find(frame.frame_index, prompt);
  if (r == nullptr) {
    spdlog::warn("fixture has no entry for frame {} prompt '{}'", frame.frame_index, prompt);
    return {};
  }
  if (!r->candidates.empty()) return r->candidates;
  if (r->detection) return {*r->detection};
  return {};
}

MaskRLE FixtureBackend::segment_box(const FrameRequest& frame, std::string_view prompt,
                                    const BBox&) {
  const SidecarRecord* r = find(frame.frame_index, prompt);
  if (r == nullptr || !r->detection) {
    throw Error(ErrorCode::kBackendError, "fixture has no detection for frame " +
                                              std::to_string(frame.frame_index) + " prompt '" +
                                              std::string(prompt) + "'");
  }
  if (r->mask) return *r->mask;
  MaskRLE empty;
  empty.width = frame.image.width;
  empty.height = frame.image.height;
  empty.counts = {static_cast<std::uint32_t>(empty.width) * static_cast<std::uint32_t>(empty.height)};
  return empty;
}

HealthStatus FixtureBackend::health() { return {"ok", "fixture", "fixture"}; }

std::unique_ptr<FixtureBackend> load_fixture(const std::string& path) {
  return std::make_unique<FixtureBackend>(load_sidecar(path));
}

}  // namespace scriptfocus
