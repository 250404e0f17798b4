#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <mutex>

#include "httplib.h"
#include "json.hpp"
#include "scriptfocus/detection.hpp"
#include "scriptfocus/error.hpp"
#include "scriptfocus/png_io.hpp"

namespace scriptfocus {
namespace {

using nlohmann::json;

std::string base64(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

// Caps concurrent requests at max_in_flight.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(int limit) : available_(limit) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [this] { return available_ > 0; });
    --available_;
  }
  void release() {
    {
      std::lock_guard lock(mutex_);
      ++available_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int available_;
};

class InFlightSlot {
 public:
  explicit InFlightSlot(InFlightLimiter& limiter) : limiter_(limiter) { limiter_.acquire(); }
  ~InFlightSlot() { limiter_.release(); }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  InFlightLimiter& limiter_;
};

class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(const BackendConfig& config)
      : config_(config), limiter_(config.max_in_flight) {
    const std::string& url = config.endpoint_url;
    const auto scheme = url.find("://");
    const auto path_start = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_start == std::string::npos) {
      host_ = url;
    } else {
      host_ = url.substr(0, path_start);
      base_path_ = url.substr(path_start);
      while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
    }
  }

  std::vector<Detection> detect_candidates(const FrameRequest& frame, std::string_view prompt,
                                           const DetectionParams& params) override {
    json body = {{"image_png_b64", base64(encode_png(frame.image))},
                 {"prompt", std::string(prompt)},
                 {"box_threshold", params.box_threshold},
                 {"text_threshold", params.text_threshold}};
    const json response = post("/v1/detect", body);
    std::vector<Detection> out;
    try {
      for (const json& d : response.at("detections")) {
        const auto& box = d.at("box");
        if (!box.is_array() || box.size() != 4) {
          throw Error(ErrorCode::kBackendError, "detection box must have 4 numbers");
        }
        Detection det;
        det.box = BBox{box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                       box[3].get<double>()};
        det.score = d.at("score").get<double>();
        det.phrase = d.value("phrase", std::string{});
        if (!std::isfinite(det.box.x0) || !std::isfinite(det.box.y0) ||
            !std::isfinite(det.box.x1) || !std::isfinite(det.box.y1) ||
            !(det.score >= 0.0 && det.score <= 1.0)) {
          throw Error(ErrorCode::kBackendError, "detection has non-finite box or bad score");
        }
        const double w = frame.image.width;
        const double h = frame.image.height;
        det.box.x0 = std::clamp(det.box.x0, 0.0, w);
        det.box.x1 = std::clamp(det.box.x1, 0.0, w);
        det.box.y0 = std::clamp(det.box.y0, 0.0, h);
        det.box.y1 = std::clamp(det.box.y1, 0.0, h);
        if (det.box.x1 <= det.box.x0 || det.box.y1 <= det.box.y0) {
          spdlog::warn("dropping degenerate detection for '{}'", prompt);
          continue;
        }
        out.push_back(std::move(det));
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBackendError, std::string("bad /v1/detect response: ") + e.what());
    }
    return out;
  }

  MaskRLE segment_box(const FrameRequest& frame, std::string_view, const BBox& box) override {
    json body = {{"image_png_b64", base64(encode_png(frame.image))},
                 {"box", {box.x0, box.y0, box.x1, box.y1}}};
    const json response = post("/v1/segment", body);
    try {
      const json& m = response.at("mask");
      MaskRLE rle;
      rle.height = m.at("height").get<int>();
      rle.width = m.at("width").get<int>();
      rle.counts = m.at("counts").get<std::vector<std::uint32_t>>();
      return rle;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBackendError, std::string("bad /v1/segment response: ") + e.what());
    }
  }

  HealthStatus health() override {
    const json response = send([&](httplib::Client& cli) { return cli.Get(base_path_ + "/v1/health"); },
                               "/v1/health");
    try {
      return {response.at("status").get<std::string>(),
              response.value("detector", std::string{}),
              response.value("segmenter", std::string{})};
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBackendError, std::string("bad /v1/health response: ") + e.what());
    }
  }

 private:
  json post(const std::string& path, const json& body) {
    const std::string payload = body.dump();
    return send(
        [&](httplib::Client& cli) {
          return cli.Post(base_path_ + path, payload, "application/json");
        },
        path);
  }

  template <typename Call>
  json send(Call&& call, const std::string& path) {
    InFlightSlot slot(limiter_);
    std::string last_failure;
    for (int attempt = 0; attempt < 2; ++attempt) {
      httplib::Client cli(host_);
      const auto timeout = std::chrono::milliseconds(config_.request_timeout_ms);
      cli.set_connection_timeout(timeout);
      cli.set_read_timeout(timeout);
      cli.set_write_timeout(timeout);
      auto res = call(cli);
      if (!res) {
        last_failure = httplib::to_string(res.error());
        spdlog::warn("{} attempt {} failed: {}", path, attempt + 1, last_failure);
        continue;
      }
      if (res->status == 503) {
        last_failure = "service loading (503)";
        spdlog::warn("{} attempt {} failed: {}", path, attempt + 1, last_failure);
        continue;
      }
      if (res->status != 200) {
        throw Error(ErrorCode::kBackendError,
                    path + " returned HTTP " + std::to_string(res->status) + ": " + res->body);
      }
      try {
        return json::parse(res->body);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kBackendError, path + " returned invalid JSON: " + e.what());
      }
    }
    throw Error(ErrorCode::kBackendUnavailable, path + ": " + last_failure);
  }

  BackendConfig config_;
  InFlightLimiter limiter_;
  std::string host_;
  std::string base_path_;
};

}  // namespace

std::unique_ptr<Backend> make_remote_backend(const BackendConfig& config) {
  return std::make_unique<RemoteBackend>(config);
}

}  // namespace scriptfocus
