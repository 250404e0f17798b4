#pragma once

// Shape of the committed golden run. make_goldens and the acceptance suite
// must agree on every value here.
namespace scriptfocus::golden {

inline constexpr int kWidth = 512;
inline constexpr int kHeight = 256;
inline constexpr int kFrames = 10;
inline constexpr double kFps = 10.0;
inline constexpr int kKeyframeInterval = 3;

inline constexpr const char* kScriptFile = "golden_script.txt";
inline constexpr const char* kFixtureFile = "golden_fixture.json";
inline constexpr const char* kHashFile = "golden_hashes.txt";

}  // namespace scriptfocus::golden
