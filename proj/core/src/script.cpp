#include "scriptfocus/script.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "scriptfocus/error.hpp"

namespace scriptfocus {
namespace {

constexpr std::string_view kWhitespace = " \t\r\n\v\f";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kWhitespace);
  return s.substr(first, last - first + 1);
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::optional<double> to_real(std::string_view s) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string real_to_string(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto begin = s.find_first_not_of(kWhitespace, pos);
    if (begin == std::string_view::npos) break;
    auto end = s.find_first_of(kWhitespace, begin);
    if (end == std::string_view::npos) end = s.size();
    parts.push_back(s.substr(begin, end - begin));
    pos = end;
  }
  return parts;
}

[[noreturn]] void cue_error(int line, const std::string& message) {
  throw Error(ErrorCode::kMalformedCue, message, line);
}

struct PendingCue {
  Cue cue;
  int start_line = 0;
  bool has_id = false;
  bool has_prompt = false;
  std::set<std::string, std::less<>> seen_keys;
};

void apply_key(PendingCue& pending, std::string_view key, std::string_view value,
               int line) {
  if (!pending.seen_keys.insert(std::string(key)).second) {
    cue_error(line, "duplicate key '" + std::string(key) + "'");
  }
  Cue& cue = pending.cue;
  if (key == "prompt") {
    if (value.empty()) cue_error(line, "empty prompt");
    cue.source_prompt = std::string(value);
    cue.prompt = normalize_prompt(value);
    if (cue.prompt.empty()) cue_error(line, "prompt names no object");
    pending.has_prompt = true;
  } else if (key == "id") {
    if (value.empty() || value.find_first_of(kWhitespace) != std::string_view::npos) {
      cue_error(line, "id must be a single non-empty token");
    }
    cue.id = std::string(value);
    pending.has_id = true;
  } else if (key == "effect") {
    if (value == "vignette") {
      cue.effect = EffectKind::kVignette;
    } else if (value == "desaturate") {
      cue.effect = EffectKind::kDesaturate;
    } else {
      cue_error(line, "unknown effect '" + std::string(value) + "'");
    }
  } else if (key == "strength") {
    auto v = to_real(value);
    if (!v || *v < 0.0 || *v > 1.0) cue_error(line, "strength must be a number in [0,1]");
    cue.strength = *v;
  } else if (key == "floor") {
    auto v = to_real(value);
    if (!v || *v < 0.0 || *v > 1.0) cue_error(line, "floor must be a number in [0,1]");
    cue.floor_luma = *v;
  } else if (key == "feather") {
    const auto parts = split_ws(value);
    if (parts.size() != 2) cue_error(line, "feather takes two numbers: inner outer");
    auto inner = to_real(parts[0]);
    auto outer = to_real(parts[1]);
    if (!inner || !outer || *inner < 0.0 || *outer <= *inner) {
      cue_error(line, "feather requires 0 <= inner < outer");
    }
    cue.feather_inner_px = *inner;
    cue.feather_outer_px = *outer;
  } else if (key == "ramp") {
    const auto parts = split_ws(value);
    if (parts.size() != 2) cue_error(line, "ramp takes two integers: attack release");
    auto attack = to_int(parts[0]);
    auto release = to_int(parts[1]);
    if (!attack || !release || *attack < 0 || *release < 0) {
      cue_error(line, "ramp requires non-negative integer milliseconds");
    }
    cue.attack_ms = *attack;
    cue.release_ms = *release;
  } else {
    cue_error(line, "unknown key '" + std::string(key) + "'");
  }
}

}  // namespace

Timecode parse_timecode(std::string_view text) {
  auto fail = [&]() -> Timecode {
    throw Error(ErrorCode::kMalformedTimecode,
                "expected HH:MM:SS.mmm or MM:SS.mmm, got '" + std::string(text) + "'");
  };
  const auto dot = text.rfind('.');
  if (dot == std::string_view::npos) return fail();
  const auto millis_part = text.substr(dot + 1);
  if (millis_part.size() != 3 || !all_digits(millis_part)) return fail();

  std::vector<std::string_view> fields;
  std::string_view head = text.substr(0, dot);
  for (std::size_t pos = 0;;) {
    const auto colon = head.find(':', pos);
    fields.push_back(head.substr(pos, colon == std::string_view::npos ? head.npos : colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (fields.size() < 2 || fields.size() > 3) return fail();
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const bool is_hours = fields.size() == 3 && i == 0;
    if (!all_digits(fields[i])) return fail();
    if (!is_hours && fields[i].size() != 2) return fail();
    if (is_hours && (fields[i].size() < 2 || fields[i].size() > 6)) return fail();
  }
  const std::int64_t hours = fields.size() == 3 ? *to_int(fields[0]) : 0;
  const std::int64_t minutes = *to_int(fields[fields.size() - 2]);
  const std::int64_t seconds = *to_int(fields[fields.size() - 1]);
  if (minutes >= 60 || seconds >= 60) return fail();
  const std::int64_t millis = *to_int(millis_part);
  return Timecode{((hours * 60 + minutes) * 60 + seconds) * 1000 + millis};
}

std::string format_timecode(Timecode t) {
  const std::int64_t ms = t.millis % 1000;
  const std::int64_t total_s = t.millis / 1000;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld.%03lld",
                static_cast<long long>(total_s / 3600),
                static_cast<long long>((total_s / 60) % 60),
                static_cast<long long>(total_s % 60), static_cast<long long>(ms));
  return buf;
}

std::string_view to_string(EffectKind kind) {
  return kind == EffectKind::kVignette ? "vignette" : "desaturate";
}

std::string normalize_prompt(std::string_view prompt) {
  constexpr std::string_view kPrefix = "look at the ";
  prompt = trim(prompt);
  if (prompt.size() >= kPrefix.size()) {
    const bool match = std::equal(kPrefix.begin(), kPrefix.end(), prompt.begin(),
                                  [](char a, char b) {
                                    return a == std::tolower(static_cast<unsigned char>(b));
                                  });
    if (match) prompt = trim(prompt.substr(kPrefix.size()));
  }
  return std::string(prompt);
}

Script parse_script(std::string_view text) {
  std::vector<PendingCue> parsed;
  std::optional<PendingCue> current;

  auto finish = [&]() {
    if (!current) return;
    if (!current->has_prompt) cue_error(current->start_line, "cue has no prompt line");
    parsed.push_back(std::move(*current));
    current.reset();
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view line = trim(raw);

    if (line.empty()) {
      finish();
      if (nl == text.size()) break;
      continue;
    }
    if (line.front() == '#') {
      if (nl == text.size()) break;
      continue;
    }

    if (!current) {
      const auto arrow = line.find("-->");
      if (arrow == std::string_view::npos) {
        cue_error(line_no, "expected a time range 'start --> end'");
      }
      PendingCue pending;
      pending.start_line = line_no;
      try {
        pending.cue.start = parse_timecode(trim(line.substr(0, arrow)));
        pending.cue.end = parse_timecode(trim(line.substr(arrow + 3)));
      } catch (const Error& e) {
        cue_error(line_no, e.what());
      }
      if (pending.cue.end <= pending.cue.start) {
        cue_error(line_no, "cue end " + format_timecode(pending.cue.end) +
                               " is not after start " + format_timecode(pending.cue.start));
      }
      current = std::move(pending);
    } else {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) cue_error(line_no, "expected 'key: value'");
      apply_key(*current, trim(line.substr(0, colon)), trim(line.substr(colon + 1)), line_no);
    }
    if (nl == text.size()) break;
  }
  finish();

  Script script;
  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    PendingCue& p = parsed[i];
    if (!p.has_id) p.cue.id = "cue-" + std::to_string(i + 1);
    if (!ids.insert(p.cue.id).second) {
      cue_error(p.start_line, "duplicate cue id '" + p.cue.id + "'");
    }
    script.cues.push_back(std::move(p.cue));
  }
  std::stable_sort(script.cues.begin(), script.cues.end(),
                   [](const Cue& a, const Cue& b) { return a.start < b.start; });
  return script;
}

Script load_script(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInputMissing, "cannot open script '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Script script = parse_script(buf.str());
  script.source_path = path;
  return script;
}

std::string format_script(const Script& script) {
  std::string out;
  for (const Cue& cue : script.cues) {
    if (!out.empty()) out += '\n';
    out += format_timecode(cue.start) + " --> " + format_timecode(cue.end) + '\n';
    out += "id: " + cue.id + '\n';
    out += "prompt: " + cue.source_prompt + '\n';
    out += "effect: " + std::string(to_string(cue.effect)) + '\n';
    out += "strength: " + real_to_string(cue.strength) + '\n';
    out += "feather: " + real_to_string(cue.feather_inner_px) + ' ' +
           real_to_string(cue.feather_outer_px) + '\n';
    out += "ramp: " + std::to_string(cue.attack_ms) + ' ' + std::to_string(cue.release_ms) + '\n';
    out += "floor: " + real_to_string(cue.floor_luma) + '\n';
  }
  return out;
}

std::vector<Cue> active_cues(const Script& script, Timecode t) {
  std::vector<Cue> out;
  std::copy_if(script.cues.begin(), script.cues.end(), std::back_inserter(out),
               [t](const Cue& c) { return c.contains(t); });
  return out;
}

}  // namespace scriptfocus
