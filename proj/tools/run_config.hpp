#pragma once

// Reproducible run configuration: key=value text, embedded in every artifact.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vilenkin::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr const char* kOutDirEnv = "VILENKIN_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "vilenkin-out";

struct RunConfig {
  std::string command;
  std::string generators = "2^";
  std::size_t N = 8;
  double p = 0.5;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;  // not part of the artifact header
  std::string format;   // comma list of csv, json, svg, binary; empty = command default
  std::map<std::string, std::string> options;

  /// Assigns a known field or stores an option. Throws ParseError on a bad value.
  void set(std::string_view key, std::string_view value);

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;

  /// Every key with its text value, out_dir excluded.
  std::map<std::string, std::string> entries() const;

  /// Sorted key=value lines, out_dir excluded. Parsing this text gives back an equal config.
  std::string to_text() const;

  /// The same lines prefixed with `prefix` (e.g. "# ").
  std::string header(std::string_view prefix) const;

  bool wants(std::string_view fmt) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Reads a plain key=value file, or the embedded header of a CSV, SVG or JSON artifact.
RunConfig parse_config(std::string_view text);

std::string format_double_exact(double v);

/// flag > environment > default.
std::string resolve_out_dir(const std::optional<std::string>& flag);

}  // namespace vilenkin::cli
