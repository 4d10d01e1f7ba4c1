#include "run_config.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "vilenkin/error.hpp"

namespace vilenkin::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ParseError("config key '" + std::string(key) + "': bad number '" + std::string(value) + "'");
  return out;
}

void apply_line(RunConfig& cfg, std::string_view line) {
  line = trim(line);
  if (line.empty()) return;
  const auto eq = line.find('=');
  if (eq == std::string_view::npos)
    throw ParseError("config line without '=': '" + std::string(line) + "'");
  const auto key = trim(line.substr(0, eq));
  if (key.empty()) throw ParseError("config line with empty key");
  cfg.set(key, trim(line.substr(eq + 1)));
}

}  // namespace

std::string format_double_exact(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void RunConfig::set(std::string_view key, std::string_view value) {
  if (key == "command") command = value;
  else if (key == "m") generators = value;
  else if (key == "N") N = parse_number<std::size_t>(key, value);
  else if (key == "p") p = parse_number<double>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") out_dir = value;
  else if (key == "format") format = value;
  else options[std::string(key)] = value;
}

std::optional<std::string> RunConfig::get(const std::string& key) const {
  const auto it = options.find(key);
  if (it == options.end()) return std::nullopt;
  return it->second;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

std::string RunConfig::to_text() const { return header(""); }

std::map<std::string, std::string> RunConfig::entries() const {
  std::map<std::string, std::string> all = options;
  all["command"] = command;
  all["m"] = generators;
  all["N"] = std::to_string(N);
  all["p"] = format_double_exact(p);
  all["seed"] = std::to_string(seed);
  if (!format.empty()) all["format"] = format;
  return all;
}

std::string RunConfig::header(std::string_view prefix) const {
  std::string out;
  for (const auto& [k, v] : entries()) {
    out += prefix;
    out += k + "=" + v + "\n";
  }
  return out;
}

bool RunConfig::wants(std::string_view fmt) const {
  std::string_view rest = format;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    if (trim(rest.substr(0, comma)) == fmt) return true;
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return false;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("config JSON: ") + e.what());
    }
    if (!j.contains("run_config") || !j["run_config"].is_object())
      throw ParseError("JSON artifact has no run_config");
    for (const auto& [k, v] : j["run_config"].items()) {
      if (!v.is_string()) throw ParseError("run_config values must be strings");
      cfg.set(k, v.get<std::string>());
    }
    return cfg;
  }

  std::vector<std::string_view> lines;
  bool embedded = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    lines.push_back(line);
    if (line.rfind("# ", 0) == 0 && line.find('=') != std::string_view::npos) embedded = true;
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  for (auto line : lines) {
    if (embedded) {
      if (line.rfind("# ", 0) == 0 && line.find('=') != std::string_view::npos)
        apply_line(cfg, line.substr(2));
    } else if (!trim(line).empty() && trim(line)[0] != '#') {
      apply_line(cfg, line);
    }
  }
  return cfg;
}

std::string resolve_out_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return kDefaultOutDir;
}

}  // namespace vilenkin::cli
