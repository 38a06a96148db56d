#include "iis/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "iis/error.hpp"

namespace iis {

int ServiceConfig::effective_workers() const {
  if (worker_count > 0) return worker_count;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int ServiceConfig::effective_queue() const {
  return queue_capacity > 0 ? queue_capacity : 2 * effective_workers();
}

namespace {

std::string trim(std::string_view s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(Errc::bad_config, key + ": cannot parse \"" + value + "\"");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  // from_chars<double> is used where available; strtod keeps us portable.
  char* end = nullptr;
  double out = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty()) {
    throw Error(Errc::bad_config, key + ": cannot parse \"" + value + "\"");
  }
  return out;
}

SamplerKind parse_kind_or_throw(const std::string& key, const std::string& value) {
  auto kind = parse_sampler_kind(value);
  if (!kind) {
    throw Error(Errc::bad_config, key + ": unknown sampler \"" + value + "\"");
  }
  return *kind;
}

void apply_key(ServiceConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "listen_address") {
    cfg.listen_address = value;
  } else if (key == "threshold") {
    cfg.threshold = parse_real(key, value);
  } else if (key == "sampler.kind") {
    cfg.sampler.kind = parse_kind_or_throw(key, value);
  } else if (key == "sampler.k") {
    cfg.sampler.k = parse_number<int>(key, value);
  } else if (key == "sampler.seed") {
    cfg.sampler.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "flow.window_radius") {
    cfg.flow.window_radius = parse_number<int>(key, value);
  } else if (key == "flow.grid_stride") {
    cfg.flow.grid_stride = parse_number<int>(key, value);
  } else if (key == "flow.min_eig") {
    cfg.flow.min_eigenvalue = parse_real(key, value);
  } else if (key == "max_body_bytes") {
    cfg.max_body_bytes = parse_number<std::size_t>(key, value);
  } else if (key == "workers") {
    cfg.worker_count = parse_number<int>(key, value);
  } else if (key == "queue") {
    cfg.queue_capacity = parse_number<int>(key, value);
  } else {
    throw Error(Errc::bad_config, "unknown key \"" + key + "\"");
  }
}

}  // namespace

void apply_config_file(ServiceConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::io_failure, "cannot open " + path.string());
  }
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::bad_config,
                  path.string() + ":" + std::to_string(line_no) +
                      ": expected key = value");
    }
    apply_key(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

void apply_env_overrides(ServiceConfig& cfg) {
  if (const char* v = std::getenv("IIS_ADDR")) cfg.listen_address = v;
  if (const char* v = std::getenv("IIS_THRESHOLD")) {
    cfg.threshold = parse_real("IIS_THRESHOLD", v);
  }
  if (const char* v = std::getenv("IIS_SAMPLER")) {
    cfg.sampler.kind = parse_kind_or_throw("IIS_SAMPLER", v);
  }
  if (const char* v = std::getenv("IIS_K")) {
    cfg.sampler.k = parse_number<int>("IIS_K", v);
  }
  if (const char* v = std::getenv("IIS_MAX_BODY")) {
    cfg.max_body_bytes = parse_number<std::size_t>("IIS_MAX_BODY", v);
  }
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  ServiceConfig cfg;
  apply_config_file(cfg, path);
  apply_env_overrides(cfg);
  return cfg;
}

std::pair<std::string, int> split_listen_address(const std::string& address) {
  std::size_t colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    throw Error(Errc::bad_config, "listen address must be host:port");
  }
  std::string host = address.substr(0, colon);
  std::string port_text = address.substr(colon + 1);
  int port = 0;
  auto [ptr, ec] =
      std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size() ||
      port < 0 || port > 65535) {
    throw Error(Errc::bad_config, "invalid port \"" + port_text + "\"");
  }
  return {host, port};
}

}  // namespace iis
