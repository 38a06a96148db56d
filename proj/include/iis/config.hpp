#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "iis/optical_flow.hpp"
#include "iis/sampling.hpp"

namespace iis {

struct ServiceConfig {
  std::string listen_address = "127.0.0.1:8750";
  double threshold = 0.5;
  SamplerSpec sampler{SamplerKind::uniform, 9, std::nullopt};
  FlowParams flow;
  std::size_t max_body_bytes = 64ull << 20;
  int worker_count = 0;    // 0 = logical CPU count
  int queue_capacity = 0;  // 0 = 2 * worker_count

  int effective_workers() const;
  int effective_queue() const;
};

// Plain "key = value" lines; '#' comments and blank lines ignored.
// Keys: listen_address, threshold, sampler.kind, sampler.k, sampler.seed,
// flow.window_radius, flow.grid_stride, flow.min_eig, max_body_bytes,
// workers, queue. Unknown keys are errors.
void apply_config_file(ServiceConfig& cfg, const std::filesystem::path& path);

// IIS_ADDR, IIS_THRESHOLD, IIS_SAMPLER, IIS_K, IIS_MAX_BODY.
// Environment beats file; callers apply flags afterwards so flags beat both.
void apply_env_overrides(ServiceConfig& cfg);

ServiceConfig load_service_config(const std::filesystem::path& path);

// "host:port" -> host, port. Throws BadConfig on malformed input.
std::pair<std::string, int> split_listen_address(const std::string& address);

}  // namespace iis
