#pragma once

#include <memory>
#include <string>

#include "iis/config.hpp"

namespace iis {

// HTTP front end for the pipeline.
//
//   GET  /v1/health                                      -> JSON status
//   POST /v1/clips?sampler=<kind>&k=<int>[&seed=<u64>]   -> JSON detection
//   POST /v1/superimage?sampler=...&k=...[&seed=...]     -> PPM bytes
//
// Request bodies are IISV clips. Query parameters default to the configured
// sampler. At most worker_count requests are processed in parallel; up to
// queue_capacity more may wait; anything beyond that is answered 503.
class Service {
 public:
  explicit Service(ServiceConfig cfg);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds per config.listen_address and serves until stop(). Returns false
  // if the address cannot be bound.
  bool listen();

  // Test entry point: binds an ephemeral port on `host`, serves on a
  // background thread, returns the port (-1 on failure).
  int start_background(const std::string& host = "127.0.0.1");

  void stop();

  const ServiceConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace iis
