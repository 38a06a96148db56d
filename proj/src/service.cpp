#include "iis/service.hpp"

#include <chrono>
#include <semaphore>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "iis/analysis.hpp"
#include "iis/error.hpp"
#include "iis/media_io.hpp"
#include "iis/serialize.hpp"
#include "iis/super_image.hpp"
#include "iis/version.hpp"

namespace iis {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::ptrdiff_t kSemaphoreCeiling = 1 << 22;

int status_for(Errc code) {
  switch (code) {
    case Errc::bad_magic:
    case Errc::truncated:
    case Errc::zero_dimension:
    case Errc::unsupported_format:
      return 400;
    case Errc::k_too_large:
    case Errc::k_zero:
    case Errc::missing_seed:
    case Errc::too_few_frames:
    case Errc::frame_too_small:
    case Errc::dimension_mismatch:
      return 422;
    default:
      return 500;
  }
}

void set_json(httplib::Response& res, int status, const std::string& body) {
  res.status = status;
  res.set_content(body, "application/json");
}

void set_error(httplib::Response& res, int status, const std::string& name,
               const std::string& detail) {
  ordered_json j;
  j["error"] = name;
  j["detail"] = detail;
  set_json(res, status, j.dump());
}

}  // namespace

struct Service::Impl {
  ServiceConfig cfg;
  httplib::Server server;
  std::counting_semaphore<kSemaphoreCeiling> admission;
  std::counting_semaphore<kSemaphoreCeiling> workers;
  std::thread background;

  explicit Impl(ServiceConfig config)
      : cfg(std::move(config)),
        admission(cfg.effective_workers() + cfg.effective_queue()),
        workers(cfg.effective_workers()) {}

  // One admission slot per in-flight request (processing or queued); the
  // worker semaphore bounds actual parallel pipeline work.
  class Slot {
   public:
    explicit Slot(Impl& impl) : impl_(impl) {
      if (impl_.admission.try_acquire()) {
        impl_.workers.acquire();
        held_ = true;
      }
    }
    ~Slot() {
      if (held_) {
        impl_.workers.release();
        impl_.admission.release();
      }
    }
    bool held() const { return held_; }

   private:
    Impl& impl_;
    bool held_ = false;
  };

  bool parse_sampler_query(const httplib::Request& req, SamplerSpec& spec,
                           httplib::Response& res) {
    spec = cfg.sampler;
    if (req.has_param("sampler")) {
      auto kind = parse_sampler_kind(req.get_param_value("sampler"));
      if (!kind) {
        set_error(res, 400, "BadParameter",
                  "unknown sampler \"" + req.get_param_value("sampler") + "\"");
        return false;
      }
      spec.kind = *kind;
    }
    if (req.has_param("k")) {
      try {
        spec.k = std::stoi(req.get_param_value("k"));
      } catch (const std::exception&) {
        set_error(res, 400, "BadParameter",
                  "k must be an integer, got \"" + req.get_param_value("k") + "\"");
        return false;
      }
    }
    if (req.has_param("seed")) {
      try {
        spec.seed = std::stoull(req.get_param_value("seed"));
      } catch (const std::exception&) {
        set_error(res, 400, "BadParameter",
                  "seed must be a 64-bit unsigned integer");
        return false;
      }
    }
    return true;
  }

  void handle_clips(const httplib::Request& req, httplib::Response& res) {
    Slot slot(*this);
    if (!slot.held()) {
      set_error(res, 503, "QueueFull", "all workers and queue slots are busy");
      return;
    }
    SamplerSpec spec;
    if (!parse_sampler_query(req, spec, res)) return;

    try {
      auto begin = std::chrono::steady_clock::now();
      Clip clip = decode_iisv(
          {reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size()});
      validate_sampler_spec(clip.frame_count(), spec);
      Detection d = detect(clip, cfg.threshold, cfg.flow);
      auto end = std::chrono::steady_clock::now();

      ordered_json j;
      j["label"] = label_name(d.label);
      j["energy"] = d.energy;
      j["threshold"] = d.threshold_used;
      j["frames"] = clip.frame_count();
      j["sampler"] = sampler_kind_name(spec.kind);
      j["k"] = spec.k;
      j["processing_ms"] =
          std::chrono::duration<double, std::milli>(end - begin).count();
      set_json(res, 200, j.dump());
    } catch (const Error& e) {
      set_error(res, status_for(e.code()), e.code_name(), e.what());
    } catch (const std::exception& e) {
      set_error(res, 500, "Internal", e.what());
    }
  }

  void handle_superimage(const httplib::Request& req, httplib::Response& res) {
    Slot slot(*this);
    if (!slot.held()) {
      set_error(res, 503, "QueueFull", "all workers and queue slots are busy");
      return;
    }
    SamplerSpec spec;
    if (!parse_sampler_query(req, spec, res)) return;

    try {
      Clip clip = decode_iisv(
          {reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size()});
      SuperImage si = build_super_image(clip, spec, std::nullopt, cfg.flow);
      std::vector<std::uint8_t> ppm = write_ppm(si.image);

      std::string indices;
      for (std::size_t i = 0; i < si.source_indices.size(); ++i) {
        if (i) indices += ',';
        indices += std::to_string(si.source_indices[i]);
      }
      res.set_header("X-Grid-Rows", std::to_string(si.layout.rows));
      res.set_header("X-Grid-Cols", std::to_string(si.layout.cols));
      res.set_header("X-Indices", indices);
      res.status = 200;
      res.set_content(std::string(ppm.begin(), ppm.end()),
                      "image/x-portable-pixmap");
    } catch (const Error& e) {
      set_error(res, status_for(e.code()), e.code_name(), e.what());
    } catch (const std::exception& e) {
      set_error(res, 500, "Internal", e.what());
    }
  }

  void setup_routes() {
    server.set_default_headers({{"X-IIS-Version", kVersion}});
    server.set_payload_max_length(cfg.max_body_bytes);
    int pool_size = cfg.effective_workers() + cfg.effective_queue() + 16;
    server.new_task_queue = [pool_size] {
      return new httplib::ThreadPool(static_cast<std::size_t>(pool_size));
    };

    server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
      ordered_json j;
      j["status"] = "ok";
      j["version"] = kVersion;
      set_json(res, 200, j.dump());
    });

    server.Post("/v1/clips", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      handle_clips(req, res);
    });
    server.Post("/v1/superimage", [this](const httplib::Request& req,
                                         httplib::Response& res) {
      handle_superimage(req, res);
    });

    // method guards: the router alone would answer 404
    auto method_not_allowed = [](const httplib::Request& req,
                                 httplib::Response& res) {
      set_error(res, 405, "MethodNotAllowed",
                req.method + " is not supported on " + req.path);
    };
    server.Post("/v1/health", method_not_allowed);
    server.Get("/v1/clips", method_not_allowed);
    server.Get("/v1/superimage", method_not_allowed);

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      std::string name = res.status == 404   ? "NotFound"
                         : res.status == 413 ? "BodyTooLarge"
                                             : "HttpError";
      ordered_json j;
      j["error"] = name;
      res.set_content(j.dump(), "application/json");
      return httplib::Server::HandlerResponse::Handled;
    });
  }
};

Service::Service(ServiceConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {
  impl_->setup_routes();
}

Service::~Service() { stop(); }

bool Service::listen() {
  auto [host, port] = split_listen_address(impl_->cfg.listen_address);
  return impl_->server.listen(host, port);
}

int Service::start_background(const std::string& host) {
  int port = impl_->server.bind_to_any_port(host);
  if (port < 0) return -1;
  impl_->background = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->background.joinable()) {
    impl_->background.join();
  }
}

const ServiceConfig& Service::config() const { return impl_->cfg; }

}  // namespace iis
