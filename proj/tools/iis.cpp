#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "iis/analysis.hpp"
#include "iis/config.hpp"
#include "iis/error.hpp"
#include "iis/media_io.hpp"
#include "iis/sampling.hpp"
#include "iis/serialize.hpp"
#include "iis/service.hpp"
#include "iis/super_image.hpp"
#include "iis/version.hpp"

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config_path;
  bool quiet = false;
};

struct FlowFlags {
  std::optional<int> window_radius;
  std::optional<int> grid_stride;
  std::optional<double> min_eig;

  iis::FlowParams resolve(const iis::FlowParams& defaults) const {
    iis::FlowParams p = defaults;
    if (window_radius) p.window_radius = *window_radius;
    if (grid_stride) p.grid_stride = *grid_stride;
    if (min_eig) p.min_eigenvalue = *min_eig;
    return p;
  }
};

void add_flow_flags(CLI::App* cmd, FlowFlags& flags) {
  cmd->add_option("--flow.window_radius", flags.window_radius,
                  "Lucas-Kanade window radius in pixels");
  cmd->add_option("--flow.grid_stride", flags.grid_stride,
                  "flow grid spacing in pixels");
  cmd->add_option("--flow.min_eig", flags.min_eig,
                  "minimum structure-tensor eigenvalue");
}

// Layered defaults: built-ins, then config file, then environment. Explicit
// command-line flags are applied afterwards by each subcommand.
iis::ServiceConfig base_config(const GlobalOptions& global) {
  iis::ServiceConfig cfg;
  if (!global.config_path.empty()) {
    iis::apply_config_file(cfg, global.config_path);
  }
  iis::apply_env_overrides(cfg);
  return cfg;
}

iis::SamplerSpec make_spec(const std::string& sampler, int k,
                           std::optional<std::uint64_t> seed) {
  auto kind = iis::parse_sampler_kind(sampler);
  if (!kind) {
    throw iis::Error(iis::Errc::bad_config,
                     "unknown sampler \"" + sampler + "\"");
  }
  return {*kind, k, seed};
}

std::string indices_line(const std::vector<int>& indices) {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(indices[i]);
  }
  return out;
}

int run_convert(const GlobalOptions& global, const std::string& in,
                const std::string& out, double fps) {
  auto fps_milli = static_cast<std::uint32_t>(std::llround(fps * 1000.0));
  if (fps_milli == 0) {
    throw iis::Error(iis::Errc::bad_config, "fps must be positive");
  }
  if (fs::is_directory(in)) {
    iis::Clip clip = iis::load_frame_dir(in, fps_milli);
    iis::save_clip_file(out, clip);
    if (!global.quiet) {
      std::cerr << "wrote " << clip.frame_count() << " frames to " << out << "\n";
    }
  } else {
    iis::Clip clip = iis::load_clip_file(in);
    iis::save_frame_dir(out, clip);
    if (!global.quiet) {
      std::cerr << "wrote " << clip.frame_count() << " frames under " << out << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"video clip preprocessing and violence screening toolkit"};
  app.set_version_flag("--version", iis::kVersion);
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app.add_flag("--quiet", global.quiet, "suppress diagnostics on stderr");

  // convert
  auto* convert = app.add_subcommand(
      "convert", "convert between a PPM directory and an IISV clip file");
  std::string convert_in, convert_out;
  double convert_fps = 30.0;
  convert->add_option("--in", convert_in, "input directory or .iisv file")->required();
  convert->add_option("--out", convert_out, "output .iisv file or directory")->required();
  convert->add_option("--fps", convert_fps, "frame rate for directory input");

  // sample
  auto* sample_cmd =
      app.add_subcommand("sample", "print selected frame indices for a clip");
  std::string sample_in, sample_sampler;
  int sample_k = 0;
  std::optional<std::uint64_t> sample_seed;
  sample_cmd->add_option("--in", sample_in, "input .iisv clip")->required();
  sample_cmd->add_option("--sampler", sample_sampler,
                         "uniform|random|continuous|mad|lk")->required();
  sample_cmd->add_option("--k", sample_k, "number of frames to select")->required();
  sample_cmd->add_option("--seed", sample_seed, "seed for the random sampler");
  FlowFlags sample_flow;
  add_flow_flags(sample_cmd, sample_flow);

  // superimage
  auto* super_cmd =
      app.add_subcommand("superimage", "compose sampled frames into one image");
  std::string super_in, super_out, super_sampler, super_meta;
  int super_k = 0;
  std::optional<std::uint64_t> super_seed;
  std::optional<int> super_cell_w, super_cell_h;
  super_cmd->add_option("--in", super_in, "input .iisv clip")->required();
  super_cmd->add_option("--out", super_out, "output .ppm path")->required();
  super_cmd->add_option("--sampler", super_sampler,
                        "uniform|random|continuous|mad|lk")->required();
  super_cmd->add_option("--k", super_k, "number of frames to select")->required();
  super_cmd->add_option("--seed", super_seed, "seed for the random sampler");
  super_cmd->add_option("--cell-w", super_cell_w, "rescale cells to this width");
  super_cmd->add_option("--cell-h", super_cell_h, "rescale cells to this height");
  super_cmd->add_option("--meta", super_meta,
                        "write the layout line to this file instead of stderr");
  FlowFlags super_flow;
  add_flow_flags(super_cmd, super_flow);

  // detect
  auto* detect_cmd =
      app.add_subcommand("detect", "screen a clip and print the detection JSON");
  std::string detect_in;
  std::optional<double> detect_threshold;
  detect_cmd->add_option("--in", detect_in, "input .iisv clip")->required();
  detect_cmd->add_option("--threshold", detect_threshold,
                         "motion-energy decision threshold");
  FlowFlags detect_flow;
  add_flow_flags(detect_cmd, detect_flow);

  // calibrate
  auto* calibrate_cmd = app.add_subcommand(
      "calibrate", "pick the F1-maximizing threshold for a labeled manifest");
  std::string calibrate_manifest;
  calibrate_cmd->add_option("--manifest", calibrate_manifest,
                            "path,label manifest file")->required();
  FlowFlags calibrate_flow;
  add_flow_flags(calibrate_cmd, calibrate_flow);

  // evaluate
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "score a labeled manifest and print the metrics JSON");
  std::string evaluate_manifest;
  std::optional<double> evaluate_threshold;
  bool evaluate_lint = false;
  evaluate_cmd->add_option("--manifest", evaluate_manifest,
                           "path,label manifest file")->required();
  evaluate_cmd->add_option("--threshold", evaluate_threshold,
                           "motion-energy decision threshold");
  evaluate_cmd->add_flag("--lint", evaluate_lint,
                         "print manifest warnings to stderr");
  FlowFlags evaluate_flow;
  add_flow_flags(evaluate_cmd, evaluate_flow);

  // benchmark
  auto* bench_cmd = app.add_subcommand(
      "benchmark", "time the sample -> super image -> detect pipeline");
  std::string bench_in, bench_sampler;
  int bench_k = 0;
  std::optional<std::uint64_t> bench_seed;
  int bench_reps = 1;
  double bench_budget = 2000.0;
  bench_cmd->add_option("--in", bench_in, "input .iisv clip")->required();
  bench_cmd->add_option("--sampler", bench_sampler,
                        "uniform|random|continuous|mad|lk")->required();
  bench_cmd->add_option("--k", bench_k, "number of frames to select")->required();
  bench_cmd->add_option("--seed", bench_seed, "seed for the random sampler");
  bench_cmd->add_option("--reps", bench_reps, "pipeline repetitions");
  bench_cmd->add_option("--budget-ms", bench_budget, "per-frame budget in ms");
  FlowFlags bench_flow;
  add_flow_flags(bench_cmd, bench_flow);

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  std::string serve_addr;
  std::optional<double> serve_threshold;
  std::string serve_sampler;
  std::optional<int> serve_k;
  std::optional<std::uint64_t> serve_seed;
  std::optional<std::size_t> serve_max_body;
  std::optional<int> serve_workers, serve_queue;
  serve_cmd->add_option("--addr", serve_addr, "host:port to listen on");
  serve_cmd->add_option("--threshold", serve_threshold, "detection threshold");
  serve_cmd->add_option("--sampler", serve_sampler, "default sampler kind");
  serve_cmd->add_option("--k", serve_k, "default sample size");
  serve_cmd->add_option("--seed", serve_seed, "default random seed");
  serve_cmd->add_option("--max-body", serve_max_body, "request body cap in bytes");
  serve_cmd->add_option("--workers", serve_workers, "parallel request processors");
  serve_cmd->add_option("--queue", serve_queue, "pending request capacity");
  FlowFlags serve_flow;
  add_flow_flags(serve_cmd, serve_flow);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    iis::ServiceConfig cfg = base_config(global);

    if (convert->parsed()) {
      return run_convert(global, convert_in, convert_out, convert_fps);
    }

    if (sample_cmd->parsed()) {
      iis::Clip clip = iis::load_clip_file(sample_in);
      auto spec = make_spec(sample_sampler, sample_k, sample_seed);
      auto result = iis::sample(clip, spec, sample_flow.resolve(cfg.flow));
      std::cout << indices_line(result.indices) << "\n";
      return 0;
    }

    if (super_cmd->parsed()) {
      iis::Clip clip = iis::load_clip_file(super_in);
      auto spec = make_spec(super_sampler, super_k, super_seed);
      std::optional<iis::CellScale> scale;
      if (super_cell_w.has_value() != super_cell_h.has_value()) {
        throw iis::Error(iis::Errc::bad_config,
                         "--cell-w and --cell-h must be given together");
      }
      if (super_cell_w) scale = iis::CellScale{*super_cell_w, *super_cell_h};
      iis::SuperImage si = iis::build_super_image(clip, spec, scale,
                                                  super_flow.resolve(cfg.flow));
      iis::save_ppm_file(super_out, si.image);
      std::string meta = "rows=" + std::to_string(si.layout.rows) +
                         " cols=" + std::to_string(si.layout.cols) +
                         " k=" + std::to_string(si.source_indices.size()) +
                         " indices=" + indices_line(si.source_indices);
      if (!super_meta.empty()) {
        std::ofstream meta_out(super_meta);
        if (!meta_out) {
          throw iis::Error(iis::Errc::io_failure, "cannot create " + super_meta);
        }
        meta_out << meta << "\n";
      } else if (!global.quiet) {
        std::cerr << meta << "\n";
      }
      return 0;
    }

    if (detect_cmd->parsed()) {
      iis::Clip clip = iis::load_clip_file(detect_in);
      double threshold = detect_threshold.value_or(cfg.threshold);
      iis::Detection d =
          iis::detect(clip, threshold, detect_flow.resolve(cfg.flow));
      std::cout << iis::detection_json(d) << "\n";
      return 0;
    }

    if (calibrate_cmd->parsed()) {
      auto entries = iis::load_manifest(calibrate_manifest);
      auto items = iis::manifest_energies(
          entries, calibrate_flow.resolve(cfg.flow),
          fs::path(calibrate_manifest).parent_path());
      std::cout << iis::format_double(iis::calibrate_threshold(items)) << "\n";
      return 0;
    }

    if (evaluate_cmd->parsed()) {
      auto entries = iis::load_manifest(evaluate_manifest);
      fs::path base = fs::path(evaluate_manifest).parent_path();
      if (evaluate_lint && !global.quiet) {
        std::vector<iis::Clip> clips;
        for (const auto& entry : entries) {
          fs::path p(entry.path);
          clips.push_back(iis::load_clip_file(p.is_relative() ? base / p : p));
        }
        for (const auto& warning : iis::validate_manifest(entries, clips)) {
          std::cerr << "warning: " << warning << "\n";
        }
      }
      double threshold = evaluate_threshold.value_or(cfg.threshold);
      auto result = iis::evaluate(entries, threshold,
                                  evaluate_flow.resolve(cfg.flow), base);
      std::cout << iis::metrics_json(result.report, result.counts) << "\n";
      return 0;
    }

    if (bench_cmd->parsed()) {
      iis::Clip clip = iis::load_clip_file(bench_in);
      auto spec = make_spec(bench_sampler, bench_k, bench_seed);
      auto report = iis::benchmark(clip, spec, bench_flow.resolve(cfg.flow),
                                   bench_reps, bench_budget);
      std::cout << iis::benchmark_json(report) << "\n";
      return 0;
    }

    if (serve_cmd->parsed()) {
      if (!serve_addr.empty()) cfg.listen_address = serve_addr;
      if (serve_threshold) cfg.threshold = *serve_threshold;
      if (!serve_sampler.empty()) {
        auto kind = iis::parse_sampler_kind(serve_sampler);
        if (!kind) {
          throw iis::Error(iis::Errc::bad_config,
                           "unknown sampler \"" + serve_sampler + "\"");
        }
        cfg.sampler.kind = *kind;
      }
      if (serve_k) cfg.sampler.k = *serve_k;
      if (serve_seed) cfg.sampler.seed = *serve_seed;
      if (serve_max_body) cfg.max_body_bytes = *serve_max_body;
      if (serve_workers) cfg.worker_count = *serve_workers;
      if (serve_queue) cfg.queue_capacity = *serve_queue;
      cfg.flow = serve_flow.resolve(cfg.flow);

      iis::Service service(cfg);
      if (!global.quiet) {
        std::cerr << "listening on " << cfg.listen_address << "\n";
      }
      if (!service.listen()) {
        throw iis::Error(iis::Errc::io_failure,
                         "cannot bind " + cfg.listen_address);
      }
      return 0;
    }
  } catch (const iis::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
