#pragma once

#include <stdexcept>
#include <string>

namespace iis {

// Every failure mode carries a stable symbolic name; the CLI and the HTTP
// service surface these names verbatim.
enum class Errc {
  bad_magic,
  truncated,
  zero_dimension,
  unsupported_format,
  empty_directory,
  mixed_dimensions,
  k_too_large,
  k_zero,
  missing_seed,
  too_few_frames,
  frame_too_small,
  dimension_mismatch,
  layout_too_small,
  single_class,
  length_mismatch,
  empty,
  load_failure,
  io_failure,
  bad_config,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace iis
