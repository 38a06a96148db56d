#include "iis/error.hpp"

namespace iis {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::bad_magic: return "BadMagic";
    case Errc::truncated: return "Truncated";
    case Errc::zero_dimension: return "ZeroDimension";
    case Errc::unsupported_format: return "UnsupportedFormat";
    case Errc::empty_directory: return "EmptyDirectory";
    case Errc::mixed_dimensions: return "MixedDimensions";
    case Errc::k_too_large: return "KTooLarge";
    case Errc::k_zero: return "KZero";
    case Errc::missing_seed: return "MissingSeed";
    case Errc::too_few_frames: return "TooFewFrames";
    case Errc::frame_too_small: return "FrameTooSmall";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::layout_too_small: return "LayoutTooSmall";
    case Errc::single_class: return "SingleClass";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::empty: return "Empty";
    case Errc::load_failure: return "LoadFailure";
    case Errc::io_failure: return "IoFailure";
    case Errc::bad_config: return "BadConfig";
  }
  return "UnknownError";
}

}  // namespace iis
