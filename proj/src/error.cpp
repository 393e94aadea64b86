#include "swagger/error.hpp"

namespace swagger {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_dimension: return "invalid-dimension";
    case Errc::invalid_band: return "invalid-band";
    case Errc::invalid_weight: return "invalid-weight";
    case Errc::invalid_probability: return "invalid-probability";
    case Errc::invalid_structure: return "invalid-structure";
    case Errc::shape: return "shape";
    case Errc::kink: return "kink";
    case Errc::numeric: return "numeric";
    case Errc::range: return "range";
    case Errc::not_separable: return "not-separable";
    case Errc::degenerate: return "degenerate";
    case Errc::generation: return "generation";
    case Errc::undefined_metrics: return "undefined-metrics";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace swagger
