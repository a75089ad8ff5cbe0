#pragma once

#include <string>

#include "fdx/nn/network.hpp"

namespace fdx::nn {

/// FDXM container: magic "FDXM", format version, the NetworkSpec fields,
/// scaler ranges, then the parameter payload as little-endian 4-byte
/// reals in layer order (weights then bias per layer).
void save_model(const Model& model, const std::string& path);

/// Loads and validates shape consistency against the embedded spec;
/// throws FormatError on malformed or truncated files, IoError on
/// filesystem failures.
Model load_model(const std::string& path);

} // namespace fdx::nn
