#pragma once

#include <string>

#include "fdx/nn/dataset.hpp"

namespace fdx::harness {

/// CEDS container: magic "CEDS", version u32, target byte, split sizes,
/// tensor dimension headers, then both payloads as little-endian 4-byte
/// reals. A JSON sidecar at <path>.json carries the provenance metadata
/// (scheme, SNR grids, theta_AS, kappa, bits, seed, source).
void export_dataset(const nn::Dataset& ds, const std::string& path);

/// Round-trip inverse of export_dataset (bit-exact payload). Datasets
/// without a readable sidecar are marked source = "external".
nn::Dataset import_dataset(const std::string& path);

} // namespace fdx::harness
