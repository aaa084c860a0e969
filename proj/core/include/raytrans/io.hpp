#pragma once

#include <optional>
#include <string>

#include "raytrans/inversion.hpp"
#include "raytrans/transforms.hpp"

namespace raytrans {

// Sinogram container format, version 1:
//   six UTF-8 header lines, each terminated by '\n':
//     format=sinogram-v1
//     family=<name>
//     kind=plain|attenuated
//     ntheta=<int>
//     ns=<int>
//     srange=<smin>,<smax>        (printf %.17g)
//   immediately followed by ntheta*ns IEEE-754 little-endian 64-bit values,
//   row-major (theta outer, s inner). No trailing data.
void write_sinogram(const std::string& path, const Sinogram& sino);
Sinogram read_sinogram(const std::string& path);

// 16-bit binary PGM (P5, maxval 65535, big-endian samples per the format).
// Values map linearly [vmin, vmax] -> [0, 65535] over the mask; pixels outside
// the mask are written as 0. The mapping and metadata go to a JSON sidecar
// (same path + ".json").
void write_pgm16(const std::string& path, const ReconImage& img,
                 const std::optional<ErrorMetrics>& metrics = std::nullopt);

}  // namespace raytrans
