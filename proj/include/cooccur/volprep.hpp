#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cooccur/errors.hpp"

namespace cooccur::volprep {

// Regular 3D grid of intensities, voxel (i,j,k) at index
// i + nx*(j + ny*k) (x fastest). Spacing in millimetres.
struct Volume {
  std::array<uint32_t, 3> dims{0, 0, 0};
  std::array<float, 3> spacing{1.f, 1.f, 1.f};
  std::vector<float> voxels;

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }

  float& at(std::size_t i, std::size_t j, std::size_t k) {
    return voxels[i + dims[0] * (j + static_cast<std::size_t>(dims[1]) * k)];
  }
  float at(std::size_t i, std::size_t j, std::size_t k) const {
    return voxels[i + dims[0] * (j + static_cast<std::size_t>(dims[1]) * k)];
  }

  // dims positive, voxel count consistent, spacing positive, values finite.
  void validate() const;
};

// Separable cubic B-spline resampling to an isotropic grid. Coefficients
// come from the standard recursive prefilter (pole sqrt(3)-2) with mirror
// boundary handling; output axis length is round(n*spacing/target) with a
// minimum of 1, sampled at input position j*target/spacing.
Volume resample(const Volume& v, double target_spacing_mm = 2.0);

// Clamp to [-1000, 800] HU, then z-score with the clipped volume's own
// mean and population standard deviation. Volumes with std below 1e-8
// become all zeros.
Volume clip_normalize(const Volume& v);

inline constexpr double kClipLowHU = -1000.0;
inline constexpr double kClipHighHU = 800.0;

// RVOL container: "RVL1", u32 nx ny nz, f32 sx sy sz, then f32 voxels,
// all little-endian, x fastest.
Volume read_rvol(const std::string& path);
void write_rvol(const Volume& v, const std::string& path);

}  // namespace cooccur::volprep
