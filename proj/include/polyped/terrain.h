#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polyped {

enum class TerrainKind { Floating, Flat, Rough, Hill, Stairs };

// Environment description. Only the fields for the active kind matter.
inline constexpr double kDefaultHillSlope = 13.3 * 3.14159265358979323846 / 180.0;

struct TerrainSpec {
  TerrainKind kind = TerrainKind::Flat;

  // Rough: stationary Gaussian random field, squared-exponential kernel.
  // Effective height std = rough_z_scale * rough_z_multiplier (the raw scale
  // is dimensionless; the multiplier maps it into meters).
  std::uint64_t rough_seed = 0;
  double rough_z_scale = 0.3;
  double rough_z_multiplier = 0.1;
  double rough_length_scale = 0.2;  // correlation length, ~ segment length
  double rough_extent_x = 12.0;
  double rough_extent_y = 6.0;
  double rough_resolution = 0.05;

  // Hill: z = a x^2 with the slope reaching max_slope at |x| = extent,
  // continued linearly beyond so slope stays bounded and continuous.
  double hill_max_slope = kDefaultHillSlope;
  double hill_extent = 2.0;

  // Stairs: flat approach, n_up steps up, mirrored n_down steps down.
  int stairs_n_up = 10;
  int stairs_n_down = 10;
  double stairs_step_length = 0.2;
  double stairs_step_height = 0.04;

  void validate() const;
};

TerrainKind terrain_kind_from_string(const std::string& name);
const char* to_string(TerrainKind kind);

// Regular grid of heights with bilinear interpolation; immutable once built.
struct Heightfield {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double resolution = 0.05;
  int nx = 0;
  int ny = 0;
  std::vector<double> z;  // row-major: z[iy * nx + ix]

  // Generator metadata, for provenance and replay.
  std::uint64_t seed = 0;
  double kernel_sigma = 0.0;
  double kernel_length = 0.0;

  double at(double x, double y) const;  // bilinear, clamped to the grid edge

  void save_csv(const std::string& path) const;
  static Heightfield load_csv(const std::string& path);
};

// Zero-mean Gaussian random field with point std sigma and squared-exponential
// correlation length length_scale; deterministic per seed.
Heightfield generate_rough(std::uint64_t seed, double sigma, double length_scale,
                           double extent_x, double extent_y, double resolution);

// Queryable terrain; Floating reports no ground anywhere.
class Terrain {
 public:
  static Terrain build(const TerrainSpec& spec);

  std::optional<double> height_at(double x, double y) const;
  const TerrainSpec& spec() const { return spec_; }
  const std::optional<Heightfield>& field() const { return field_; }

 private:
  TerrainSpec spec_;
  std::optional<Heightfield> field_;
};

}  // namespace polyped
