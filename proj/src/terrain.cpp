#include "polyped/terrain.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace polyped {

void TerrainSpec::validate() const {
  if (stairs_step_length <= 0.0 || stairs_step_height <= 0.0)
    throw std::invalid_argument("TerrainSpec: stair dimensions must be > 0");
  if (stairs_n_up < 0 || stairs_n_down < 0)
    throw std::invalid_argument("TerrainSpec: stair counts must be >= 0");
  if (rough_length_scale <= 0.0 || rough_resolution <= 0.0 || rough_extent_x <= 0.0 ||
      rough_extent_y <= 0.0 || rough_z_scale < 0.0 || rough_z_multiplier < 0.0)
    throw std::invalid_argument("TerrainSpec: rough-field parameters must be positive");
  if (!(hill_max_slope > 0.0 && hill_max_slope < M_PI / 2.0))
    throw std::invalid_argument("TerrainSpec: hill_max_slope must be in (0, pi/2)");
  if (hill_extent <= 0.0) throw std::invalid_argument("TerrainSpec: hill_extent must be > 0");
  if (kind == TerrainKind::Rough && rough_resolution > rough_length_scale / 4.0)
    throw std::invalid_argument("TerrainSpec: resolution must be <= length_scale/4");
}

TerrainKind terrain_kind_from_string(const std::string& name) {
  if (name == "floating") return TerrainKind::Floating;
  if (name == "flat") return TerrainKind::Flat;
  if (name == "rough") return TerrainKind::Rough;
  if (name == "hill") return TerrainKind::Hill;
  if (name == "stairs") return TerrainKind::Stairs;
  throw std::invalid_argument("unknown terrain kind: " + name);
}

const char* to_string(TerrainKind kind) {
  switch (kind) {
    case TerrainKind::Floating: return "floating";
    case TerrainKind::Flat: return "flat";
    case TerrainKind::Rough: return "rough";
    case TerrainKind::Hill: return "hill";
    case TerrainKind::Stairs: return "stairs";
  }
  return "?";
}

namespace {

double stairs_height(const TerrainSpec& s, double x) {
  const double sl = s.stairs_step_length;
  const double sh = s.stairs_step_height;
  const double ascent = s.stairs_n_up * sl;
  if (x <= 0.0) return 0.0;
  if (x <= ascent) return sh * std::min<double>(s.stairs_n_up, std::ceil(x / sl));
  // Descent mirrors the ascent about the staircase end.
  const double from_end = ascent + s.stairs_n_down * sl - x;
  if (from_end <= 0.0) return sh * std::max(0, s.stairs_n_up - s.stairs_n_down);
  return sh * (s.stairs_n_up - s.stairs_n_down +
               std::min<double>(s.stairs_n_down, std::ceil(from_end / sl)));
}

double hill_height(const TerrainSpec& s, double x) {
  const double slope_max = std::tan(s.hill_max_slope);
  const double a = slope_max / (2.0 * s.hill_extent);
  const double ax = std::abs(x);
  if (ax <= s.hill_extent) return a * x * x;
  // Continue with the boundary slope so height and slope stay continuous.
  return a * s.hill_extent * s.hill_extent + slope_max * (ax - s.hill_extent);
}

// Symmetric square root of a squared-exponential kernel over a 1-D grid,
// with eigenvalues clamped at zero to absorb round-off.
Eigen::MatrixXd kernel_factor(int n, double resolution, double length_scale) {
  Eigen::MatrixXd kernel(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = (i - j) * resolution;
      kernel(i, j) = std::exp(-d * d / (2.0 * length_scale * length_scale));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kernel);
  Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * lambda.asDiagonal();
}

}  // namespace

Heightfield generate_rough(std::uint64_t seed, double sigma, double length_scale,
                           double extent_x, double extent_y, double resolution) {
  if (sigma < 0.0 || length_scale <= 0.0 || resolution <= 0.0 || extent_x <= 0.0 ||
      extent_y <= 0.0)
    throw std::invalid_argument("generate_rough: parameters must be positive");

  Heightfield field;
  field.resolution = resolution;
  field.nx = static_cast<int>(std::lround(extent_x / resolution)) + 1;
  field.ny = static_cast<int>(std::lround(extent_y / resolution)) + 1;
  field.origin_x = -0.25 * extent_x;  // start area sits a quarter in from the edge
  field.origin_y = -0.5 * extent_y;
  field.seed = seed;
  field.kernel_sigma = sigma;
  field.kernel_length = length_scale;
  field.z.assign(static_cast<size_t>(field.nx) * field.ny, 0.0);
  if (sigma == 0.0) return field;

  // Separable kernel: Z = sigma * Ay * G * Ax^T has covariance Ky (x) Kx.
  const Eigen::MatrixXd ax = kernel_factor(field.nx, resolution, length_scale);
  const Eigen::MatrixXd ay = kernel_factor(field.ny, resolution, length_scale);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(field.ny, field.nx);
  for (int iy = 0; iy < field.ny; ++iy)
    for (int ix = 0; ix < field.nx; ++ix) g(iy, ix) = gauss(rng);

  const Eigen::MatrixXd z = sigma * (ay * g * ax.transpose());
  for (int iy = 0; iy < field.ny; ++iy)
    for (int ix = 0; ix < field.nx; ++ix)
      field.z[static_cast<size_t>(iy) * field.nx + ix] = z(iy, ix);
  return field;
}

double Heightfield::at(double x, double y) const {
  if (nx < 2 || ny < 2) return 0.0;
  const double fx = std::clamp((x - origin_x) / resolution, 0.0, nx - 1.0);
  const double fy = std::clamp((y - origin_y) / resolution, 0.0, ny - 1.0);
  const int ix = std::min(static_cast<int>(fx), nx - 2);
  const int iy = std::min(static_cast<int>(fy), ny - 2);
  const double tx = fx - ix;
  const double ty = fy - iy;
  auto cell = [&](int jx, int jy) { return z[static_cast<size_t>(jy) * nx + jx]; };
  return (1 - tx) * (1 - ty) * cell(ix, iy) + tx * (1 - ty) * cell(ix + 1, iy) +
         (1 - tx) * ty * cell(ix, iy + 1) + tx * ty * cell(ix + 1, iy + 1);
}

void Heightfield::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("heightfield: cannot write " + path);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "# heightfield v1,%.17g,%.17g,%.17g,%d,%d,%llu,%.17g,%.17g\n",
                origin_x, origin_y, resolution, nx, ny,
                static_cast<unsigned long long>(seed), kernel_sigma, kernel_length);
  out << buf;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      std::snprintf(buf, sizeof(buf), "%.17g", z[static_cast<size_t>(iy) * nx + ix]);
      out << buf << (ix + 1 < nx ? "," : "\n");
    }
  }
}

Heightfield Heightfield::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("heightfield: cannot read " + path);
  std::string header;
  std::getline(in, header);
  Heightfield field;
  unsigned long long seed = 0;
  if (std::sscanf(header.c_str(), "# heightfield v1,%lg,%lg,%lg,%d,%d,%llu,%lg,%lg",
                  &field.origin_x, &field.origin_y, &field.resolution, &field.nx,
                  &field.ny, &seed, &field.kernel_sigma, &field.kernel_length) != 8)
    throw std::runtime_error("heightfield: bad header in " + path);
  field.seed = seed;
  field.z.reserve(static_cast<size_t>(field.nx) * field.ny);
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream row(line);
    std::string cellstr;
    while (std::getline(row, cellstr, ',')) field.z.push_back(std::stod(cellstr));
  }
  if (field.z.size() != static_cast<size_t>(field.nx) * field.ny)
    throw std::runtime_error("heightfield: grid size mismatch in " + path);
  return field;
}

Terrain Terrain::build(const TerrainSpec& spec) {
  spec.validate();
  Terrain t;
  t.spec_ = spec;
  if (spec.kind == TerrainKind::Rough) {
    t.field_ = generate_rough(spec.rough_seed, spec.rough_z_scale * spec.rough_z_multiplier,
                              spec.rough_length_scale, spec.rough_extent_x,
                              spec.rough_extent_y, spec.rough_resolution);
  }
  return t;
}

std::optional<double> Terrain::height_at(double x, double y) const {
  switch (spec_.kind) {
    case TerrainKind::Floating: return std::nullopt;
    case TerrainKind::Flat: return 0.0;
    case TerrainKind::Rough: return field_->at(x, y);
    case TerrainKind::Hill: return hill_height(spec_, x);
    case TerrainKind::Stairs: return stairs_height(spec_, x);
  }
  return 0.0;
}

}  // namespace polyped
