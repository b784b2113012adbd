// Variant-sheet sources for perturbed (generic) runs. A variant sheet marks
// the positions of one level that are declared automatic N-positions.
#ifndef PASSAGE_VARIANT_HPP
#define PASSAGE_VARIANT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "passage/errors.hpp"
#include "passage/rng.hpp"
#include "passage/sheet.hpp"
#include "passage/types.hpp"

namespace passage {

class VariantSource {
 public:
  virtual ~VariantSource() = default;
  // Engines request levels in increasing order starting from their resume
  // level; stateless sources may ignore that.
  virtual Sheet sheet(std::uint32_t level, std::uint32_t height, std::uint32_t width) = 0;
};

class NullVariant final : public VariantSource {
 public:
  Sheet sheet(std::uint32_t, std::uint32_t height, std::uint32_t width) override {
    return Sheet(height, width);
  }
};

class ExplicitPointsVariant final : public VariantSource {
 public:
  explicit ExplicitPointsVariant(std::vector<VariantPoint> points) : points_(std::move(points)) {}

  const std::vector<VariantPoint>& points() const { return points_; }

  // Every point must sit inside the truncation; checked up front so a bad
  // point list fails before any level is computed.
  void validate(std::uint32_t levels, std::uint32_t height, std::uint32_t width) const {
    for (const VariantPoint& p : points_) {
      if (p.x >= levels || p.y >= height || p.z >= width)
        throw ConfigError("variant point [" + std::to_string(p.x) + "," + std::to_string(p.y) +
                          "," + std::to_string(p.z) + "] outside the configured truncation");
    }
  }

  Sheet sheet(std::uint32_t level, std::uint32_t height, std::uint32_t width) override {
    Sheet s(height, width);
    for (const VariantPoint& p : points_) {
      if (p.x == level && p.y < height && p.z < width) s.set(p.y, p.z);
    }
    return s;
  }

 private:
  std::vector<VariantPoint> points_;
};

// One perturbation per row of every level: row y gets its cell at
// z = clamp(round(y + N(0, sigma)), 0, width-1), i.e. normal jitter around
// the main diagonal. Draws come from the per-(seed, level) stream, two
// 53-bit uniforms per row, rows in increasing order.
class PerColumnNormalVariant final : public VariantSource {
 public:
  PerColumnNormalVariant(double sigma, std::uint64_t seed) : sigma_(sigma), seed_(seed) {
    if (!(sigma >= 0.0)) throw ConfigError("per-column sigma must be >= 0");
  }

  double sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }

  Sheet sheet(std::uint32_t level, std::uint32_t height, std::uint32_t width) override {
    Sheet s(height, width);
    SplitMix64 rng = level_stream(seed_, level);
    for (std::uint32_t y = 0; y < height; ++y) {
      const double draw = static_cast<double>(y) + sigma_ * rng.normal();
      const long long zll = std::llround(draw);
      const std::uint32_t z = static_cast<std::uint32_t>(
          std::clamp<long long>(zll, 0, static_cast<long long>(width) - 1));
      s.set(y, z);
    }
    return s;
  }

 private:
  double sigma_;
  std::uint64_t seed_;
};

// Wraps another source and adds extra points; used to perturb a run without
// touching its base variant definition.
class OverlayVariant final : public VariantSource {
 public:
  OverlayVariant(VariantSource* base, std::vector<VariantPoint> extra)
      : base_(base), extra_(std::move(extra)) {}

  Sheet sheet(std::uint32_t level, std::uint32_t height, std::uint32_t width) override {
    Sheet s = base_ ? base_->sheet(level, height, width) : Sheet(height, width);
    for (const VariantPoint& p : extra_) {
      if (p.x == level && p.y < height && p.z < width) s.set(p.y, p.z);
    }
    return s;
  }

 private:
  VariantSource* base_;
  std::vector<VariantPoint> extra_;
};

}  // namespace passage

#endif  // PASSAGE_VARIANT_HPP
