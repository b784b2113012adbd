// Quantitative experiments over computed runs: per-level overlap between the
// with-pass losers and the losers the same winner sheets would produce
// without pass-winners, sensitivity of a perturbed run to one extra
// perturbation, and block-density correlations between sheet geometries.
#ifndef PASSAGE_ANALYSIS_HPP
#define PASSAGE_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "passage/engine.hpp"
#include "passage/errors.hpp"
#include "passage/rules.hpp"
#include "passage/sheet.hpp"
#include "passage/sheet_io.hpp"
#include "passage/types.hpp"
#include "passage/variant.hpp"

namespace passage {

struct CurveSeries {
  std::string label;
  std::vector<std::pair<std::uint32_t, double>> points;  // (level, value), level increasing

  double mean_over(std::uint32_t lo, std::uint32_t hi) const {
    double sum = 0;
    std::uint64_t n = 0;
    for (const auto& [x, v] : points) {
      if (x >= lo && x <= hi) {
        sum += v;
        ++n;
      }
    }
    if (n == 0) throw ConfigError("curve has no points in the requested window");
    return sum / static_cast<double>(n);
  }
};

inline std::string curve_to_csv(const CurveSeries& c) {
  std::string out = "x,value\n";
  char buf[64];
  for (const auto& [x, v] : c.points) {
    std::snprintf(buf, sizeof(buf), "%u,%.6f\n", x, v);
    out += buf;
  }
  return out;
}

inline void write_curve_csv(const CurveSeries& c, std::ostream& os) {
  const std::string s = curve_to_csv(c);
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline void write_curve_csv_atomic(const CurveSeries& c, const std::filesystem::path& path) {
  write_bytes_atomic(curve_to_csv(c), path);
}

namespace detail {

inline std::uint32_t agreement_rows(const Sheet& a, const Sheet& b, std::uint32_t rows) {
  std::uint32_t agree = 0;
  for (std::uint32_t y = 0; y < rows; ++y) agree += a.rows_equal(b, y);
  return agree;
}

}  // namespace detail

// Per level x: fraction of rows (inside the exact window) on which the
// stored with-pass loser sheet agrees with the losers recomputed from the
// stored winner sheet alone, i.e. with the level's pass-winners left out.
// Both sheets carry at most one P per row, so row agreement is agreement of
// the P column.
inline CurveSeries overlap_curve(const RunDir& run) {
  if (run.mode() != Mode::with_pass)
    throw ConfigError("overlap analysis needs a with-pass run");
  CurveSeries curve;
  curve.label = "overlap";
  const std::uint32_t levels = run.completed_levels();
  for (std::uint32_t x = 0; x < levels; ++x) {
    if (!run.has(SheetKind::winner_pass, x) || !run.has(SheetKind::loser_pass, x))
      throw ConfigError("overlap analysis needs emitted What and Lhat sheets (level " +
                        std::to_string(x) + " missing)");
    const Sheet what = run.sheet(SheetKind::winner_pass, x);
    const Sheet lhat = run.sheet(SheetKind::loser_pass, x);
    const Sheet unperturbed = supermex(run.game(), what, x);
    const std::uint32_t rows = std::min(run.exact_rows(x), what.height());
    if (rows == 0) break;
    curve.points.emplace_back(
        x, static_cast<double>(detail::agreement_rows(lhat, unperturbed, rows)) /
               static_cast<double>(rows));
  }
  return curve;
}

// Runs the configured perturbed game twice: once as given, once with one
// extra designated N-position placed on the base run's P-position in row
// `perturb_row` of level `perturb_level`. The curve reports, per level, the
// fraction of rows whose P column differs. Levels below the perturbation are
// identically zero because the recursion only looks downward.
inline CurveSeries sensitivity_curve(const RunConfig& base, std::uint32_t perturb_level,
                                     std::uint32_t perturb_row) {
  base.validate();
  if (base.mode != Mode::generic)
    throw ConfigError("sensitivity analysis perturbs a generic run");
  if (perturb_level >= base.levels)
    throw ConfigError("perturbation level must lie below the run's level count");
  const std::uint32_t width = base.effective_width();
  const std::uint32_t height = base.allocated_height();
  if (perturb_row >= height) throw ConfigError("perturbation row outside the sheet");

  CurveSeries curve;
  curve.label = "sensitivity";

  auto source_a = base.make_variant_source();
  Recursion a(base.game, Mode::generic, height, width, source_a.get());
  for (std::uint32_t x = 0; x < perturb_level; ++x) {
    a.step();
    curve.points.emplace_back(x, 0.0);
  }

  Sheet resume_winner = a.winner();
  Recursion::Output out_a = a.step();
  const std::optional<std::uint32_t> pz = out_a.loser.row_first_set(perturb_row);
  if (!pz)
    throw ConfigError("row " + std::to_string(perturb_row) + " of level " +
                      std::to_string(perturb_level) + " has no P-position to perturb");

  auto source_b = base.make_variant_source();
  OverlayVariant overlay(source_b.get(), {VariantPoint{perturb_level, perturb_row, *pz}});
  Recursion b = Recursion::resume(base.game, Mode::generic, perturb_level,
                                  std::move(resume_winner), std::nullopt, &overlay);

  const auto window = [&](std::uint32_t x) {
    return base.game == Game::nim3 ? height : (x < height ? height - x : 0);
  };
  for (std::uint32_t x = perturb_level; x < base.levels; ++x) {
    if (x > perturb_level) out_a = a.step();
    const Recursion::Output out_b = b.step();
    const std::uint32_t rows = window(x);
    if (rows == 0) break;
    const std::uint32_t agree = detail::agreement_rows(out_a.loser, out_b.loser, rows);
    curve.points.emplace_back(x, static_cast<double>(rows - agree) / static_cast<double>(rows));
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Block densities and geometry correlation
// ---------------------------------------------------------------------------

struct Region {
  std::uint32_t y0 = 0;
  std::uint32_t z0 = 0;
  std::uint32_t ext_y = 0;
  std::uint32_t ext_z = 0;
};

struct DensityGrid {
  std::uint32_t k = 0;
  std::vector<double> cells;  // row-major k*k occupancy fractions

  double at(std::uint32_t i, std::uint32_t j) const { return cells[static_cast<size_t>(i) * k + j]; }

  double mean() const {
    double s = 0;
    for (const double v : cells) s += v;
    return s / static_cast<double>(cells.size());
  }
};

// Occupancy fraction per block of a k x k partition of the region. Extents
// are truncated down to a multiple of k so the blocks tile exactly.
inline DensityGrid density_grid(const Sheet& s, Region region, std::uint32_t k) {
  if (k == 0) throw ConfigError("density grid needs k >= 1");
  region.ext_y -= region.ext_y % k;
  region.ext_z -= region.ext_z % k;
  if (region.ext_y == 0 || region.ext_z == 0)
    throw ConfigError("region is empty after truncation to a multiple of k");
  if (region.y0 + region.ext_y > s.height() || region.z0 + region.ext_z > s.width())
    throw ConfigError("density region exceeds the sheet");
  const std::uint32_t by = region.ext_y / k;
  const std::uint32_t bz = region.ext_z / k;
  DensityGrid grid;
  grid.k = k;
  grid.cells.assign(static_cast<size_t>(k) * k, 0.0);
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = 0; j < k; ++j) {
      std::uint64_t n = 0;
      for (std::uint32_t dy = 0; dy < by; ++dy)
        for (std::uint32_t dz = 0; dz < bz; ++dz)
          n += s.get(region.y0 + i * by + dy, region.z0 + j * bz + dz);
      grid.cells[static_cast<size_t>(i) * k + j] =
          static_cast<double>(n) / (static_cast<double>(by) * bz);
    }
  }
  return grid;
}

// Pearson correlation of two grids; nullopt when either grid has no
// variance (correlation undefined, deliberately not reported as 0).
inline std::optional<double> pearson(const DensityGrid& a, const DensityGrid& b) {
  if (a.k != b.k) throw ContractError("density grids must share k");
  const size_t n = a.cells.size();
  const double ma = a.mean();
  const double mb = b.mean();
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < n; ++i) {
    const double da = a.cells[i] - ma;
    const double db = b.cells[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

namespace detail {

inline Sheet winner_sheet_of(const RunDir& run, std::uint32_t level) {
  const SheetKind kind = winner_kind_for(run.mode());
  if (!run.has(kind, level))
    throw ConfigError("run " + run.dir().string() + " has no winner sheet at level " +
                      std::to_string(level));
  return run.sheet(kind, level);
}

inline std::uint32_t clamp_extent(const RunDir& run, std::uint32_t level, std::uint32_t want) {
  const std::uint32_t rows = run.exact_rows(level);
  return std::min({want, rows, run.manifest().width});
}

}  // namespace detail

// Block-density correlation between the winner sheets at levels x and 2x,
// taken over corresponding square corner regions of extents c*x and 2*c*x.
inline std::optional<double> scale_similarity(const RunDir& run, std::uint32_t x,
                                              std::uint32_t k = 32, double c = 2.0) {
  if (x == 0) throw ConfigError("scale similarity needs a positive level");
  std::uint32_t e1 = static_cast<std::uint32_t>(c * x);
  e1 = std::min(e1, detail::clamp_extent(run, x, e1));
  e1 = std::min(e1, detail::clamp_extent(run, 2 * x, 2 * e1) / 2);
  // truncate to a grid multiple before doubling so the two regions stay in
  // exact 1:2 correspondence
  e1 -= e1 % k;
  if (e1 < k) throw ConfigError("region too small for the requested grid");
  const Sheet lo = detail::winner_sheet_of(run, x);
  const Sheet hi = detail::winner_sheet_of(run, 2 * x);
  const DensityGrid g1 = density_grid(lo, Region{0, 0, e1, e1}, k);
  const DensityGrid g2 = density_grid(hi, Region{0, 0, 2 * e1, 2 * e1}, k);
  return pearson(g1, g2);
}

// Block-density correlation between two runs' winner sheets at the same
// level, over the same square corner region of extent c*x.
inline std::optional<double> geometry_correlation(const RunDir& a, const RunDir& b,
                                                  std::uint32_t x, std::uint32_t k = 32,
                                                  double c = 2.0) {
  if (a.game() != b.game()) throw ConfigError("geometry comparison needs runs of the same game");
  if (x == 0) throw ConfigError("geometry correlation needs a positive level");
  std::uint32_t e = static_cast<std::uint32_t>(c * x);
  e = std::min({e, detail::clamp_extent(a, x, e), detail::clamp_extent(b, x, e)});
  if (e < k) throw ConfigError("region too small for the requested grid");
  const DensityGrid ga = density_grid(detail::winner_sheet_of(a, x), Region{0, 0, e, e}, k);
  const DensityGrid gb = density_grid(detail::winner_sheet_of(b, x), Region{0, 0, e, e}, k);
  return pearson(ga, gb);
}

}  // namespace passage

#endif  // PASSAGE_ANALYSIS_HPP
