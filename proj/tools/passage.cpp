// passage: compute instant-winner and loser sheet stacks for 3-pile Nim and
// 3-row Chomp (pure, with a one-time pass, or rule-perturbed), verify them
// against independent oracles, run the quantitative experiments, and render
// sheets as PGM images.
//
// Exit codes: 0 success, 2 verification mismatch, 3 overflow abort,
// 4 configuration error.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "passage/analysis.hpp"
#include "passage/engine.hpp"
#include "passage/oracle.hpp"
#include "passage/render.hpp"
#include "passage/verify.hpp"

namespace fs = std::filesystem;
using namespace passage;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 2;
constexpr int kExitOverflow = 3;
constexpr int kExitConfig = 4;

unsigned harness_threads() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("PASSAGE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && static_cast<unsigned>(v) < n) n = static_cast<unsigned>(v);
  }
  return n;
}

std::vector<VariantPoint> parse_variant_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open variant file " + path.string());
  std::vector<VariantPoint> points;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    if (lineno == 1 && line.find_first_not_of("xyz, \t") == std::string::npos) continue;
    VariantPoint p;
    if (std::sscanf(line.c_str() + start, "%u ,%u ,%u", &p.x, &p.y, &p.z) != 3)
      throw ConfigError("variant file " + path.string() + ": bad line " +
                        std::to_string(lineno) + " (want x,y,z)");
    points.push_back(p);
  }
  return points;
}

std::optional<std::vector<SheetKind>> parse_emit(const std::string& spec) {
  if (spec.empty() || spec == "default") return std::nullopt;
  std::vector<SheetKind> kinds;
  if (spec == "none") return kinds;
  size_t pos = 0;
  while (pos <= spec.size()) {
    const size_t comma = spec.find(',', pos);
    const std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
    const auto kind = parse_kind(tok);
    if (!kind) throw ConfigError("unknown sheet kind '" + tok + "' in --emit");
    kinds.push_back(*kind);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return kinds;
}

void print_mismatches(const DiffReport& rep) {
  std::printf("%llu mismatches over %llu cells\n",
              static_cast<unsigned long long>(rep.total_mismatches),
              static_cast<unsigned long long>(rep.cells_compared));
  for (const OracleMismatch& m : rep.sample) {
    std::printf("  %s level %u cell (%u, %u): engine %c, oracle %c\n",
                std::string(kind_token(m.kind)).c_str(), m.level, m.y, m.z,
                m.engine_p ? 'P' : 'N', m.oracle_p ? 'P' : 'N');
  }
  if (rep.sample.size() < rep.total_mismatches) std::printf("  ... (listing truncated)\n");
}

int finish_run(const RunManifest& m, const fs::path& out) {
  if (m.status == "overflow") {
    std::printf("overflow at level %u (row %u): width too small; "
                "%u completed levels kept in %s\n",
                *m.failed_level, *m.failed_row, m.completed_levels(), out.string().c_str());
    return kExitOverflow;
  }
  std::printf("completed %u levels into %s (%zu files)\n", m.levels, out.string().c_str(),
              m.files.size());
  return kExitOk;
}

RunConfig base_config(const std::string& game, const std::string& mode, std::uint32_t levels,
                      std::uint32_t width, std::uint32_t height) {
  RunConfig cfg;
  cfg.game = parse_game(game);
  cfg.mode = parse_mode(mode);
  cfg.levels = levels;
  cfg.width = width;
  cfg.target_height = height;
  return cfg;
}

// Loads a run, computing it first when absent and a compute spec was given.
RunDir ensure_run(const fs::path& dir, const std::optional<RunConfig>& spec) {
  if (!fs::exists(dir / "manifest.json") && spec) {
    RunConfig cfg = *spec;
    cfg.out_dir = dir;
    const RunManifest m = run(cfg);
    if (m.status != "complete")
      throw OverflowError(*m.failed_row, static_cast<std::int64_t>(*m.failed_level));
    std::printf("computed %s run (%u levels) into %s\n", std::string(mode_name(cfg.mode)).c_str(),
                cfg.levels, dir.string().c_str());
  }
  return load_run(dir);
}

void print_curve_stats(const CurveSeries& curve) {
  if (curve.points.empty()) return;
  double sum = 0, lo = 1e300, hi = -1e300;
  for (const auto& [x, v] : curve.points) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::printf("%s: %zu levels, mean %.6f, min %.6f, max %.6f\n", curve.label.c_str(),
              curve.points.size(), sum / static_cast<double>(curve.points.size()), lo, hi);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"instant-winner sheet dynamics for Nim and Chomp with passes"};
  app.require_subcommand(1);

  // ---- compute ----
  auto* compute = app.add_subcommand("compute", "run a sheet-stack computation");
  std::string c_game, c_mode, c_emit, c_variant_file;
  std::uint32_t c_levels = 0, c_width = 0, c_height = 0;
  double c_sigma = -1.0;
  std::uint64_t c_seed = 0;
  fs::path c_out;
  compute->add_option("--game", c_game, "nim | chomp")->required();
  compute->add_option("--mode", c_mode, "pure | pass | generic")->required();
  compute->add_option("--levels", c_levels, "levels to compute")->required();
  compute->add_option("--width", c_width, "sheet width (default 4*levels+64)");
  compute->add_option("--height", c_height, "target height (default width/2)");
  compute->add_option("--variant-file", c_variant_file, "CSV of x,y,z points declared automatic N");
  compute->add_option("--per-column-sigma", c_sigma,
                      "one normal perturbation per row, around the diagonal");
  compute->add_option("--seed", c_seed, "RNG seed for generic runs");
  compute->add_option("--emit", c_emit, "comma list of sheet kinds, 'default' or 'none'");
  compute->add_option("--out", c_out, "output directory")->required();

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "check a run against an independent oracle");
  std::string v_oracle, v_equivalence, v_game;
  fs::path v_run, v_dump;
  std::uint32_t v_bound = 0, v_levels = 0, v_width = 0, v_height = 0;
  size_t v_limit = 16;
  verify->add_option("--run", v_run, "run directory");
  verify->add_option("--oracle", v_oracle, "bouton | closed-form | brute");
  verify->add_option("--bound", v_bound, "oracle bound (nim box side / chomp sum)");
  verify->add_option("--limit", v_limit, "max mismatches listed");
  verify->add_option("--dump", v_dump, "write the brute-force table as CSV");
  verify->add_option("--equivalence", v_equivalence, "pass-generic");
  verify->add_option("--game", v_game, "game for --equivalence");
  verify->add_option("--levels", v_levels, "levels for --equivalence");
  verify->add_option("--width", v_width, "width for --equivalence");
  verify->add_option("--height", v_height, "target height for --equivalence");

  // ---- experiment ----
  auto* experiment = app.add_subcommand("experiment", "reproduce the numerical experiments");
  experiment->require_subcommand(1);

  auto* overlap = experiment->add_subcommand(
      "overlap", "per-level agreement between with-pass losers and pass-free losers");
  fs::path o_run, o_csv;
  std::string o_game;
  std::uint32_t o_levels = 0, o_width = 0, o_height = 0;
  overlap->add_option("--run", o_run, "with-pass run directory")->required();
  overlap->add_option("--csv", o_csv, "CSV output path");
  overlap->add_option("--game", o_game, "compute the run on demand: game");
  overlap->add_option("--levels", o_levels, "compute the run on demand: levels");
  overlap->add_option("--width", o_width, "compute the run on demand: width");
  overlap->add_option("--height", o_height, "compute the run on demand: target height");

  auto* sens = experiment->add_subcommand(
      "sensitivity", "per-level divergence after one extra designated N-position");
  std::string s_game = "nim", s_variant_file;
  std::uint32_t s_levels = 100, s_x0 = 50, s_width = 0, s_height = 0;
  std::int64_t s_y0 = -1;
  double s_sigma = -1.0;
  std::uint64_t s_seed = 0;
  fs::path s_csv;
  sens->add_option("--game", s_game, "nim | chomp");
  sens->add_option("--levels", s_levels, "levels to compute");
  sens->add_option("--perturb-level", s_x0, "level receiving the extra perturbation")->required();
  sens->add_option("--perturb-row", s_y0, "row whose P is designated N (default perturb-level/2)");
  sens->add_option("--width", s_width, "sheet width");
  sens->add_option("--height", s_height, "target height");
  sens->add_option("--per-column-sigma", s_sigma, "base run per-column perturbations");
  sens->add_option("--seed", s_seed, "base run seed");
  sens->add_option("--variant-file", s_variant_file, "base run explicit variant points");
  sens->add_option("--csv", s_csv, "CSV output path")->required();

  auto* scale = experiment->add_subcommand(
      "scale", "density correlation between the winner sheets at x and 2x");
  fs::path sc_run;
  std::string sc_game, sc_mode;
  std::uint32_t sc_level = 0, sc_levels = 0, sc_k = 32;
  double sc_c = 2.0;
  scale->add_option("--run", sc_run, "run directory")->required();
  scale->add_option("--level", sc_level, "lower level x")->required();
  scale->add_option("--k", sc_k, "density grid size");
  scale->add_option("--c", sc_c, "region extent factor");
  scale->add_option("--game", sc_game, "compute the run on demand: game");
  scale->add_option("--mode", sc_mode, "compute the run on demand: mode");
  scale->add_option("--levels", sc_levels, "compute the run on demand: levels (default 2x)");

  auto* geom = experiment->add_subcommand(
      "geometry", "density correlation between two runs' winner sheets at one level");
  fs::path g_run_a, g_run_b, g_dir;
  std::string g_game;
  std::uint32_t g_level = 0, g_levels = 0, g_k = 32;
  double g_c = 2.0;
  geom->add_option("--run-a", g_run_a, "first run directory");
  geom->add_option("--run-b", g_run_b, "second run directory");
  geom->add_option("--level", g_level, "level to compare")->required();
  geom->add_option("--k", g_k, "density grid size");
  geom->add_option("--c", g_c, "region extent factor");
  geom->add_option("--game", g_game, "on-demand mode: game (builds pure and pass runs)");
  geom->add_option("--dir", g_dir, "on-demand mode: work directory");
  geom->add_option("--levels", g_levels, "on-demand mode: levels (default --level)");

  // ---- render ----
  auto* render = app.add_subcommand("render", "draw a level as a PGM image");
  fs::path r_run, r_out;
  std::uint32_t r_level = 0;
  std::string r_compose = "winners";
  render->add_option("--run", r_run, "run directory")->required();
  render->add_option("--level", r_level, "level to draw")->required();
  render->add_option("--compose", r_compose, "winners | losers | winners,losers");
  render->add_option("--out", r_out, "output image path")->required();

  // ---- info ----
  auto* info = app.add_subcommand("info", "print a run's manifest summary");
  fs::path i_run;
  bool i_check = false;
  info->add_option("--run", i_run, "run directory")->required();
  info->add_flag("--check", i_check, "re-verify every file checksum");

  try {
    app.parse(argc, argv);

    if (*compute) {
      RunConfig cfg = base_config(c_game, c_mode, c_levels, c_width, c_height);
      cfg.seed = c_seed;
      cfg.emit = parse_emit(c_emit);
      cfg.out_dir = c_out;
      if (!c_variant_file.empty() && c_sigma >= 0.0)
        throw ConfigError("--variant-file and --per-column-sigma are mutually exclusive");
      if (!c_variant_file.empty()) {
        cfg.variant.kind = VariantSpec::Kind::explicit_points;
        cfg.variant.points = parse_variant_csv(c_variant_file);
      } else if (c_sigma >= 0.0) {
        cfg.variant.kind = VariantSpec::Kind::per_column_normal;
        cfg.variant.sigma = c_sigma;
      }
      return finish_run(run(cfg), c_out);
    }

    if (*verify) {
      if (!v_equivalence.empty()) {
        if (v_equivalence != "pass-generic")
          throw ConfigError("unknown equivalence check '" + v_equivalence + "'");
        if (v_game.empty() || v_levels == 0)
          throw ConfigError("--equivalence needs --game and --levels");
        const EquivalenceReport rep =
            check_pass_generic_equivalence(parse_game(v_game), v_levels, v_height, v_width);
        if (rep.identical()) {
          std::printf("pass and generic runs identical over %u levels\n", rep.levels_checked);
          return kExitOk;
        }
        std::printf("DIVERGENCE at level %u\n", *rep.first_divergence);
        return kExitMismatch;
      }
      if (v_run.empty() || v_oracle.empty())
        throw ConfigError("verify needs --run with --oracle, or --equivalence");
      const RunDir dir = load_run(v_run);
      DiffReport rep;
      if (v_oracle == "bouton") {
        rep = diff_run_bouton(dir, v_limit);
      } else if (v_oracle == "closed-form") {
        rep = diff_run_closed_form(dir, v_limit);
      } else if (v_oracle == "brute") {
        const bool with_pass = dir.mode() == Mode::with_pass;
        const std::uint32_t bound =
            v_bound != 0 ? v_bound : (dir.game() == Game::nim3 ? 48u : 60u);
        const OracleTable table = OracleTable::build(dir.game(), with_pass, bound);
        if (!v_dump.empty()) {
          std::ofstream out(v_dump, std::ios::binary);
          if (!out) throw ConfigError("cannot open " + v_dump.string());
          table.dump_csv(out);
        }
        rep = diff_run(dir, table, v_limit);
      } else {
        throw ConfigError("unknown oracle '" + v_oracle + "'");
      }
      print_mismatches(rep);
      return rep.clean() ? kExitOk : kExitMismatch;
    }

    if (*overlap) {
      std::optional<RunConfig> spec;
      if (!o_game.empty() && o_levels != 0)
        spec = base_config(o_game, "pass", o_levels, o_width, o_height);
      const RunDir dir = ensure_run(o_run, spec);
      const CurveSeries curve = overlap_curve(dir);
      print_curve_stats(curve);
      if (curve.points.size() > 200) {
        std::printf("window means: x in [1,50] -> %.6f, x in [150,200] -> %.6f\n",
                    curve.mean_over(1, 50), curve.mean_over(150, 200));
      }
      if (!o_csv.empty()) write_curve_csv_atomic(curve, o_csv);
      return kExitOk;
    }

    if (*sens) {
      RunConfig base = base_config(s_game, "generic", s_levels, s_width, s_height);
      base.seed = s_seed;
      if (!s_variant_file.empty()) {
        base.variant.kind = VariantSpec::Kind::explicit_points;
        base.variant.points = parse_variant_csv(s_variant_file);
      } else if (s_sigma >= 0.0) {
        base.variant.kind = VariantSpec::Kind::per_column_normal;
        base.variant.sigma = s_sigma;
      }
      const std::uint32_t y0 = s_y0 >= 0 ? static_cast<std::uint32_t>(s_y0) : s_x0 / 2;
      const CurveSeries curve = sensitivity_curve(base, s_x0, y0);
      print_curve_stats(curve);
      write_curve_csv_atomic(curve, s_csv);
      return kExitOk;
    }

    if (*scale) {
      std::optional<RunConfig> spec;
      if (!sc_game.empty() && !sc_mode.empty())
        spec = base_config(sc_game, sc_mode, sc_levels != 0 ? sc_levels : 2 * sc_level, 0, 0);
      const RunDir dir = ensure_run(sc_run, spec);
      const auto corr = scale_similarity(dir, sc_level, sc_k, sc_c);
      if (!corr) {
        std::printf("correlation undefined (a grid has zero variance)\n");
        return kExitConfig;
      }
      std::printf("scale similarity W_%u vs W_%u: %.6f\n", sc_level, 2 * sc_level, *corr);
      return kExitOk;
    }

    if (*geom) {
      fs::path path_a = g_run_a, path_b = g_run_b;
      if (!g_game.empty()) {
        if (g_dir.empty()) throw ConfigError("on-demand geometry needs --dir");
        const std::uint32_t levels = g_levels != 0 ? g_levels : g_level;
        path_a = g_dir / (g_game + "-pure");
        path_b = g_dir / (g_game + "-pass");
        std::exception_ptr failure;
        const auto build = [&](const fs::path& out, const char* mode) {
          try {
            ensure_run(out, base_config(g_game, mode, levels, 0, 0));
          } catch (...) {
            failure = std::current_exception();
          }
        };
        if (harness_threads() > 1) {
          std::thread t(build, path_a, "pure");
          build(path_b, "pass");
          t.join();
        } else {
          build(path_a, "pure");
          build(path_b, "pass");
        }
        if (failure) std::rethrow_exception(failure);
      }
      if (path_a.empty() || path_b.empty())
        throw ConfigError("geometry needs --run-a/--run-b, or --game with --dir");
      const RunDir a = load_run(path_a);
      const RunDir b = load_run(path_b);
      const auto corr = geometry_correlation(a, b, g_level, g_k, g_c);
      if (!corr) {
        std::printf("correlation undefined (a grid has zero variance)\n");
        return kExitConfig;
      }
      std::printf("geometry correlation at level %u: %.6f\n", g_level, *corr);
      return kExitOk;
    }

    if (*render) {
      const RunDir dir = load_run(r_run);
      const bool want_w = r_compose.find("winners") != std::string::npos;
      const bool want_l = r_compose.find("losers") != std::string::npos;
      if (!want_w && !want_l)
        throw ConfigError("--compose must name winners, losers, or both");
      std::optional<Sheet> winners, losers;
      if (want_w) winners = dir.sheet(winner_kind_for(dir.mode()), r_level);
      if (want_l) losers = dir.sheet(loser_kind_for(dir.mode()), r_level);
      render_pgm_atomic(winners ? &*winners : nullptr, losers ? &*losers : nullptr, r_out);
      std::printf("wrote %s\n", r_out.string().c_str());
      return kExitOk;
    }

    if (*info) {
      const RunDir dir = load_run(i_run);
      const RunManifest& m = dir.manifest();
      std::printf("game %s, mode %s, levels %u (completed %u), %ux%u, seed %llu, status %s\n",
                  std::string(game_name(m.game)).c_str(),
                  std::string(mode_name(m.mode)).c_str(), m.levels, m.completed_levels(),
                  m.height, m.width, static_cast<unsigned long long>(m.seed), m.status.c_str());
      std::printf("engine %s, %zu files\n", m.engine_version.c_str(), m.files.size());
      if (i_check) {
        for (std::uint32_t x = 0; x <= m.levels; ++x)
          for (std::uint8_t k = 0; k <= 6; ++k)
            if (dir.has(static_cast<SheetKind>(k), x))
              dir.sheet(static_cast<SheetKind>(k), x);
        std::printf("all checksums verify\n");
      }
      return kExitOk;
    }
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  } catch (const OverflowError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOverflow;
  } catch (const IntegrityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitMismatch;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
