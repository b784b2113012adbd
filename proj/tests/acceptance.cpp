// Acceptance suite. Each criterion is a self-contained check over the real
// engine/analysis pipeline with its thresholds and time budgets pinned in
// code; the binary prints one PASS/FAIL line per criterion and exits
// non-zero if any fail. Run with no arguments for all criteria, or pass
// criterion numbers to run a subset.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "passage/analysis.hpp"
#include "passage/engine.hpp"
#include "passage/oracle.hpp"
#include "passage/verify.hpp"

using namespace passage;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Workspace {
  fs::path root;
  explicit Workspace(const std::string& tag) {
    root = fs::temp_directory_path() /
           ("passage-acceptance-" + std::to_string(::getpid()) + "-" + tag);
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }
  fs::path dir(const std::string& name) const { return root / name; }
};

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

char buf[512];

// 1. Pure-Nim loser sheets equal the nim-sum-zero set for x < 128, y < 256,
//    z across the whole width; under 10 s.
bool criterion1(std::string& detail) {
  const auto t0 = Clock::now();
  Workspace ws("c1");
  RunConfig cfg;
  cfg.game = Game::nim3;
  cfg.mode = Mode::pure;
  cfg.levels = 128;
  cfg.width = 576;
  cfg.target_height = 256;
  cfg.out_dir = ws.dir("purenim");
  if (run(cfg).status != "complete") {
    detail = "run overflowed";
    return false;
  }
  const DiffReport rep = diff_run_bouton(load_run(cfg.out_dir));
  const double secs = elapsed(t0);
  std::snprintf(buf, sizeof(buf), "%llu mismatches over %llu cells, %.1fs (budget 10s)",
                (unsigned long long)rep.total_mismatches,
                (unsigned long long)rep.cells_compared, secs);
  detail = buf;
  return rep.clean() && secs < 10.0;
}

// 2. Pure-Nim winner sheets equal the closed form (y xor z) < x on the same
//    range.
bool criterion2(std::string& detail) {
  Workspace ws("c2");
  RunConfig cfg;
  cfg.game = Game::nim3;
  cfg.mode = Mode::pure;
  cfg.levels = 128;
  cfg.width = 576;
  cfg.target_height = 256;
  cfg.out_dir = ws.dir("purenim");
  if (run(cfg).status != "complete") {
    detail = "run overflowed";
    return false;
  }
  const DiffReport rep = diff_run_closed_form(load_run(cfg.out_dir));
  std::snprintf(buf, sizeof(buf), "%llu mismatches over %llu cells",
                (unsigned long long)rep.total_mismatches,
                (unsigned long long)rep.cells_compared);
  detail = buf;
  return rep.clean();
}

// 3. Pure Chomp equals the retrograde oracle on every position with
//    x+y+z <= 80; under 30 s.
bool criterion3(std::string& detail) {
  const auto t0 = Clock::now();
  Workspace ws("c3");
  RunConfig cfg;
  cfg.game = Game::chomp3;
  cfg.mode = Mode::pure;
  cfg.levels = 81;
  cfg.out_dir = ws.dir("purechomp");
  if (run(cfg).status != "complete") {
    detail = "run overflowed";
    return false;
  }
  const OracleTable table = OracleTable::build(Game::chomp3, false, 80);
  const DiffReport rep = diff_run(load_run(cfg.out_dir), table);
  const double secs = elapsed(t0);
  std::snprintf(buf, sizeof(buf), "%llu mismatches over %llu cells, %.1fs (budget 30s)",
                (unsigned long long)rep.total_mismatches,
                (unsigned long long)rep.cells_compared, secs);
  detail = buf;
  return rep.clean() && secs < 30.0;
}

// 4. Nim-with-a-pass (both loser families) equals the pass-bit oracle on the
//    box x,y,z < 48; under 60 s.
bool criterion4(std::string& detail) {
  const auto t0 = Clock::now();
  Workspace ws("c4");
  RunConfig cfg;
  cfg.game = Game::nim3;
  cfg.mode = Mode::with_pass;
  cfg.levels = 48;
  cfg.out_dir = ws.dir("passnim");
  if (run(cfg).status != "complete") {
    detail = "run overflowed";
    return false;
  }
  const OracleTable table = OracleTable::build(Game::nim3, true, 48);
  const DiffReport rep = diff_run(load_run(cfg.out_dir), table);
  const double secs = elapsed(t0);
  std::snprintf(buf, sizeof(buf), "%llu mismatches over %llu cells, %.1fs (budget 60s)",
                (unsigned long long)rep.total_mismatches,
                (unsigned long long)rep.cells_compared, secs);
  detail = buf;
  return rep.clean() && secs < 60.0;
}

// 5. Chomp-with-a-pass equals the pass-bit oracle on x+y+z <= 60; under 60 s.
bool criterion5(std::string& detail) {
  const auto t0 = Clock::now();
  Workspace ws("c5");
  RunConfig cfg;
  cfg.game = Game::chomp3;
  cfg.mode = Mode::with_pass;
  cfg.levels = 61;
  cfg.out_dir = ws.dir("passchomp");
  if (run(cfg).status != "complete") {
    detail = "run overflowed";
    return false;
  }
  const OracleTable table = OracleTable::build(Game::chomp3, true, 60);
  const DiffReport rep = diff_run(load_run(cfg.out_dir), table);
  const double secs = elapsed(t0);
  std::snprintf(buf, sizeof(buf), "%llu mismatches over %llu cells, %.1fs (budget 60s)",
                (unsigned long long)rep.total_mismatches,
                (unsigned long long)rep.cells_compared, secs);
  detail = buf;
  return rep.clean() && secs < 60.0;
}

// 6. A with-pass run and a generic run fed the pass-winners as variant
//    sheets are bitwise identical to level 200 for both games; under 2 min.
bool criterion6(std::string& detail) {
  const auto t0 = Clock::now();
  const EquivalenceReport nim = check_pass_generic_equivalence(Game::nim3, 200);
  const EquivalenceReport chomp = check_pass_generic_equivalence(Game::chomp3, 200);
  const double secs = elapsed(t0);
  if (!nim.identical() || !chomp.identical()) {
    std::snprintf(buf, sizeof(buf), "divergence (nim %s, chomp %s)",
                  nim.identical() ? "ok" : "bad", chomp.identical() ? "ok" : "bad");
    detail = buf;
    return false;
  }
  std::snprintf(buf, sizeof(buf),
                "both games bitwise identical over 200 levels, %.1fs (budget 120s)", secs);
  detail = buf;
  return secs < 120.0;
}

// 7. Overlap trend for Nim-with-a-pass to level 200: the mean over
//    x in [150,200] exceeds the mean over x in [1,50] by at least 0.05.
bool criterion7(std::string& detail) {
  Workspace ws("c7");
  RunConfig cfg;
  cfg.game = Game::nim3;
  cfg.mode = Mode::with_pass;
  cfg.levels = 201;
  cfg.out_dir = ws.dir("passnim");
  if (run(cfg).status != "complete") {
    detail = "run overflowed";
    return false;
  }
  const CurveSeries curve = overlap_curve(load_run(cfg.out_dir));
  const double lo = curve.mean_over(1, 50);
  const double hi = curve.mean_over(150, 200);
  std::snprintf(buf, sizeof(buf),
                "mean overlap %.4f over [1,50] vs %.4f over [150,200] (need +0.05)", lo, hi);
  detail = buf;
  return hi - lo >= 0.05;
}

// 8. Sensitivity: one extra perturbation at level 50 of a Generic Nim run
//    moves at least 35% of P-positions by some level <= 75, and moves
//    nothing below level 50.
bool criterion8(std::string& detail) {
  RunConfig base;
  base.game = Game::nim3;
  base.mode = Mode::generic;
  base.levels = 100;
  const CurveSeries curve = sensitivity_curve(base, 50, 25);
  double best = 0;
  std::uint32_t best_x = 0;
  for (const auto& [x, v] : curve.points) {
    if (x < 50 && v != 0.0) {
      std::snprintf(buf, sizeof(buf), "nonzero divergence %.4f below the perturbation (x=%u)",
                    v, x);
      detail = buf;
      return false;
    }
    if (x <= 75 && v > best) {
      best = v;
      best_x = x;
    }
  }
  std::snprintf(buf, sizeof(buf), "zero below level 50; peak %.4f at level %u (need >= 0.35)",
                best, best_x);
  detail = buf;
  return best >= 0.35;
}

// 9. Scale invariance: density-grid correlation >= 0.9 between pure-Nim
//    winner sheets 50 and 100, and >= 0.8 between with-pass sheets 55/110.
bool criterion9(std::string& detail) {
  Workspace ws("c9");
  RunConfig pure;
  pure.game = Game::nim3;
  pure.mode = Mode::pure;
  pure.levels = 100;
  pure.out_dir = ws.dir("purenim");
  RunConfig pass;
  pass.game = Game::nim3;
  pass.mode = Mode::with_pass;
  pass.levels = 110;
  pass.out_dir = ws.dir("passnim");
  if (run(pure).status != "complete" || run(pass).status != "complete") {
    detail = "run overflowed";
    return false;
  }
  const auto pure_corr = scale_similarity(load_run(pure.out_dir), 50);
  const auto pass_corr = scale_similarity(load_run(pass.out_dir), 55);
  if (!pure_corr || !pass_corr) {
    detail = "correlation undefined";
    return false;
  }
  std::snprintf(buf, sizeof(buf), "pure 50/100: %.4f (need 0.9); pass 55/110: %.4f (need 0.8)",
                *pure_corr, *pass_corr);
  detail = buf;
  return *pure_corr >= 0.9 && *pass_corr >= 0.8;
}

// 10. Geometry contrast at level 100: the pass-vs-pure winner-sheet
//     correlation for Chomp exceeds the one for Nim by at least 0.2.
bool criterion10(std::string& detail) {
  Workspace ws("c10");
  const auto make = [&](Game g, Mode m, const std::string& name) {
    RunConfig cfg;
    cfg.game = g;
    cfg.mode = m;
    cfg.levels = 100;
    cfg.out_dir = ws.dir(name);
    return run(cfg).status == "complete";
  };
  if (!make(Game::nim3, Mode::pure, "np") || !make(Game::nim3, Mode::with_pass, "nh") ||
      !make(Game::chomp3, Mode::pure, "cp") || !make(Game::chomp3, Mode::with_pass, "ch")) {
    detail = "run overflowed";
    return false;
  }
  const RunDir np = load_run(ws.dir("np")), nh = load_run(ws.dir("nh"));
  const RunDir cp = load_run(ws.dir("cp")), ch = load_run(ws.dir("ch"));
  const auto nim_corr = geometry_correlation(np, nh, 100);
  const auto chomp_corr = geometry_correlation(cp, ch, 100);
  if (!nim_corr || !chomp_corr) {
    detail = "correlation undefined";
    return false;
  }
  std::snprintf(buf, sizeof(buf), "chomp pass-vs-pure %.4f, nim pass-vs-pure %.4f (need gap 0.2)",
                *chomp_corr, *nim_corr);
  detail = buf;
  return *chomp_corr - *nim_corr >= 0.2;
}

// 11. Determinism: identical configs and seeds reproduce byte-identical run
//     directories and experiment CSVs.
bool criterion11(std::string& detail) {
  Workspace ws("c11");
  RunConfig cfg;
  cfg.game = Game::nim3;
  cfg.mode = Mode::generic;
  cfg.levels = 40;
  cfg.seed = 20260808;
  cfg.variant.kind = VariantSpec::Kind::per_column_normal;
  cfg.variant.sigma = 3.5;
  cfg.emit = std::vector<SheetKind>{SheetKind::winner_generic, SheetKind::loser_generic,
                                    SheetKind::variant};
  cfg.out_dir = ws.dir("a");
  const RunManifest ma = run(cfg);
  cfg.out_dir = ws.dir("b");
  const RunManifest mb = run(cfg);
  if (ma.checksums != mb.checksums || ma.files != mb.files) {
    detail = "manifest checksums differ between identical runs";
    return false;
  }
  for (const std::string& f : ma.files) {
    if (slurp(ws.dir("a") / f) != slurp(ws.dir("b") / f)) {
      detail = "file bytes differ: " + f;
      return false;
    }
  }
  if (slurp(ws.dir("a") / "manifest.json") != slurp(ws.dir("b") / "manifest.json")) {
    detail = "manifest bytes differ";
    return false;
  }

  RunConfig sens;
  sens.game = Game::nim3;
  sens.mode = Mode::generic;
  sens.levels = 40;
  sens.seed = 7;
  sens.variant.kind = VariantSpec::Kind::per_column_normal;
  sens.variant.sigma = 2.0;
  const std::string csv1 = curve_to_csv(sensitivity_curve(sens, 10, 5));
  const std::string csv2 = curve_to_csv(sensitivity_curve(sens, 10, 5));
  if (csv1 != csv2) {
    detail = "sensitivity CSV not reproducible";
    return false;
  }

  RunConfig pass;
  pass.game = Game::nim3;
  pass.mode = Mode::with_pass;
  pass.levels = 30;
  pass.out_dir = ws.dir("pass");
  run(pass);
  const RunDir dir = load_run(pass.out_dir);
  if (curve_to_csv(overlap_curve(dir)) != curve_to_csv(overlap_curve(dir))) {
    detail = "overlap CSV not reproducible";
    return false;
  }
  const size_t nfiles = ma.files.size();
  std::snprintf(buf, sizeof(buf),
                "%zu files byte-identical across reruns; experiment CSVs reproducible", nfiles);
  detail = buf;
  return true;
}

// 12. Performance and streaming: Nim-with-a-pass to level 500 at width 2048
//     in under 60 s single-threaded, holding a bounded number of sheets
//     independent of the level count.
bool criterion12(std::string& detail) {
  const std::int64_t base_live = Sheet::live_instances();
  Sheet::reset_peak();
  std::int64_t peak_half = 0;
  {
    Recursion rec(Game::nim3, Mode::with_pass, 1024, 2048);
    for (std::uint32_t x = 0; x < 250; ++x) rec.step();
    peak_half = Sheet::peak_live_instances() - base_live;
  }
  Sheet::reset_peak();
  const auto t0 = Clock::now();
  std::int64_t peak_full = 0;
  std::uint64_t fill = 0;
  {
    Recursion rec(Game::nim3, Mode::with_pass, 1024, 2048);
    for (std::uint32_t x = 0; x < 500; ++x) rec.step();
    peak_full = Sheet::peak_live_instances() - base_live;
    fill = rec.winner().popcount();
  }
  const double secs = elapsed(t0);
  std::snprintf(buf, sizeof(buf),
                "500 levels at 1024x2048 in %.2fs (budget 60s); peak %lld sheets resident "
                "(x500) vs %lld (x250); final fill %.3f",
                secs, (long long)peak_full, (long long)peak_half,
                (double)fill / (1024.0 * 2048.0));
  detail = buf;
  return secs < 60.0 && peak_full <= 10 && peak_full == peak_half;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::string&)> fn;
};

const std::vector<Criterion> kCriteria = {
    {1, "pure Nim losers match the nim-sum oracle", criterion1},
    {2, "pure Nim winners match the closed form", criterion2},
    {3, "pure Chomp matches the retrograde oracle", criterion3},
    {4, "Nim-with-a-pass matches the pass-bit oracle", criterion4},
    {5, "Chomp-with-a-pass matches the pass-bit oracle", criterion5},
    {6, "pass run == generic run fed pass-winners, bitwise", criterion6},
    {7, "overlap trend rises with level", criterion7},
    {8, "single perturbation spreads to >=35% of rows", criterion8},
    {9, "factor-of-two scale invariance of winner sheets", criterion9},
    {10, "pass barely moves Chomp geometry, reshapes Nim's", criterion10},
    {11, "bitwise determinism of runs and experiments", criterion11},
    {12, "level-500 with-pass run streams in bounded memory", criterion12},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  int ran = 0;
  for (const Criterion& c : kCriteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    ++ran;
    std::string detail;
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s — %s\n", ok ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no matching criteria\n");
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
