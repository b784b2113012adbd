// Cross-checks between persisted runs and the independent oracles, plus the
// in-memory pass/generic equivalence check.
#ifndef PASSAGE_VERIFY_HPP
#define PASSAGE_VERIFY_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "passage/engine.hpp"
#include "passage/oracle.hpp"
#include "passage/rules.hpp"
#include "passage/types.hpp"

namespace passage {

struct OracleMismatch {
  SheetKind kind = SheetKind::loser;
  std::uint32_t level = 0;
  std::uint32_t y = 0;
  std::uint32_t z = 0;
  bool engine_p = false;
  bool oracle_p = false;
};

struct DiffReport {
  std::uint64_t cells_compared = 0;
  std::uint64_t total_mismatches = 0;
  std::vector<OracleMismatch> sample;  // first `limit` mismatches

  bool clean() const { return total_mismatches == 0 && cells_compared > 0; }
};

namespace detail {

inline void note_mismatch(DiffReport& rep, size_t limit, SheetKind kind, std::uint32_t level,
                          std::uint32_t y, std::uint32_t z, bool engine_p, bool oracle_p) {
  ++rep.total_mismatches;
  if (rep.sample.size() < limit)
    rep.sample.push_back({kind, level, y, z, engine_p, oracle_p});
}

}  // namespace detail

// Compares a run's loser sheets (set = P, clear = N) against a brute-force
// table on the intersection of their exact regions. Pure runs check the
// no-pass classification; with-pass runs check the pass classification and,
// when the co-run loser sheets were emitted, the no-pass one as well.
inline DiffReport diff_run(const RunDir& run, const OracleTable& oracle, size_t limit = 64) {
  if (run.game() != oracle.game())
    throw ConfigError("run and oracle disagree on the game");
  if (run.mode() == Mode::generic)
    throw ConfigError("generic runs have no brute-force oracle; verify pure or pass runs");
  if (run.mode() == Mode::with_pass && !oracle.with_pass())
    throw ConfigError("with-pass run needs a pass-aware oracle");

  struct Check {
    SheetKind kind;
    bool pass_bit;
  };
  std::vector<Check> checks;
  if (run.mode() == Mode::pure) {
    checks.push_back({SheetKind::loser, false});
  } else {
    checks.push_back({SheetKind::loser_pass, true});
    if (run.has(SheetKind::loser, 0)) checks.push_back({SheetKind::loser, false});
  }

  const std::uint32_t bound = oracle.bound();
  const std::uint32_t max_level =
      std::min<std::uint32_t>(run.completed_levels(),
                              run.game() == Game::nim3 ? bound : bound + 1);
  DiffReport rep;
  for (std::uint32_t x = 0; x < max_level; ++x) {
    const std::uint32_t rows = std::min(run.exact_rows(x), run.manifest().height);
    for (const Check& c : checks) {
      if (!run.has(c.kind, x)) continue;
      const Sheet s = run.sheet(c.kind, x);
      const std::uint32_t y_hi = std::min<std::uint32_t>(rows, s.height());
      for (std::uint32_t y = 0; y < y_hi; ++y) {
        for (std::uint32_t z = 0; z < s.width(); ++z) {
          if (!oracle.in_bounds(x, y, z)) continue;
          ++rep.cells_compared;
          const bool engine_p = s.get(y, z);
          const bool oracle_p = oracle.is_p(x, y, z, c.pass_bit);
          if (engine_p != oracle_p)
            detail::note_mismatch(rep, limit, c.kind, x, y, z, engine_p, oracle_p);
        }
      }
    }
  }
  if (rep.cells_compared == 0)
    throw ConfigError("run and oracle bounds do not overlap");
  return rep;
}

// Pure Nim loser sheets against the nim-sum criterion.
inline DiffReport diff_run_bouton(const RunDir& run, size_t limit = 64) {
  if (run.game() != Game::nim3 || run.mode() != Mode::pure)
    throw ConfigError("the nim-sum oracle applies to pure Nim runs");
  DiffReport rep;
  for (std::uint32_t x = 0; x < run.completed_levels(); ++x) {
    if (!run.has(SheetKind::loser, x)) continue;
    const Sheet s = run.sheet(SheetKind::loser, x);
    for (std::uint32_t y = 0; y < s.height(); ++y) {
      for (std::uint32_t z = 0; z < s.width(); ++z) {
        ++rep.cells_compared;
        const bool engine_p = s.get(y, z);
        const bool oracle_p = bouton_p(x, y, z);
        if (engine_p != oracle_p)
          detail::note_mismatch(rep, limit, SheetKind::loser, x, y, z, engine_p, oracle_p);
      }
    }
  }
  if (rep.cells_compared == 0) throw ConfigError("run has no loser sheets to verify");
  return rep;
}

// Pure Nim winner sheets against the closed form (y xor z) < x.
inline DiffReport diff_run_closed_form(const RunDir& run, size_t limit = 64) {
  if (run.game() != Game::nim3 || run.mode() != Mode::pure)
    throw ConfigError("the closed-form oracle applies to pure Nim runs");
  DiffReport rep;
  for (std::uint32_t x = 0; x <= run.completed_levels(); ++x) {
    if (!run.has(SheetKind::winner, x)) continue;
    const Sheet s = run.sheet(SheetKind::winner, x);
    for (std::uint32_t y = 0; y < s.height(); ++y) {
      for (std::uint32_t z = 0; z < s.width(); ++z) {
        ++rep.cells_compared;
        const bool engine_w = s.get(y, z);
        const bool oracle_w = nim_winner_closed_form(x, y, z);
        if (engine_w != oracle_w)
          detail::note_mismatch(rep, limit, SheetKind::winner, x, y, z, engine_w, oracle_w);
      }
    }
  }
  if (rep.cells_compared == 0) throw ConfigError("run has no winner sheets to verify");
  return rep;
}

struct EquivalenceReport {
  std::uint32_t levels_checked = 0;
  std::optional<std::uint32_t> first_divergence;

  bool identical() const { return !first_divergence.has_value(); }
};

// Runs the with-pass recursion next to a generic recursion whose variant
// sheets are the (independently co-computed) pass-winners, and compares every
// loser and winner sheet bit for bit.
inline EquivalenceReport check_pass_generic_equivalence(Game game, std::uint32_t levels,
                                                        std::uint32_t target_height = 0,
                                                        std::uint32_t width = 0) {
  if (levels == 0) throw ConfigError("levels must be at least 1");
  const std::uint32_t w = width != 0 ? width : 4 * levels + 64;
  const std::uint32_t t =
      target_height != 0 ? target_height : std::max<std::uint32_t>(1, w / 2);
  const std::uint32_t h = game == Game::chomp3 ? t + levels : t;

  Recursion pass_rec(game, Mode::with_pass, h, w);
  PassWinnerVariant source(game, h, w);
  Recursion generic_rec(game, Mode::generic, h, w, &source);

  EquivalenceReport rep;
  for (std::uint32_t x = 0; x < levels; ++x) {
    const Recursion::Output a = pass_rec.step();
    const Recursion::Output b = generic_rec.step();
    ++rep.levels_checked;
    if (a.loser != b.loser || pass_rec.winner() != generic_rec.winner()) {
      rep.first_divergence = x;
      break;
    }
  }
  return rep;
}

}  // namespace passage

#endif  // PASSAGE_VERIFY_HPP
