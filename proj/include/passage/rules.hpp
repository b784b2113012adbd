// Game rules for 3-pile Nim and 3-row Chomp, with and without a one-time
// pass: position validity, move generation, the per-game supermex operators
// and the six single-level recursion steps.
//
// Position coordinates are [x, y, z] with an auxiliary pass flag; x indexes
// the sheet, (y, z) are the in-sheet coordinates. Nim moves shrink exactly
// one coordinate. Chomp moves:
//
//   same sheet:   [x,y,z] -> [x,y,z-t]           0 < t <= z
//                 [x,y,z] -> [x,y-t,z+t]         0 < t <= y
//                 [x,y,z] -> [x,y-t,0]           0 < t <= y
//   lower sheet:  [x,y,z] -> [x-t,y+t,z]         0 < t <= x
//                 [x,y,z] -> [x-t,0,z+y+t]       0 < t <= x
//                 [x,y,z] -> [x-t,0,0]           0 < t <= x
//
// Chomp's [0,0,0] (poison already taken) is not a position; [0,0,1] is the
// terminal. The pass move flips the pass flag and is barred from the
// terminal, so a pass game played from a terminal stays lost.
#ifndef PASSAGE_RULES_HPP
#define PASSAGE_RULES_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "passage/errors.hpp"
#include "passage/sheet.hpp"
#include "passage/types.hpp"

namespace passage {

struct Position {
  Game game = Game::nim3;
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t z = 0;
  bool pass_available = false;

  friend bool operator==(const Position&, const Position&) = default;
};

inline bool position_valid(const Position& p) {
  return p.game == Game::nim3 || (p.x | p.y | p.z) != 0;
}

// Terminal of the no-pass game: Nim [0,0,0], Chomp [0,0,1].
inline bool pure_terminal(Game g, std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  return g == Game::nim3 ? (x == 0 && y == 0 && z == 0) : (x == 0 && y == 0 && z == 1);
}

// Sheet cell of the terminal, present only on the level that contains it.
inline std::optional<std::pair<std::uint32_t, std::uint32_t>> terminal_cell(Game g,
                                                                            std::uint32_t level) {
  if (level != 0) return std::nullopt;
  return g == Game::nim3 ? std::make_pair(0u, 0u) : std::make_pair(0u, 1u);
}

// Visits every legal move from p. The visitor returns true to stop early;
// for_each_child returns true if it was stopped.
template <typename Visit>
inline bool for_each_child(const Position& p, Visit&& visit) {
  if (!position_valid(p)) throw ContractError("invalid position");
  const bool pass = p.pass_available;
  const auto emit = [&](std::uint32_t x, std::uint32_t y, std::uint32_t z, bool h) {
    return visit(Position{p.game, x, y, z, h});
  };
  if (p.game == Game::nim3) {
    for (std::uint32_t t = 1; t <= p.z; ++t)
      if (emit(p.x, p.y, p.z - t, pass)) return true;
    for (std::uint32_t t = 1; t <= p.y; ++t)
      if (emit(p.x, p.y - t, p.z, pass)) return true;
    for (std::uint32_t t = 1; t <= p.x; ++t)
      if (emit(p.x - t, p.y, p.z, pass)) return true;
  } else {
    for (std::uint32_t t = 1; t <= p.z; ++t) {
      if (p.x == 0 && p.y == 0 && t == p.z) continue;  // would land on [0,0,0]
      if (emit(p.x, p.y, p.z - t, pass)) return true;
    }
    for (std::uint32_t t = 1; t <= p.y; ++t)
      if (emit(p.x, p.y - t, p.z + t, pass)) return true;
    for (std::uint32_t t = 1; t <= p.y; ++t) {
      if (p.x == 0 && t == p.y) continue;  // would land on [0,0,0]
      if (emit(p.x, p.y - t, 0, pass)) return true;
    }
    for (std::uint32_t t = 1; t <= p.x; ++t)
      if (emit(p.x - t, p.y + t, p.z, pass)) return true;
    for (std::uint32_t t = 1; t <= p.x; ++t)
      if (emit(p.x - t, 0, p.z + p.y + t, pass)) return true;
    for (std::uint32_t t = 1; t <= p.x; ++t) {
      if (t == p.x) continue;  // would land on [0,0,0]
      if (emit(p.x - t, 0, 0, pass)) return true;
    }
  }
  if (pass && !pure_terminal(p.game, p.x, p.y, p.z)) {
    if (emit(p.x, p.y, p.z, false)) return true;
  }
  return false;
}

inline std::vector<Position> children(const Position& p) {
  std::vector<Position> out;
  for_each_child(p, [&](const Position& c) {
    out.push_back(c);
    return false;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Supermex operators
// ---------------------------------------------------------------------------
//
// Both kernels scan rows upward, pick the lowest unmarked column as the row's
// P-position, and mark that cell's same-sheet parents so later rows see them
// as N. One P per row realizes the same-row parents. The per-row parent set
// is a column for Nim and a falling diagonal for Chomp, so the running mark
// mask is either fixed (Nim) or shifted one column down per row (Chomp).
// Failure to find a free column within the truncated width raises
// OverflowError rather than producing a silently wrong sheet.

namespace detail {

inline std::optional<std::uint32_t> lowest_free_column(const std::uint64_t* a,
                                                       const std::uint64_t* b,
                                                       const std::uint64_t* marks, size_t words,
                                                       std::uint64_t pad, std::uint64_t extra0) {
  for (size_t i = 0; i < words; ++i) {
    std::uint64_t w = a[i] | marks[i];
    if (b) w |= b[i];
    if (i == 0) w |= extra0;
    if (i + 1 == words) w |= pad;
    if (w != ~0ull)
      return static_cast<std::uint32_t>(i * Sheet::kWordBits +
                                        static_cast<unsigned>(std::countr_one(w)));
  }
  return std::nullopt;
}

inline Sheet nim_supermex_impl(const Sheet& premarked, const Sheet* extra) {
  if (extra && !premarked.same_dims(*extra))
    throw ContractError("supermex premark sheets must share dimensions");
  const std::uint32_t h = premarked.height();
  const size_t words = premarked.words_per_row();
  const std::uint64_t pad = pad_mask(premarked.width());
  std::vector<std::uint64_t> blocked(words, 0);
  Sheet out(h, premarked.width());
  for (std::uint32_t y = 0; y < h; ++y) {
    const auto zs = lowest_free_column(premarked.row_words(y),
                                       extra ? extra->row_words(y) : nullptr, blocked.data(),
                                       words, pad, 0);
    if (!zs) throw OverflowError(y);
    out.set(y, *zs);
    blocked[*zs / Sheet::kWordBits] |= 1ull << (*zs % Sheet::kWordBits);
  }
  return out;
}

inline void shift_down_one_column(std::vector<std::uint64_t>& w) {
  const size_t n = w.size();
  for (size_t i = 0; i < n; ++i) {
    w[i] = (w[i] >> 1) | (i + 1 < n ? w[i + 1] << (Sheet::kWordBits - 1) : 0);
  }
}

inline Sheet chomp_supermex_impl(const Sheet& premarked, const Sheet* extra, std::uint32_t level) {
  if (extra && !premarked.same_dims(*extra))
    throw ContractError("supermex premark sheets must share dimensions");
  const std::uint32_t h = premarked.height();
  const size_t words = premarked.words_per_row();
  const std::uint64_t pad = pad_mask(premarked.width());
  std::vector<std::uint64_t> diagonal(words, 0);
  Sheet out(h, premarked.width());
  for (std::uint32_t y = 0; y < h; ++y) {
    // cell (0,0) at level 0 is the non-position [0,0,0]; skip it in the scan
    const std::uint64_t extra0 = (level == 0 && y == 0) ? 1ull : 0ull;
    const auto zs = lowest_free_column(premarked.row_words(y),
                                       extra ? extra->row_words(y) : nullptr, diagonal.data(),
                                       words, pad, extra0);
    if (!zs) throw OverflowError(y);
    out.set(y, *zs);
    // A P at column 0 dominates: every cell on every higher row can drop
    // straight onto it, so no further P-positions exist on this sheet.
    if (*zs == 0) break;
    diagonal[*zs / Sheet::kWordBits] |= 1ull << (*zs % Sheet::kWordBits);
    shift_down_one_column(diagonal);
  }
  return out;
}

}  // namespace detail

inline Sheet nim_supermex(const Sheet& premarked) {
  return detail::nim_supermex_impl(premarked, nullptr);
}
// Same as nim_supermex(premarked | extra) without materializing the union.
inline Sheet nim_supermex(const Sheet& premarked, const Sheet& extra) {
  return detail::nim_supermex_impl(premarked, &extra);
}

inline Sheet chomp_supermex(const Sheet& premarked, std::uint32_t level) {
  return detail::chomp_supermex_impl(premarked, nullptr, level);
}
inline Sheet chomp_supermex(const Sheet& premarked, const Sheet& extra, std::uint32_t level) {
  return detail::chomp_supermex_impl(premarked, &extra, level);
}

inline Sheet supermex(Game g, const Sheet& premarked, std::uint32_t level) {
  return g == Game::nim3 ? nim_supermex(premarked) : chomp_supermex(premarked, level);
}

// ---------------------------------------------------------------------------
// Single-level recursion steps
// ---------------------------------------------------------------------------

struct StepResult {
  Sheet winner_next;
  Sheet loser;
};

// Pass-winners at a level are the no-pass P-positions there, except that the
// terminal is excluded: the pass move is barred from it, so the terminal cell
// must not be pre-marked N.
inline Sheet pass_winner_sheet(Game g, const Sheet& loser_pure, std::uint32_t level) {
  Sheet pw = loser_pure;
  if (const auto cell = terminal_cell(g, level)) pw.clear(cell->first, cell->second);
  return pw;
}

inline StepResult nim_step_pure(const Sheet& winner) {
  Sheet loser = nim_supermex(winner);
  Sheet next = winner;
  next |= loser;
  return {std::move(next), std::move(loser)};
}

inline StepResult nim_step_pass(const Sheet& winner_pass, const Sheet& loser_pure,
                                std::uint32_t level) {
  Sheet loser = (level == 0)
                    ? nim_supermex(winner_pass, pass_winner_sheet(Game::nim3, loser_pure, level))
                    : nim_supermex(winner_pass, loser_pure);
  Sheet next = winner_pass;
  next |= loser;
  return {std::move(next), std::move(loser)};
}

inline StepResult nim_step_generic(const Sheet& winner, const Sheet& variant) {
  Sheet loser = nim_supermex(winner, variant);
  Sheet next = winner;
  next |= loser;
  return {std::move(next), std::move(loser)};
}

inline StepResult chomp_step_pure(const Sheet& winner, std::uint32_t level) {
  Sheet loser = chomp_supermex(winner, level);
  Sheet next = loser.diag_added();
  next |= winner;
  next = next.left_shifted();
  return {std::move(next), std::move(loser)};
}

inline StepResult chomp_step_pass(const Sheet& winner_pass, const Sheet& loser_pure,
                                  std::uint32_t level) {
  Sheet loser =
      (level == 0)
          ? chomp_supermex(winner_pass, pass_winner_sheet(Game::chomp3, loser_pure, level), level)
          : chomp_supermex(winner_pass, loser_pure, level);
  Sheet next = loser.diag_added();
  next |= winner_pass;
  next = next.left_shifted();
  return {std::move(next), std::move(loser)};
}

inline StepResult chomp_step_generic(const Sheet& winner, const Sheet& variant,
                                     std::uint32_t level) {
  Sheet loser = chomp_supermex(winner, variant, level);
  Sheet next = loser.diag_added();
  next |= winner;
  next = next.left_shifted();
  return {std::move(next), std::move(loser)};
}

}  // namespace passage

#endif  // PASSAGE_RULES_HPP
