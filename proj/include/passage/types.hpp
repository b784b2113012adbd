// Shared enums and name tables for games, run modes and sheet kinds.
#ifndef PASSAGE_TYPES_HPP
#define PASSAGE_TYPES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "passage/errors.hpp"

namespace passage {

inline constexpr std::string_view kEngineVersion = "1.0.0";

enum class Game : std::uint8_t {
  nim3 = 0,
  chomp3 = 1,
};

enum class Mode : std::uint8_t {
  pure = 0,
  with_pass = 1,
  generic = 2,
};

// Sheet kinds, in wire order (byte 6 of the SHT1 header).
enum class SheetKind : std::uint8_t {
  winner = 0,          // instant winners, pass unavailable (or already used)
  loser = 1,           // P-positions, pass unavailable
  winner_pass = 2,     // instant winners while the pass is still available
  loser_pass = 3,      // P-positions while the pass is still available
  variant = 4,         // designated automatic N-positions of a perturbed game
  winner_generic = 5,  // instant winners of a perturbed game
  loser_generic = 6,   // P-positions of a perturbed game
};

// A single designated automatic N-position [x, y, z].
struct VariantPoint {
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t z = 0;

  friend bool operator==(const VariantPoint&, const VariantPoint&) = default;
};

inline std::string_view game_name(Game g) {
  return g == Game::nim3 ? "nim3" : "chomp3";
}

inline Game parse_game(std::string_view s) {
  if (s == "nim" || s == "nim3") return Game::nim3;
  if (s == "chomp" || s == "chomp3") return Game::chomp3;
  throw ConfigError("unknown game '" + std::string(s) + "' (expected nim or chomp)");
}

inline std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::pure: return "pure";
    case Mode::with_pass: return "pass";
    case Mode::generic: return "generic";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "pure") return Mode::pure;
  if (s == "pass" || s == "with-pass") return Mode::with_pass;
  if (s == "generic") return Mode::generic;
  throw ConfigError("unknown mode '" + std::string(s) + "' (expected pure, pass or generic)");
}

// Token used in file names ({token}_{level:06}.sht) and --emit lists.
inline std::string_view kind_token(SheetKind k) {
  switch (k) {
    case SheetKind::winner: return "W";
    case SheetKind::loser: return "L";
    case SheetKind::winner_pass: return "What";
    case SheetKind::loser_pass: return "Lhat";
    case SheetKind::variant: return "V";
    case SheetKind::winner_generic: return "Wt";
    case SheetKind::loser_generic: return "Lt";
  }
  return "?";
}

inline std::optional<SheetKind> parse_kind(std::string_view s) {
  for (std::uint8_t i = 0; i <= 6; ++i) {
    const auto k = static_cast<SheetKind>(i);
    if (s == kind_token(k)) return k;
  }
  return std::nullopt;
}

// The winner/loser sheet kinds a run of the given mode produces.
inline SheetKind winner_kind_for(Mode m) {
  switch (m) {
    case Mode::pure: return SheetKind::winner;
    case Mode::with_pass: return SheetKind::winner_pass;
    case Mode::generic: return SheetKind::winner_generic;
  }
  return SheetKind::winner;
}

inline SheetKind loser_kind_for(Mode m) {
  switch (m) {
    case Mode::pure: return SheetKind::loser;
    case Mode::with_pass: return SheetKind::loser_pass;
    case Mode::generic: return SheetKind::loser_generic;
  }
  return SheetKind::loser;
}

}  // namespace passage

#endif  // PASSAGE_TYPES_HPP
