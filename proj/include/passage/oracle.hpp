// Independent ground truth: Bouton's nim-sum criterion, the closed-form pure
// Nim winner sheets, and a memoized brute-force solver over a move-closed
// truncation of the position space. The solver shares nothing with the sheet
// recursion except the move generator, so the two can check each other.
#ifndef PASSAGE_ORACLE_HPP
#define PASSAGE_ORACLE_HPP

#include <cassert>
#include <cstdint>
#include <ostream>
#include <vector>

#include "passage/errors.hpp"
#include "passage/rules.hpp"
#include "passage/types.hpp"

namespace passage {

// P-position iff the nim-sum of the pile sizes vanishes.
inline bool bouton_p(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  return (x ^ y ^ z) == 0;
}

// Pure Nim instant winner: some lower level k has a P at (y, z), i.e.
// k = y ^ z for some k < x.
inline bool nim_winner_closed_form(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  return (y ^ z) < x;
}

// Exact P/N classification of every position inside a move-closed bound:
// a box x,y,z < bound for Nim (moves only shrink coordinates), a total-sum
// bound x+y+z <= bound for Chomp (no move increases the sum). Memoized
// top-down descent; every move strictly decreases (x, y, z, pass)
// lexicographically, so the recursion terminates.
class OracleTable {
 public:
  struct Options {
    // Positions declared automatic N (perturbed-game semantics): the position
    // itself is N, and it confers no win on its parents.
    std::vector<VariantPoint> designated_n;
  };

  static OracleTable build(Game game, bool with_pass, std::uint32_t bound, Options opts = {}) {
    OracleTable t(game, with_pass, bound, std::move(opts));
    const std::uint32_t side = t.side_;
    for (std::uint32_t x = 0; x < side; ++x) {
      for (std::uint32_t y = 0; y < side; ++y) {
        for (std::uint32_t z = 0; z < side; ++z) {
          if (!t.in_bounds(x, y, z)) continue;
          t.solve(Position{game, x, y, z, false});
          if (with_pass) t.solve(Position{game, x, y, z, true});
        }
      }
    }
    return t;
  }

  Game game() const { return game_; }
  bool with_pass() const { return with_pass_; }
  std::uint32_t bound() const { return bound_; }

  bool in_bounds(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
    if (game_ == Game::nim3) {
      if (x >= bound_ || y >= bound_ || z >= bound_) return false;
    } else {
      if (static_cast<std::uint64_t>(x) + y + z > bound_) return false;
      if ((x | y | z) == 0) return false;
    }
    return true;
  }

  bool is_p(std::uint32_t x, std::uint32_t y, std::uint32_t z, bool pass) const {
    assert(in_bounds(x, y, z));
    const std::int8_t v = cls_[index(x, y, z, pass)];
    assert(v >= 0);
    return v == 1;
  }

  bool is_p(const Position& p) const { return is_p(p.x, p.y, p.z, p.pass_available); }

  std::uint64_t state_count() const {
    std::uint64_t n = 0;
    for (const std::int8_t v : cls_) n += (v >= 0);
    return n;
  }

  // Audit dump: one `x,y,z,pass,class` row per classified state.
  void dump_csv(std::ostream& os) const {
    os << "x,y,z,pass,class\n";
    for (std::uint32_t x = 0; x < side_; ++x)
      for (std::uint32_t y = 0; y < side_; ++y)
        for (std::uint32_t z = 0; z < side_; ++z) {
          if (!in_bounds(x, y, z)) continue;
          for (int pass = 0; pass <= (with_pass_ ? 1 : 0); ++pass) {
            os << x << ',' << y << ',' << z << ',' << pass << ','
               << (is_p(x, y, z, pass != 0) ? 'P' : 'N') << '\n';
          }
        }
  }

 private:
  OracleTable(Game game, bool with_pass, std::uint32_t bound, Options opts)
      : game_(game),
        with_pass_(with_pass),
        bound_(bound),
        side_(game == Game::nim3 ? bound : bound + 1),
        opts_(std::move(opts)) {
    if (bound == 0) throw ConfigError("oracle bound must be positive");
    cls_.assign(static_cast<size_t>(side_) * side_ * side_ * 2, -1);
  }

  size_t index(std::uint32_t x, std::uint32_t y, std::uint32_t z, bool pass) const {
    return (((static_cast<size_t>(x) * side_ + y) * side_ + z) << 1) | (pass ? 1 : 0);
  }

  bool designated(std::uint32_t x, std::uint32_t y, std::uint32_t z) const {
    for (const VariantPoint& v : opts_.designated_n)
      if (v.x == x && v.y == y && v.z == z) return true;
    return false;
  }

  bool solve(const Position& p) {
    std::int8_t& memo = cls_[index(p.x, p.y, p.z, p.pass_available)];
    if (memo >= 0) return memo == 1;
    if (designated(p.x, p.y, p.z)) {
      memo = 0;
      return false;
    }
    // P iff every child is N; a terminal (no children) is P.
    const bool has_p_child = for_each_child(p, [&](const Position& c) { return solve(c); });
    memo = has_p_child ? 0 : 1;
    return !has_p_child;
  }

  Game game_;
  bool with_pass_;
  std::uint32_t bound_;
  std::uint32_t side_;
  Options opts_;
  std::vector<std::int8_t> cls_;
};

}  // namespace passage

#endif  // PASSAGE_ORACLE_HPP
