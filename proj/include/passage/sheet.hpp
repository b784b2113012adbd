// Truncated two-dimensional Boolean matrix, bit-packed one row per word run.
// A sheet cell (y, z) marks position [level, y, z] of whichever game and sheet
// family the caller is working with; the sheet itself only knows its extents.
//
// Canonical form: every bit at column index >= width is zero. All operations
// preserve this, which is what makes bitwise equality, checksums and golden
// files meaningful.
#ifndef PASSAGE_SHEET_HPP
#define PASSAGE_SHEET_HPP

#include <atomic>
#include <bit>
#include <cassert>
#include <cstdint>
#include <cstring>
#include <optional>
#include <vector>

#include "passage/errors.hpp"

namespace passage {

namespace detail {

// Live-instance accounting. The engine promises to keep only a constant
// number of sheets resident regardless of run length; the streaming test
// checks that promise through these counters.
struct SheetCensus {
  static inline std::atomic<std::int64_t> live{0};
  static inline std::atomic<std::int64_t> peak{0};

  static void birth() {
    const std::int64_t n = live.fetch_add(1, std::memory_order_relaxed) + 1;
    std::int64_t p = peak.load(std::memory_order_relaxed);
    while (n > p && !peak.compare_exchange_weak(p, n, std::memory_order_relaxed)) {
    }
  }
  static void death() { live.fetch_sub(1, std::memory_order_relaxed); }
};

struct SheetCensusToken {
  SheetCensusToken() { SheetCensus::birth(); }
  SheetCensusToken(const SheetCensusToken&) { SheetCensus::birth(); }
  SheetCensusToken(SheetCensusToken&&) noexcept { SheetCensus::birth(); }
  SheetCensusToken& operator=(const SheetCensusToken&) { return *this; }
  SheetCensusToken& operator=(SheetCensusToken&&) noexcept { return *this; }
  ~SheetCensusToken() { SheetCensus::death(); }
};

}  // namespace detail

class Sheet {
 public:
  static constexpr std::uint32_t kWordBits = 64;

  Sheet(std::uint32_t height, std::uint32_t width)
      : height_(height),
        width_(width),
        words_per_row_((static_cast<size_t>(width) + kWordBits - 1) / kWordBits) {
    if (height == 0 || width == 0)
      throw ConfigError("sheet dimensions must be at least 1x1");
    bits_.assign(static_cast<size_t>(height) * words_per_row_, 0);
  }

  std::uint32_t height() const { return height_; }
  std::uint32_t width() const { return width_; }
  size_t words_per_row() const { return words_per_row_; }

  const std::uint64_t* row_words(std::uint32_t y) const {
    assert(y < height_);
    return bits_.data() + static_cast<size_t>(y) * words_per_row_;
  }
  std::uint64_t* row_words(std::uint32_t y) {
    assert(y < height_);
    return bits_.data() + static_cast<size_t>(y) * words_per_row_;
  }

  bool get(std::uint32_t y, std::uint32_t z) const {
    assert(y < height_ && z < width_);
    return (row_words(y)[z / kWordBits] >> (z % kWordBits)) & 1u;
  }

  void set(std::uint32_t y, std::uint32_t z) {
    assert(y < height_ && z < width_);
    row_words(y)[z / kWordBits] |= 1ull << (z % kWordBits);
  }

  void clear(std::uint32_t y, std::uint32_t z) {
    assert(y < height_ && z < width_);
    row_words(y)[z / kWordBits] &= ~(1ull << (z % kWordBits));
  }

  std::uint64_t popcount() const {
    std::uint64_t n = 0;
    for (const std::uint64_t w : bits_) n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
  }

  std::uint32_t row_popcount(std::uint32_t y) const {
    const std::uint64_t* r = row_words(y);
    std::uint32_t n = 0;
    for (size_t i = 0; i < words_per_row_; ++i) n += static_cast<std::uint32_t>(std::popcount(r[i]));
    return n;
  }

  std::optional<std::uint32_t> row_first_set(std::uint32_t y) const {
    const std::uint64_t* r = row_words(y);
    for (size_t i = 0; i < words_per_row_; ++i) {
      if (r[i]) return static_cast<std::uint32_t>(i * kWordBits + std::countr_zero(r[i]));
    }
    return std::nullopt;
  }

  bool rows_equal(const Sheet& other, std::uint32_t y) const {
    assert(same_dims(other) && y < height_);
    return std::memcmp(row_words(y), other.row_words(y), words_per_row_ * sizeof(std::uint64_t)) == 0;
  }

  bool same_dims(const Sheet& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Sheet& a, const Sheet& b) {
    return a.same_dims(b) && a.bits_ == b.bits_;
  }
  friend bool operator!=(const Sheet& a, const Sheet& b) { return !(a == b); }

  // Boolean addition: cellwise OR.
  Sheet& operator|=(const Sheet& other) {
    if (!same_dims(other))
      throw ContractError("sheet addition requires equal dimensions");
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    return *this;
  }

  friend Sheet operator|(Sheet a, const Sheet& b) {
    a |= b;
    return a;
  }

  // Left shift: result(y, z) = (*this)(y + 1, z); the last row becomes zero.
  // One row of exactness is lost per application, which the engine accounts
  // for in its allocation.
  Sheet left_shifted() const {
    Sheet out(height_, width_);
    if (height_ > 1) {
      std::memcpy(out.bits_.data(), bits_.data() + words_per_row_,
                  (bits_.size() - words_per_row_) * sizeof(std::uint64_t));
    }
    return out;
  }

  // Diagonal add: with (0, zs) the unique set cell of row 0, also sets every
  // cell (u, zs - u) for 0 <= u <= zs. Requires exactly one set cell in row 0.
  Sheet diag_added() const {
    const std::optional<std::uint32_t> zs = row_first_set(0);
    if (!zs) throw DiagError(DiagError::Reason::empty_top_row);
    if (row_popcount(0) > 1) throw DiagError(DiagError::Reason::multiple_top_row);
    Sheet out = *this;
    const std::uint32_t top = std::min(*zs, height_ - 1);
    for (std::uint32_t u = 1; u <= top; ++u) out.set(u, *zs - u);
    return out;
  }

  static std::int64_t live_instances() {
    return detail::SheetCensus::live.load(std::memory_order_relaxed);
  }
  static std::int64_t peak_live_instances() {
    return detail::SheetCensus::peak.load(std::memory_order_relaxed);
  }
  static void reset_peak() {
    detail::SheetCensus::peak.store(detail::SheetCensus::live.load(std::memory_order_relaxed),
                                    std::memory_order_relaxed);
  }

 private:
  std::uint32_t height_;
  std::uint32_t width_;
  size_t words_per_row_;
  std::vector<std::uint64_t> bits_;
  [[no_unique_address]] detail::SheetCensusToken census_;
};

namespace detail {

// Mask of the padding bits in the final word of a row (set bits = padding).
inline std::uint64_t pad_mask(std::uint32_t width) {
  const std::uint32_t rem = width % Sheet::kWordBits;
  return rem == 0 ? 0 : ~((1ull << rem) - 1);
}

}  // namespace detail

}  // namespace passage

#endif  // PASSAGE_SHEET_HPP
