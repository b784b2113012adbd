// Error hierarchy. Every library failure derives from passage::Error so the
// CLI can map exception classes onto its documented exit codes.
#ifndef PASSAGE_ERRORS_HPP
#define PASSAGE_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace passage {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user-supplied configuration: zero dimensions, inconsistent flags,
// missing inputs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// API misuse: dimension mismatches, invalid positions.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed .sht payload or manifest.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Stored data does not match its recorded checksum.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A supermex row scan ran off the truncated width. The sheet is too narrow
// for the requested level; results are never silently truncated.
class OverflowError : public Error {
 public:
  explicit OverflowError(std::uint32_t row, std::int64_t level = -1)
      : Error(level < 0
                  ? "supermex overflow: no free column in row " + std::to_string(row)
                  : "supermex overflow at level " + std::to_string(level) +
                        ", row " + std::to_string(row) + " (width too small)"),
        row_(row),
        level_(level) {}

  std::uint32_t row() const noexcept { return row_; }
  // -1 when raised outside a level-indexed run.
  std::int64_t level() const noexcept { return level_; }

 private:
  std::uint32_t row_;
  std::int64_t level_;
};

// Diagonal-add precondition failures, distinguishable by reason: an empty top
// row usually means an upstream overflow went unnoticed, a multiply-set top
// row means the argument was not a loser sheet.
class DiagError : public ContractError {
 public:
  enum class Reason { empty_top_row, multiple_top_row };

  explicit DiagError(Reason r)
      : ContractError(r == Reason::empty_top_row
                          ? "diag add: row 0 has no set cell"
                          : "diag add: row 0 has more than one set cell"),
        reason_(r) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

}  // namespace passage

#endif  // PASSAGE_ERRORS_HPP
