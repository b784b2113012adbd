// Streaming sheet-stack engine: iterates one of the six level steps to a
// target level, holding a constant number of sheets in memory and writing
// completed levels to disk immediately. A finished run directory contains
// manifest.json plus one SHT1 file per emitted sheet.
#ifndef PASSAGE_ENGINE_HPP
#define PASSAGE_ENGINE_HPP

#include <cassert>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "passage/checksum.hpp"
#include "passage/errors.hpp"
#include "passage/rules.hpp"
#include "passage/sheet.hpp"
#include "passage/sheet_io.hpp"
#include "passage/types.hpp"
#include "passage/variant.hpp"

namespace passage {

struct VariantSpec {
  enum class Kind : std::uint8_t { none, explicit_points, per_column_normal };

  Kind kind = Kind::none;
  std::vector<VariantPoint> points;  // explicit_points
  double sigma = 0.0;                // per_column_normal

  friend bool operator==(const VariantSpec&, const VariantSpec&) = default;
};

struct RunConfig {
  Game game = Game::nim3;
  Mode mode = Mode::pure;
  std::uint32_t levels = 1;         // number of loser-sheet levels to compute
  std::uint32_t width = 0;          // 0: default 4*levels + 64
  std::uint32_t target_height = 0;  // 0: default = width
  VariantSpec variant;
  std::uint64_t seed = 0;
  // Sheet kinds to persist; nullopt picks the mode's defaults, an empty list
  // writes only the manifest.
  std::optional<std::vector<SheetKind>> emit;
  std::filesystem::path out_dir;

  std::uint32_t effective_width() const { return width != 0 ? width : 4 * levels + 64; }
  // Default height is half the width: a supermex row y can be pushed out to
  // about column y + levels in the worst case, so square sheets would run
  // off the right edge near the top.
  std::uint32_t effective_target_height() const {
    if (target_height != 0) return target_height;
    return std::max<std::uint32_t>(1, effective_width() / 2);
  }
  // Chomp loses one exact row per level to the left shift, so the allocation
  // absorbs that up front.
  std::uint32_t allocated_height() const {
    const std::uint32_t t = effective_target_height();
    return game == Game::chomp3 ? t + levels : t;
  }

  std::vector<SheetKind> effective_emit() const {
    if (emit) return *emit;
    switch (mode) {
      case Mode::pure:
        return {SheetKind::winner, SheetKind::loser};
      case Mode::with_pass:
        return {SheetKind::loser, SheetKind::winner_pass, SheetKind::loser_pass};
      case Mode::generic:
        return {SheetKind::winner_generic, SheetKind::loser_generic};
    }
    return {};
  }

  void validate() const {
    if (levels == 0) throw ConfigError("levels must be at least 1");
    if (mode != Mode::generic && variant.kind != VariantSpec::Kind::none)
      throw ConfigError("variant sources are only meaningful in generic mode");
    for (const SheetKind k : effective_emit()) {
      const bool ok = (k == winner_kind_for(mode) || k == loser_kind_for(mode)) ||
                      (mode == Mode::with_pass &&
                       (k == SheetKind::winner || k == SheetKind::loser)) ||
                      (mode == Mode::generic && k == SheetKind::variant);
      if (!ok)
        throw ConfigError(std::string("sheet kind ") + std::string(kind_token(k)) +
                          " is not produced by mode " + std::string(mode_name(mode)));
    }
  }

  std::unique_ptr<VariantSource> make_variant_source() const {
    switch (variant.kind) {
      case VariantSpec::Kind::none:
        return std::make_unique<NullVariant>();
      case VariantSpec::Kind::explicit_points:
        return std::make_unique<ExplicitPointsVariant>(variant.points);
      case VariantSpec::Kind::per_column_normal:
        return std::make_unique<PerColumnNormalVariant>(variant.sigma, seed);
    }
    return std::make_unique<NullVariant>();
  }
};

// ---------------------------------------------------------------------------
// Recursion: the in-memory stepper
// ---------------------------------------------------------------------------

// Holds the winner sheet(s) of one level and advances level by level. The
// with-pass mode co-runs the no-pass recursion, since each level's
// pass-winners are exactly that level's no-pass P-positions.
class Recursion {
 public:
  Recursion(Game game, Mode mode, std::uint32_t height, std::uint32_t width,
            VariantSource* variant = nullptr)
      : game_(game), mode_(mode), variant_(variant), winner_(height, width) {
    if (mode == Mode::with_pass) pure_winner_.emplace(height, width);
  }

  // Continue a run whose winner sheet(s) at `level` are already known.
  static Recursion resume(Game game, Mode mode, std::uint32_t level, Sheet winner,
                          std::optional<Sheet> pure_winner = std::nullopt,
                          VariantSource* variant = nullptr) {
    if (mode == Mode::with_pass && !pure_winner)
      throw ContractError("resuming a with-pass run needs the co-run pure winner sheet");
    Recursion r(game, mode, winner.height(), winner.width(), variant);
    r.level_ = level;
    r.winner_ = std::move(winner);
    if (mode == Mode::with_pass) {
      if (!pure_winner->same_dims(r.winner_))
        throw ContractError("pure and pass winner sheets must share dimensions");
      r.pure_winner_ = std::move(pure_winner);
    }
    return r;
  }

  struct Output {
    std::uint32_t level = 0;
    Sheet loser;                      // loser sheet of the run's own kind
    std::optional<Sheet> pure_loser;  // co-run no-pass losers (with-pass mode)
    std::optional<Sheet> variant;     // the variant sheet used (generic mode)
  };

  Output step() {
    const std::uint32_t x = level_;
    try {
      switch (mode_) {
        case Mode::pure: {
          StepResult r = game_ == Game::nim3 ? nim_step_pure(winner_)
                                             : chomp_step_pure(winner_, x);
          winner_ = std::move(r.winner_next);
          ++level_;
          return {x, std::move(r.loser), std::nullopt, std::nullopt};
        }
        case Mode::with_pass: {
          StepResult pure = game_ == Game::nim3 ? nim_step_pure(*pure_winner_)
                                                : chomp_step_pure(*pure_winner_, x);
          StepResult pass = game_ == Game::nim3
                                ? nim_step_pass(winner_, pure.loser, x)
                                : chomp_step_pass(winner_, pure.loser, x);
          pure_winner_ = std::move(pure.winner_next);
          winner_ = std::move(pass.winner_next);
          ++level_;
          return {x, std::move(pass.loser), std::move(pure.loser), std::nullopt};
        }
        case Mode::generic: {
          Sheet v = variant_ ? variant_->sheet(x, winner_.height(), winner_.width())
                             : Sheet(winner_.height(), winner_.width());
          StepResult r = game_ == Game::nim3 ? nim_step_generic(winner_, v)
                                             : chomp_step_generic(winner_, v, x);
          winner_ = std::move(r.winner_next);
          ++level_;
          return {x, std::move(r.loser), std::nullopt, std::move(v)};
        }
      }
    } catch (const OverflowError& e) {
      throw OverflowError(e.row(), x);
    }
    throw ContractError("unreachable");
  }

  Game game() const { return game_; }
  Mode mode() const { return mode_; }
  std::uint32_t level() const { return level_; }
  const Sheet& winner() const { return winner_; }
  const Sheet* pure_winner() const { return pure_winner_ ? &*pure_winner_ : nullptr; }

 private:
  Game game_;
  Mode mode_;
  VariantSource* variant_;
  std::uint32_t level_ = 0;
  Sheet winner_;
  std::optional<Sheet> pure_winner_;
};

// A recursion-backed variant source: level x yields the no-pass loser sheet
// of level x with the terminal excluded. Feeding this into a generic run
// reproduces the with-pass run exactly.
class PassWinnerVariant final : public VariantSource {
 public:
  PassWinnerVariant(Game game, std::uint32_t height, std::uint32_t width)
      : pure_(game, Mode::pure, height, width) {}

  Sheet sheet(std::uint32_t level, std::uint32_t, std::uint32_t) override {
    if (level != pure_.level())
      throw ContractError("pass-winner variant must be consumed level by level");
    Recursion::Output out = pure_.step();
    return pass_winner_sheet(pure_.game(), out.loser, level);
  }

 private:
  Recursion pure_;
};

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

struct RunManifest {
  std::string engine_version{kEngineVersion};
  Game game = Game::nim3;
  Mode mode = Mode::pure;
  std::uint32_t levels = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;         // allocated height
  std::uint32_t target_height = 0;  // exactness target (equals height for Nim)
  std::uint64_t seed = 0;
  VariantSpec variant;
  std::vector<std::string> emit_tokens;
  std::string status;  // "complete" or "overflow"
  std::optional<std::uint32_t> failed_level;
  std::optional<std::uint32_t> failed_row;
  std::vector<std::string> files;
  std::vector<std::string> checksums;

  std::uint32_t completed_levels() const { return failed_level ? *failed_level : levels; }
};

namespace detail {

inline nlohmann::json variant_to_json(const VariantSpec& v) {
  nlohmann::json j;
  switch (v.kind) {
    case VariantSpec::Kind::none:
      j["kind"] = "none";
      break;
    case VariantSpec::Kind::explicit_points: {
      j["kind"] = "explicit-points";
      auto pts = nlohmann::json::array();
      for (const VariantPoint& p : v.points) pts.push_back({p.x, p.y, p.z});
      j["points"] = std::move(pts);
      break;
    }
    case VariantSpec::Kind::per_column_normal:
      j["kind"] = "per-column-normal";
      j["sigma"] = v.sigma;
      break;
  }
  return j;
}

inline VariantSpec variant_from_json(const nlohmann::json& j) {
  VariantSpec v;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") {
    v.kind = VariantSpec::Kind::none;
  } else if (kind == "explicit-points") {
    v.kind = VariantSpec::Kind::explicit_points;
    for (const auto& p : j.at("points")) {
      v.points.push_back({p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>(),
                          p.at(2).get<std::uint32_t>()});
    }
  } else if (kind == "per-column-normal") {
    v.kind = VariantSpec::Kind::per_column_normal;
    v.sigma = j.at("sigma").get<double>();
  } else {
    throw FormatError("unknown variant kind '" + kind + "' in manifest");
  }
  return v;
}

}  // namespace detail

inline nlohmann::json manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["engine_version"] = m.engine_version;
  j["game"] = std::string(game_name(m.game));
  j["mode"] = std::string(mode_name(m.mode));
  j["levels"] = m.levels;
  j["width"] = m.width;
  j["height"] = m.height;
  j["target_height"] = m.target_height;
  j["seed"] = m.seed;
  j["variant"] = detail::variant_to_json(m.variant);
  j["emit"] = m.emit_tokens;
  j["status"] = m.status;
  if (m.failed_level) j["failed_level"] = *m.failed_level;
  if (m.failed_row) j["failed_row"] = *m.failed_row;
  j["files"] = m.files;
  j["checksums"] = m.checksums;
  return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.engine_version = j.at("engine_version").get<std::string>();
    m.game = parse_game(j.at("game").get<std::string>());
    m.mode = parse_mode(j.at("mode").get<std::string>());
    m.levels = j.at("levels").get<std::uint32_t>();
    m.width = j.at("width").get<std::uint32_t>();
    m.height = j.at("height").get<std::uint32_t>();
    m.target_height = j.at("target_height").get<std::uint32_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.variant = detail::variant_from_json(j.at("variant"));
    m.emit_tokens = j.at("emit").get<std::vector<std::string>>();
    m.status = j.at("status").get<std::string>();
    if (j.contains("failed_level")) m.failed_level = j.at("failed_level").get<std::uint32_t>();
    if (j.contains("failed_row")) m.failed_row = j.at("failed_row").get<std::uint32_t>();
    m.files = j.at("files").get<std::vector<std::string>>();
    m.checksums = j.at("checksums").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad manifest: ") + e.what());
  }
  if (m.files.size() != m.checksums.size())
    throw FormatError("bad manifest: files[] and checksums[] lengths differ");
  return m;
}

inline std::string sheet_file_name(SheetKind kind, std::uint32_t level) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_%06u.sht", level);
  return std::string(kind_token(kind)) + buf;
}

// Runs a full sheet-stack computation. On overflow the abort is recorded in
// the manifest and everything written so far stays valid.
inline RunManifest run(const RunConfig& cfg) {
  cfg.validate();
  const std::uint32_t width = cfg.effective_width();
  const std::uint32_t height = cfg.allocated_height();
  const std::vector<SheetKind> emit = cfg.effective_emit();
  const auto wants = [&](SheetKind k) {
    for (const SheetKind e : emit)
      if (e == k) return true;
    return false;
  };

  std::filesystem::create_directories(cfg.out_dir);

  std::unique_ptr<VariantSource> source = cfg.make_variant_source();
  if (auto* pts = dynamic_cast<ExplicitPointsVariant*>(source.get()))
    pts->validate(cfg.levels, height, width);

  RunManifest m;
  m.game = cfg.game;
  m.mode = cfg.mode;
  m.levels = cfg.levels;
  m.width = width;
  m.height = height;
  m.target_height = cfg.effective_target_height();
  m.seed = cfg.seed;
  m.variant = cfg.variant;
  for (const SheetKind k : emit) m.emit_tokens.emplace_back(kind_token(k));
  m.status = "complete";

  const auto persist = [&](SheetKind kind, std::uint32_t level, const Sheet& s) {
    const std::string name = sheet_file_name(kind, level);
    const std::string bytes = encode_sht(s, SheetMeta{cfg.game, kind, level});
    write_bytes_atomic(bytes, cfg.out_dir / name);
    m.files.push_back(name);
    m.checksums.push_back(fnv1a64_hex(bytes));
  };

  const SheetKind wkind = winner_kind_for(cfg.mode);
  const SheetKind lkind = loser_kind_for(cfg.mode);

  Recursion rec(cfg.game, cfg.mode, height, width, source.get());
  if (wants(wkind)) persist(wkind, 0, rec.winner());
  if (cfg.mode == Mode::with_pass && wants(SheetKind::winner))
    persist(SheetKind::winner, 0, *rec.pure_winner());

  for (std::uint32_t x = 0; x < cfg.levels; ++x) {
    try {
      const Recursion::Output out = rec.step();
      if (wants(lkind)) persist(lkind, x, out.loser);
      if (out.pure_loser && wants(SheetKind::loser)) persist(SheetKind::loser, x, *out.pure_loser);
      if (out.variant && wants(SheetKind::variant)) persist(SheetKind::variant, x, *out.variant);
      if (wants(wkind)) persist(wkind, x + 1, rec.winner());
      if (cfg.mode == Mode::with_pass && wants(SheetKind::winner))
        persist(SheetKind::winner, x + 1, *rec.pure_winner());
    } catch (const OverflowError& e) {
      m.status = "overflow";
      m.failed_level = static_cast<std::uint32_t>(e.level());
      m.failed_row = e.row();
      break;
    }
  }

  write_bytes_atomic(manifest_to_json(m).dump(2) + "\n", cfg.out_dir / "manifest.json");
  return m;
}

// Read-side view of a run directory. The manifest is validated on load;
// sheet payloads are checked against their recorded checksums on access.
class RunDir {
 public:
  static RunDir load(const std::filesystem::path& dir) {
    const std::filesystem::path mpath = dir / "manifest.json";
    std::ifstream in(mpath, std::ios::binary);
    if (!in) throw ConfigError("no run manifest at " + mpath.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("unparsable manifest: ") + e.what());
    }
    RunDir r;
    r.dir_ = dir;
    r.manifest_ = manifest_from_json(j);
    for (size_t i = 0; i < r.manifest_.files.size(); ++i) {
      if (!std::filesystem::exists(dir / r.manifest_.files[i]))
        throw IntegrityError("manifest lists missing file " + r.manifest_.files[i]);
      r.checksum_by_file_[r.manifest_.files[i]] = r.manifest_.checksums[i];
    }
    return r;
  }

  const RunManifest& manifest() const { return manifest_; }
  const std::filesystem::path& dir() const { return dir_; }
  Game game() const { return manifest_.game; }
  Mode mode() const { return manifest_.mode; }
  std::uint32_t completed_levels() const { return manifest_.completed_levels(); }

  // Rows of a level-x sheet unaffected by the truncation choice.
  std::uint32_t exact_rows(std::uint32_t level) const {
    if (manifest_.game == Game::nim3) return manifest_.height;
    return level < manifest_.height ? manifest_.height - level : 0;
  }

  bool has(SheetKind kind, std::uint32_t level) const {
    return checksum_by_file_.count(sheet_file_name(kind, level)) != 0;
  }

  Sheet sheet(SheetKind kind, std::uint32_t level) const {
    const std::string name = sheet_file_name(kind, level);
    const auto it = checksum_by_file_.find(name);
    if (it == checksum_by_file_.end())
      throw ConfigError("run " + dir_.string() + " has no sheet " + name);
    std::ifstream in(dir_ / name, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + (dir_ / name).string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    if (fnv1a64_hex(bytes) != it->second)
      throw IntegrityError("checksum mismatch for " + name);
    std::istringstream payload(bytes);
    SheetMeta meta;
    Sheet s = read_sht(payload, &meta);
    if (meta.kind != kind || meta.level != level || meta.game != manifest_.game)
      throw FormatError("sheet header of " + name + " disagrees with its file name");
    return s;
  }

 private:
  std::filesystem::path dir_;
  RunManifest manifest_;
  std::unordered_map<std::string, std::string> checksum_by_file_;
};

inline RunDir load_run(const std::filesystem::path& dir) { return RunDir::load(dir); }

}  // namespace passage

#endif  // PASSAGE_ENGINE_HPP
