#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "godist/board.hpp"
#include "godist/rng.hpp"
#include "godist/sgf.hpp"

namespace godist {

// Go-like random walker with a power-law step law. Exists so every pipeline
// claim has a ground-truth oracle; it models placement geometry and occupancy
// only, not Go strategy.
struct SynthParams {
  double tail_alpha = 2.5;  // step-length exponent, > 1
  double min_step = 1.0;    // grid units, >= 1
  int moves_lo = 150;       // slots per game, passes included
  int moves_hi = 250;
  double pass_rate = 0.0;   // in [0, 1)
  uint64_t seed = 0;
  int year_lo = 2016;
  int year_hi = 2016;
};

inline void validate(const SynthParams& p) {
  if (!(p.tail_alpha > 1.0)) throw std::invalid_argument("tail_alpha must be > 1");
  if (!(p.min_step >= 1.0)) throw std::invalid_argument("min_step must be >= 1");
  if (p.moves_lo < 2) throw std::invalid_argument("moves_per_game low bound must be >= 2");
  if (p.moves_hi > kBoardPoints) throw std::invalid_argument("moves_per_game high bound must be <= 361");
  if (p.moves_lo > p.moves_hi) throw std::invalid_argument("moves_per_game range is inverted");
  if (!(p.pass_rate >= 0.0 && p.pass_rate < 1.0)) throw std::invalid_argument("pass_rate must be in [0,1)");
  if (p.year_lo > p.year_hi) throw std::invalid_argument("date_range is inverted");
  if (p.year_lo < 1 || p.year_hi > 9999) throw std::invalid_argument("years must be in 1..9999");
}

namespace detail {

inline const std::array<double, kMaxSquaredDistance + 1>& sqrt_table() {
  static const auto table = [] {
    std::array<double, kMaxSquaredDistance + 1> t{};
    for (int d2 = 0; d2 <= kMaxSquaredDistance; ++d2) t[d2] = std::sqrt(static_cast<double>(d2));
    return t;
  }();
  return table;
}

}  // namespace detail

// Inverse-CDF draw from the power law p(x) ~ x^(-alpha) truncated to
// [min_step, board diagonal] and renormalized.
inline double draw_step_length(const SynthParams& params, SplitMix64& rng) {
  const double t = 1.0 - params.tail_alpha;  // < 0
  const double a_t = std::pow(params.min_step, t);
  const double b_t = std::pow(detail::sqrt_table()[kMaxSquaredDistance], t);
  const double u = rng.next_real01();
  return std::pow(a_t - u * (a_t - b_t), 1.0 / t);
}

inline GameRecord generate_game(const SynthParams& params, SplitMix64& rng) {
  validate(params);
  GameRecord game;
  const int n_slots =
      params.moves_lo + static_cast<int>(rng.next_below(
                            static_cast<uint64_t>(params.moves_hi - params.moves_lo) + 1));
  Date date;
  date.year = params.year_lo +
              static_cast<int>(rng.next_below(static_cast<uint64_t>(params.year_hi - params.year_lo) + 1));
  date.month = 1 + static_cast<int>(rng.next_below(12));
  date.day = 1 + static_cast<int>(rng.next_below(28));
  game.date = date;

  std::array<bool, kBoardPoints> occupied{};
  int placed = 0;
  bool have_prev = false;
  Point prev;
  game.moves.reserve(n_slots);

  for (int slot = 0; slot < n_slots; ++slot) {
    if (placed == kBoardPoints) break;  // board saturated: truncate, no error
    Move move;
    move.color = (slot % 2 == 0) ? Color::Black : Color::White;
    move.ordinal = slot + 1;
    if (params.pass_rate > 0.0 && rng.next_real01() < params.pass_rate) {
      game.moves.push_back(move);
      continue;
    }
    int chosen = -1;
    if (!have_prev) {
      // first placement: uniform over unoccupied points
      uint64_t nth = rng.next_below(static_cast<uint64_t>(kBoardPoints - placed));
      for (int idx = 0; idx < kBoardPoints; ++idx) {
        if (occupied[idx]) continue;
        if (nth-- == 0) {
          chosen = idx;
          break;
        }
      }
    } else {
      // snap the drawn radius to the nearest unoccupied point; scanning in
      // (col,row) order makes the lowest point win ties
      const double target = draw_step_length(params, rng);
      const int prev_col = prev.col();
      const int prev_row = prev.row();
      double best = 1e300;
      for (int idx = 0; idx < kBoardPoints; ++idx) {
        if (occupied[idx]) continue;
        const int dc = idx / kBoardSize - prev_col;
        const int dr = idx % kBoardSize - prev_row;
        const double gap = std::fabs(detail::sqrt_table()[dc * dc + dr * dr] - target);
        if (gap < best) {
          best = gap;
          chosen = idx;
        }
      }
    }
    occupied[chosen] = true;
    ++placed;
    prev = Point(chosen / kBoardSize, chosen % kBoardSize);
    have_prev = true;
    move.point = prev;
    game.moves.push_back(move);
  }
  return game;
}

// n games from per-game seed streams derived from (seed, game index) with the
// same splitting rule as the bootstrap.
inline std::vector<GameRecord> generate_corpus(uint64_t n, const SynthParams& params) {
  validate(params);
  std::vector<GameRecord> corpus;
  corpus.reserve(n);
  for (uint64_t g = 0; g < n; ++g) {
    SplitMix64 rng = derive_stream(params.seed, g);
    corpus.push_back(generate_game(params, rng));
  }
  return corpus;
}

namespace detail {

inline void append_sgf_point(std::string& out, const Point& p) {
  out.push_back(static_cast<char>('a' + p.col()));
  out.push_back(static_cast<char>('a' + p.row()));
}

}  // namespace detail

// Canonical SGF serialization; parse_sgf inverts it exactly.
inline std::string serialize_sgf(const GameRecord& record) {
  if (record.board_size != kBoardSize)
    throw std::invalid_argument("only 19x19 records serialize");
  std::string out = "(;GM[1]FF[4]SZ[19]";
  if (record.date) {
    char buf[16];
    if (record.date->day > 0)
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", record.date->year, record.date->month,
                    record.date->day);
    else if (record.date->month > 0)
      std::snprintf(buf, sizeof buf, "%04d-%02d", record.date->year, record.date->month);
    else
      std::snprintf(buf, sizeof buf, "%04d", record.date->year);
    out += "DT[";
    out += buf;
    out += "]";
  }
  if (!record.handicap_stones.empty()) {
    out += "AB";
    for (const Point& p : record.handicap_stones) {
      out.push_back('[');
      detail::append_sgf_point(out, p);
      out.push_back(']');
    }
  }
  for (const Move& move : record.moves) {
    out.push_back(';');
    out.push_back(color_letter(move.color));
    out.push_back('[');
    if (move.point) detail::append_sgf_point(out, *move.point);
    out.push_back(']');
  }
  out.push_back(')');
  return out;
}

// One zero-padded .sgf file per game, so directory scans enumerate games in
// generation order.
inline void write_corpus(const std::filesystem::path& dir, uint64_t n, const SynthParams& params) {
  validate(params);
  if (n > 999999) throw std::invalid_argument("corpus writer caps at 999999 games per directory");
  std::filesystem::create_directories(dir);
  for (uint64_t g = 0; g < n; ++g) {
    SplitMix64 rng = derive_stream(params.seed, g);
    const GameRecord game = generate_game(params, rng);
    char name[32];
    std::snprintf(name, sizeof name, "%06llu.sgf", static_cast<unsigned long long>(g));
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << serialize_sgf(game) << '\n';
  }
}

}  // namespace godist
