#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "godist/board.hpp"

namespace godist {

enum class Color : uint8_t { Black, White };

inline char color_letter(Color c) { return c == Color::Black ? 'B' : 'W'; }

// One turn. A move without a point is a pass.
struct Move {
  Color color = Color::Black;
  std::optional<Point> point;
  int ordinal = 0;  // 1-based position in the game

  bool is_pass() const { return !point.has_value(); }
  friend bool operator==(const Move&, const Move&) = default;
};

// Calendar date; month/day 0 when the record only gives a coarser prefix.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date&, const Date&) = default;
};

struct GameRecord {
  std::vector<Move> moves;
  std::optional<Date> date;
  std::string source_tag;             // set by the corpus scanner, empty from parse_sgf
  std::vector<Point> handicap_stones; // AB/AW setup stones, not part of the move sequence
  int board_size = kBoardSize;

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

enum class ParseErrorKind {
  Syntax,           // unbalanced parens, missing root node, property grammar
  UnsupportedGame,  // GM other than 1
  UnsupportedSize,  // SZ above 19 or malformed
  BadCoordinate,    // move/setup value outside the board
  BadSetup,         // duplicate setup stones
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, size_t byte_offset, const std::string& msg)
      : std::runtime_error(msg + " (byte " + std::to_string(byte_offset) + ")"),
        kind_(kind),
        byte_offset_(byte_offset) {}

  ParseErrorKind kind() const { return kind_; }
  size_t byte_offset() const { return byte_offset_; }

 private:
  ParseErrorKind kind_;
  size_t byte_offset_;
};

namespace detail {

// DT values in the wild are messy. Accept the first whitespace/comma-separated
// token starting with YYYY, YYYY-MM, or YYYY-MM-DD; anything after a valid
// prefix is ignored.
inline std::optional<Date> parse_date_value(std::string_view v) {
  const auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  size_t i = 0;
  while (i < v.size()) {
    while (i < v.size() && (v[i] == ' ' || v[i] == ',' || v[i] == ';' || v[i] == '\t')) ++i;
    const size_t tok_start = i;
    while (i < v.size() && v[i] != ' ' && v[i] != ',' && v[i] != ';' && v[i] != '\t') ++i;
    std::string_view tok = v.substr(tok_start, i - tok_start);
    if (tok.size() < 4) continue;
    bool four_digits = is_digit(tok[0]) && is_digit(tok[1]) && is_digit(tok[2]) && is_digit(tok[3]);
    if (!four_digits || (tok.size() > 4 && is_digit(tok[4]))) continue;
    Date d;
    d.year = (tok[0] - '0') * 1000 + (tok[1] - '0') * 100 + (tok[2] - '0') * 10 + (tok[3] - '0');
    if (d.year == 0) continue;
    const auto two = [&](size_t at) { return (tok[at] - '0') * 10 + (tok[at + 1] - '0'); };
    if (tok.size() >= 7 && tok[4] == '-' && is_digit(tok[5]) && is_digit(tok[6]) &&
        (tok.size() == 7 || !is_digit(tok[7]))) {
      const int month = two(5);
      if (month >= 1 && month <= 12) {
        d.month = month;
        if (tok.size() >= 10 && tok[7] == '-' && is_digit(tok[8]) && is_digit(tok[9]) &&
            (tok.size() == 10 || !is_digit(tok[10]))) {
          const int day = two(8);
          if (day >= 1 && day <= 31) d.day = day;
        }
      }
    }
    return d;
  }
  return std::nullopt;
}

struct SgfProperty {
  std::string ident;
  std::vector<std::string> values;
  size_t offset = 0;  // byte offset of the identifier, for error reporting
};

// Cursor over the raw bytes. Only ASCII is significant for the properties we
// consume; other bytes pass through property values untouched.
class SgfCursor {
 public:
  explicit SgfCursor(std::string_view text) : text_(text) {}

  size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r' || text_[pos_] == '\f' || text_[pos_] == '\v'))
      ++pos_;
  }

  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }

  [[noreturn]] void fail(ParseErrorKind kind, const std::string& msg) const {
    throw ParseError(kind, pos_, msg);
  }

  // Property identifier: a run of letters. FF[3] files mix in lowercase
  // letters that do not count ("AddBlack" == "AB"), so keep uppercase only.
  std::string read_ident() {
    std::string ident;
    const size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      const char c = text_[pos_++];
      if (c >= 'A' && c <= 'Z') ident.push_back(c);
    }
    if (ident.empty()) {
      pos_ = start;
      fail(ParseErrorKind::Syntax, "expected property identifier");
    }
    return ident;
  }

  // One bracketed value with backslash escapes.
  std::string read_value() {
    if (at_end() || peek() != '[') fail(ParseErrorKind::Syntax, "expected '[' to open property value");
    ++pos_;
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail(ParseErrorKind::Syntax, "dangling escape at end of input");
        out.push_back(text_[pos_++]);
      } else if (c == ']') {
        return out;
      } else {
        out.push_back(c);
      }
    }
    fail(ParseErrorKind::Syntax, "unterminated property value");
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

class SgfParser {
 public:
  explicit SgfParser(std::string_view text) : cur_(text) {}

  std::vector<GameRecord> parse_collection() {
    std::vector<GameRecord> games;
    cur_.skip_ws();
    if (cur_.at_end() || cur_.peek() != '(')
      cur_.fail(ParseErrorKind::Syntax, "expected '(' starting a game tree");
    while (!cur_.at_end() && cur_.peek() == '(') {
      GameBuilder builder;
      parse_tree(builder, /*main_line=*/true, /*root=*/true);
      games.push_back(std::move(builder.record));
      cur_.skip_ws();
    }
    if (!cur_.at_end())
      cur_.fail(ParseErrorKind::Syntax, "trailing content after game trees");
    return games;
  }

 private:
  struct GameBuilder {
    GameRecord record;
    bool saw_root_node = false;
  };

  void parse_tree(GameBuilder& builder, bool main_line, bool root) {
    // precondition: cursor at '('
    cur_.take();
    cur_.skip_ws();
    if (cur_.at_end() || cur_.peek() != ';')
      cur_.fail(ParseErrorKind::Syntax,
                root ? "missing root node in game tree" : "game tree without a node");
    while (!cur_.at_end()) {
      const char c = cur_.peek();
      if (c == ';') {
        cur_.take();
        parse_node(builder, main_line);
      } else if (c == '(') {
        bool first_child = true;
        while (!cur_.at_end() && cur_.peek() == '(') {
          // Main variation policy: only the first child continues the main
          // line; siblings are parsed for syntax and discarded.
          parse_tree(builder, main_line && first_child, /*root=*/false);
          first_child = false;
          cur_.skip_ws();
        }
        if (cur_.at_end() || cur_.peek() != ')')
          cur_.fail(ParseErrorKind::Syntax, "unbalanced parentheses in game tree");
        cur_.take();
        return;
      } else if (c == ')') {
        cur_.take();
        return;
      } else {
        cur_.fail(ParseErrorKind::Syntax, std::string("unexpected character '") + c + "' in game tree");
      }
      cur_.skip_ws();
    }
    cur_.fail(ParseErrorKind::Syntax, "unbalanced parentheses: unexpected end of input");
  }

  void parse_node(GameBuilder& builder, bool main_line) {
    const bool is_root = !builder.saw_root_node;
    builder.saw_root_node = true;
    cur_.skip_ws();
    while (!cur_.at_end() && std::isalpha(static_cast<unsigned char>(cur_.peek()))) {
      SgfProperty prop;
      prop.offset = cur_.pos();
      prop.ident = cur_.read_ident();
      cur_.skip_ws();
      if (cur_.at_end() || cur_.peek() != '[')
        cur_.fail(ParseErrorKind::Syntax, "property " + prop.ident + " has no value");
      while (!cur_.at_end() && cur_.peek() == '[') {
        prop.values.push_back(cur_.read_value());
        cur_.skip_ws();
      }
      if (main_line) apply_property(builder, prop, is_root);
    }
  }

  void apply_property(GameBuilder& builder, const SgfProperty& prop, bool is_root) {
    GameRecord& rec = builder.record;
    if (prop.ident == "B" || prop.ident == "W") {
      const Color color = prop.ident == "B" ? Color::Black : Color::White;
      Move move;
      move.color = color;
      move.ordinal = static_cast<int>(rec.moves.size()) + 1;
      const std::string& v = prop.values.front();
      if (!v.empty() && !(v == "tt" && rec.board_size <= 19)) move.point = decode_point(v, prop, rec);
      rec.moves.push_back(move);
    } else if (prop.ident == "AB" || prop.ident == "AW") {
      for (const std::string& v : prop.values) {
        const Point p = decode_point(v, prop, rec);
        for (const Point& prev : rec.handicap_stones)
          if (prev == p)
            throw ParseError(ParseErrorKind::BadSetup, prop.offset, "duplicate setup stone " + v);
        rec.handicap_stones.push_back(p);
      }
    } else if (prop.ident == "SZ") {
      if (!is_root) return;  // size changes outside the root node are nonsense; ignore
      rec.board_size = decode_size(prop);
    } else if (prop.ident == "GM") {
      if (prop.values.front() != "1")
        throw ParseError(ParseErrorKind::UnsupportedGame, prop.offset,
                         "GM[" + prop.values.front() + "] is not Go");
    } else if (prop.ident == "DT") {
      if (!rec.date)
        if (auto d = parse_date_value(prop.values.front())) rec.date = d;
    }
    // every other property is irrelevant to distance analysis
  }

  Point decode_point(const std::string& v, const SgfProperty& prop, const GameRecord& rec) {
    Point p;
    try {
      p = point_from_sgf(v);
    } catch (const CoordinateError& e) {
      throw ParseError(ParseErrorKind::BadCoordinate, prop.offset,
                       prop.ident + "[" + v + "]: " + e.what());
    }
    if (p.col() >= rec.board_size || p.row() >= rec.board_size)
      throw ParseError(ParseErrorKind::BadCoordinate, prop.offset,
                       prop.ident + "[" + v + "] outside the " + std::to_string(rec.board_size) +
                           "x" + std::to_string(rec.board_size) + " board");
    return p;
  }

  int decode_size(const SgfProperty& prop) {
    const std::string& v = prop.values.front();
    int size = 0;
    for (char c : v) {
      if (c < '0' || c > '9')
        throw ParseError(ParseErrorKind::UnsupportedSize, prop.offset,
                         "SZ[" + v + "] is not a plain board size");
      size = size * 10 + (c - '0');
      if (size > 1000) break;
    }
    if (size < 1 || size > kBoardSize)
      throw ParseError(ParseErrorKind::UnsupportedSize, prop.offset,
                       "board size " + v + " unsupported (1.." + std::to_string(kBoardSize) + ")");
    return size;
  }

  SgfCursor cur_;
};

}  // namespace detail

// Parses an SGF collection (one or more game trees), main variation only.
// Honors B, W, AB, AW, SZ, GM, and DT; everything else is skipped. The whole
// input is rejected on the first structural or semantic problem.
inline std::vector<GameRecord> parse_sgf(std::string_view bytes) {
  // Strip a UTF-8 BOM if present.
  if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xEF &&
      static_cast<unsigned char>(bytes[1]) == 0xBB && static_cast<unsigned char>(bytes[2]) == 0xBF)
    bytes.remove_prefix(3);
  detail::SgfParser parser(bytes);
  return parser.parse_collection();
}

}  // namespace godist
