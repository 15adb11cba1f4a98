#pragma once

#include <fnmatch.h>

#include <algorithm>
#include <compare>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "godist/sgf.hpp"

namespace godist {

enum class GroupScheme { Year, Decade, All };

inline std::string scheme_name(GroupScheme s) {
  switch (s) {
    case GroupScheme::Year: return "year";
    case GroupScheme::Decade: return "decade";
    case GroupScheme::All: return "all";
  }
  return "all";
}

inline GroupScheme scheme_from_name(const std::string& name) {
  if (name == "year") return GroupScheme::Year;
  if (name == "decade") return GroupScheme::Decade;
  if (name == "all") return GroupScheme::All;
  throw std::runtime_error("unknown grouping scheme \"" + name + "\"");
}

// Cohort label: "2016", "2010s", or "all".
struct GroupKey {
  GroupScheme scheme = GroupScheme::All;
  std::string label = "all";

  friend bool operator==(const GroupKey&, const GroupKey&) = default;
  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

class UngroupedError : public std::runtime_error {
 public:
  explicit UngroupedError(const std::string& msg) : std::runtime_error(msg) {}
};

inline GroupKey group_key_for(const GameRecord& record, GroupScheme scheme) {
  if (scheme == GroupScheme::All) return GroupKey{GroupScheme::All, "all"};
  if (!record.date)
    throw UngroupedError("record has no parseable date for " + scheme_name(scheme) + " grouping");
  char buf[16];
  if (scheme == GroupScheme::Year) {
    std::snprintf(buf, sizeof buf, "%04d", record.date->year);
    return GroupKey{GroupScheme::Year, buf};
  }
  std::snprintf(buf, sizeof buf, "%04ds", record.date->year / 10 * 10);
  return GroupKey{GroupScheme::Decade, buf};
}

struct IngestReport {
  uint64_t parsed_count = 0;
  uint64_t skipped_count = 0;
  std::vector<std::pair<std::string, std::string>> skip_reasons;  // (path, reason)

  void skip(const std::string& path, const std::string& reason) {
    ++skipped_count;
    skip_reasons.emplace_back(path, reason);
  }
};

struct ScanResult {
  std::vector<GameRecord> records;
  IngestReport report;
};

namespace detail {

inline std::vector<std::filesystem::path> matching_files(const std::filesystem::path& root,
                                                         const std::string& glob) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(root, ec) || ec) throw std::runtime_error("input directory not found: " + root.string());
  if (!fs::is_directory(root, ec) || ec) throw std::runtime_error("not a directory: " + root.string());
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root, ec); it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (ec) throw std::runtime_error("cannot walk " + root.string() + ": " + ec.message());
    if (!it->is_regular_file(ec) || ec) continue;
    const std::string name = it->path().filename().string();
    if (::fnmatch(glob.c_str(), name.c_str(), 0) == 0) files.push_back(it->path());
  }
  // Lexicographic path order makes every scan reproducible.
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  return files;
}

inline bool read_file(const std::filesystem::path& path, std::string& out, std::string& error) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    error = "cannot open file";
    return false;
  }
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) {
    error = "cannot stat file";
    return false;
  }
  out.resize(static_cast<size_t>(size));
  in.seekg(0, std::ios::beg);
  in.read(out.data(), static_cast<std::streamsize>(out.size()));
  if (!in) {
    error = "cannot read file";
    return false;
  }
  return true;
}

}  // namespace detail

// Walks `root` for files whose name matches `glob`, parses each, and feeds
// admitted 19x19 records to `sink` in deterministic (lexicographic path)
// order. Per-file problems become skip entries; only an unreadable root is
// fatal.
inline IngestReport scan_corpus_stream(
    const std::filesystem::path& root, const std::string& glob,
    const std::function<void(GameRecord&&, const std::string& path)>& sink) {
  IngestReport report;
  const std::string tag = root.filename().string();
  std::string bytes;
  for (const auto& path : detail::matching_files(root, glob)) {
    const std::string path_str = path.generic_string();
    std::string io_error;
    if (!detail::read_file(path, bytes, io_error)) {
      report.skip(path_str, io_error);
      continue;
    }
    std::vector<GameRecord> games;
    try {
      games = parse_sgf(bytes);
    } catch (const ParseError& e) {
      report.skip(path_str, e.what());
      continue;
    }
    for (GameRecord& game : games) {
      if (game.board_size != kBoardSize) {
        report.skip(path_str, "board size " + std::to_string(game.board_size) + " (19 required)");
        continue;
      }
      game.source_tag = tag;
      ++report.parsed_count;
      sink(std::move(game), path_str);
    }
  }
  return report;
}

inline ScanResult scan_corpus(const std::filesystem::path& root, const std::string& glob = "*.sgf") {
  ScanResult result;
  result.report = scan_corpus_stream(
      root, glob, [&](GameRecord&& g, const std::string&) { result.records.push_back(std::move(g)); });
  return result;
}

}  // namespace godist
