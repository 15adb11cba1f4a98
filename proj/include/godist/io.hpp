#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "godist/histogram.hpp"
#include "godist/resample.hpp"
#include "godist/tail.hpp"

namespace godist {

// Fixed 12-significant-digit forms keep CSV outputs diffable across
// implementations.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace io {

using nlohmann::json;

inline json group_to_json(const GroupKey& group) {
  return json{{"scheme", scheme_name(group.scheme)}, {"label", group.label}};
}

inline GroupKey group_from_json(const json& j) {
  return GroupKey{scheme_from_name(j.at("scheme").get<std::string>()),
                  j.at("label").get<std::string>()};
}

inline json histogram_to_json(const DistanceHistogram& hist) {
  json bins = json::array();
  for (int d2 : detail::distance_axis().values) {
    if (hist.counts[d2] == 0) continue;
    bins.push_back(json{{"d2", d2}, {"count", hist.counts[d2]}});
  }
  return json{{"group", group_to_json(hist.group)},
              {"game_count", hist.game_count},
              {"total_pairs", hist.total_pairs},
              {"bins", std::move(bins)}};
}

inline DistanceHistogram histogram_from_json(const json& j) {
  DistanceHistogram hist;
  hist.group = group_from_json(j.at("group"));
  hist.game_count = j.at("game_count").get<uint64_t>();
  hist.total_pairs = j.at("total_pairs").get<uint64_t>();
  uint64_t sum = 0;
  for (const json& bin : j.at("bins")) {
    const int d2 = bin.at("d2").get<int>();
    if (axis_index_of(d2) < 0)
      throw std::runtime_error("histogram bin d2=" + std::to_string(d2) +
                               " is not a squared distance on the 19x19 board");
    const uint64_t count = bin.at("count").get<uint64_t>();
    hist.counts[d2] += count;
    sum += count;
  }
  if (sum != hist.total_pairs)
    throw std::runtime_error("histogram total_pairs=" + std::to_string(hist.total_pairs) +
                             " does not match bin sum " + std::to_string(sum));
  return hist;
}

inline void write_histograms(const std::filesystem::path& path,
                             std::span<const DistanceHistogram> hists) {
  json arr = json::array();
  for (const DistanceHistogram& h : hists) arr.push_back(histogram_to_json(h));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << arr.dump(2) << '\n';
}

inline std::vector<DistanceHistogram> read_histograms(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed histogram JSON in " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw std::runtime_error(path.string() + ": expected a JSON array");
  std::vector<DistanceHistogram> hists;
  try {
    for (const json& j : doc) hists.push_back(histogram_from_json(j));
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed histogram JSON in " + path.string() + ": " + e.what());
  }
  return hists;
}

inline void write_distribution_csv(const std::filesystem::path& path,
                                   const EmpiricalDistribution& dist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "distance,d2,pdf,cdf,ccdf\n";
  for (const DistributionPoint& pt : dist.points)
    out << format_real(pt.distance) << ',' << pt.d2 << ',' << format_real(pt.pdf) << ','
        << format_real(pt.cdf) << ',' << format_real(pt.ccdf) << '\n';
}

inline void write_bands_csv(const std::filesystem::path& path, const BootstrapBands& bands) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "d2,distance,mean_ccdf,std_ccdf,mean_cdf,std_cdf\n";
  for (const BootstrapBand& b : bands.bands)
    out << b.d2 << ',' << format_real(distance(SquaredDistance{b.d2})) << ','
        << format_real(b.mean_ccdf) << ',' << format_real(std::sqrt(b.var_ccdf)) << ','
        << format_real(b.mean_cdf) << ',' << format_real(std::sqrt(b.var_cdf)) << '\n';
}

inline json plan_to_json(const ResamplePlan& plan) {
  return json{{"k", plan.sample_games},
              {"iterations", plan.iterations},
              {"seed", plan.seed},
              {"replacement", plan.replacement}};
}

inline json fit_to_json(const PowerLawFit& fit) {
  return json{{"alpha", fit.alpha},
              {"stderr", fit.std_error},
              {"x_min", fit.x_min},
              {"n_tail", fit.n_tail}};
}

inline void write_fits(const std::filesystem::path& path,
                       std::span<const std::pair<GroupKey, PowerLawFit>> fits) {
  json arr = json::array();
  for (const auto& [group, fit] : fits) {
    json j = fit_to_json(fit);
    j["group"] = group_to_json(group);
    arr.push_back(std::move(j));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << arr.dump(2) << '\n';
}

inline void write_separations_csv(const std::filesystem::path& path,
                                  std::span<const SeparationReport> reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "group_a,group_b,ks,n_a,n_b\n";
  for (const SeparationReport& r : reports)
    out << r.group_a.label << ',' << r.group_b.label << ',' << format_real(r.ks) << ',' << r.n_a
        << ',' << r.n_b << '\n';
}

// One JSON object per line: {"path": ..., "reason": ...}
inline void write_skip_report(const std::filesystem::path& path, const IngestReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [skip_path, reason] : report.skip_reasons)
    out << json{{"path", skip_path}, {"reason", reason}}.dump() << '\n';
}

}  // namespace io
}  // namespace godist
