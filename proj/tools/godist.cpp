// godist: consecutive-placement distance statistics for Go game records.
// Subcommands cover the whole pipeline: synthesize or ingest SGF corpora,
// aggregate distance histograms per cohort, derive distributions, run the
// fixed-size bootstrap, fit power-law tails, and compare cohorts.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "godist/corpus.hpp"
#include "godist/histogram.hpp"
#include "godist/io.hpp"
#include "godist/resample.hpp"
#include "godist/synth.hpp"
#include "godist/tail.hpp"
#include "godist/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitEmpty = 2;

std::string iso_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out.push_back(' ');
    out += argv[i];
  }
  return out;
}

// Data outputs stay byte-reproducible; everything time-dependent lives in the
// manifest written next to them.
void write_manifest(const fs::path& path, json manifest, const std::string& command,
                    double duration_seconds) {
  manifest["command"] = command;
  manifest["version"] = godist::kVersion;
  manifest["duration_seconds"] = duration_seconds;
  manifest["written_utc"] = iso_utc_now();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
}

fs::path with_group_suffix(const fs::path& out, const std::string& label) {
  fs::path result = out.parent_path() / out.stem();
  result += "." + label;
  result += out.extension();
  return result;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct HistArgs {
  std::string input;
  std::string glob = "*.sgf";
  std::string group_by = "all";
  std::string out;
  unsigned threads = 1;
};

int run_hist(const HistArgs& args, const std::string& command) {
  Timer timer;
  const godist::GroupScheme scheme = godist::scheme_from_name(args.group_by);
  std::map<godist::GroupKey, godist::DistanceHistogram> groups;
  uint64_t admitted = 0;
  uint64_t ungrouped = 0;
  std::vector<std::pair<std::string, std::string>> extra_skips;

  godist::IngestReport report = godist::scan_corpus_stream(
      args.input, args.glob, [&](godist::GameRecord&& game, const std::string& path) {
        godist::GroupKey key;
        try {
          key = godist::group_key_for(game, scheme);
        } catch (const godist::UngroupedError& e) {
          ++ungrouped;
          extra_skips.emplace_back(path, e.what());
          return;
        }
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) it->second.group = key;
        godist::accumulate(it->second, game);
        ++admitted;
      });

  std::vector<godist::DistanceHistogram> hists;
  uint64_t quarantined = 0;
  for (auto& [key, hist] : groups) {
    quarantined += hist.quarantined_pairs;
    hists.push_back(std::move(hist));
  }
  godist::io::write_histograms(args.out, hists);

  godist::IngestReport full_report = report;
  for (auto& [path, reason] : extra_skips) full_report.skip(path, reason);
  godist::io::write_skip_report(args.out + ".skips.jsonl", full_report);

  if (quarantined > 0)
    std::cerr << "godist: warning: " << quarantined
              << " zero-distance pair(s) quarantined (corrupt records?)\n";

  write_manifest(args.out + ".manifest.json",
                 json{{"inputs", json::array({args.input})},
                      {"params", json{{"glob", args.glob}, {"group_by", args.group_by}}},
                      {"ingest", json{{"parsed", report.parsed_count},
                                      {"skipped_parse", report.skipped_count},
                                      {"skipped_ungrouped", ungrouped},
                                      {"quarantined_pairs", quarantined}}}},
                 command, timer.seconds());

  std::cerr << "godist: " << report.parsed_count << " game(s) parsed, "
            << (report.skipped_count + ungrouped) << " skipped, " << hists.size()
            << " group(s) -> " << args.out << "\n";
  return admitted == 0 ? kExitEmpty : kExitOk;
}

struct DistArgs {
  std::string hist;
  std::string out;
};

int run_dist(const DistArgs& args, const std::string& command) {
  Timer timer;
  const auto hists = godist::io::read_histograms(args.hist);
  json outputs = json::array();
  for (const godist::DistanceHistogram& hist : hists) {
    if (hist.empty()) {
      std::cerr << "godist: warning: group \"" << hist.group.label << "\" has no pairs, skipped\n";
      continue;
    }
    const fs::path path = with_group_suffix(args.out, hist.group.label);
    godist::io::write_distribution_csv(path, godist::to_distribution(hist));
    outputs.push_back(path.generic_string());
  }
  write_manifest(args.out + ".manifest.json",
                 json{{"inputs", json::array({args.hist})}, {"outputs", outputs}}, command,
                 timer.seconds());
  std::cerr << "godist: wrote " << outputs.size() << " distribution CSV(s)\n";
  return outputs.empty() ? kExitEmpty : kExitOk;
}

struct BootstrapArgs {
  std::string input;
  std::string glob = "*.sgf";
  uint64_t k = 55;
  uint64_t iters = 10000;
  uint64_t seed = 0;
  bool replacement = false;
  unsigned threads = 1;
  std::string out;
};

int run_bootstrap(const BootstrapArgs& args, const std::string& command) {
  Timer timer;
  godist::ScanResult scan = godist::scan_corpus(args.input, args.glob);
  const godist::ResamplePlan plan{args.k, args.iters, args.seed, args.replacement};
  const godist::BootstrapBands bands =
      godist::bootstrap(scan.records, plan, godist::GroupKey{}, args.threads);
  godist::io::write_bands_csv(args.out, bands);
  write_manifest(args.out + ".manifest.json",
                 json{{"inputs", json::array({args.input})},
                      {"plan", godist::io::plan_to_json(plan)},
                      {"ingest", json{{"parsed", scan.report.parsed_count},
                                      {"skipped", scan.report.skipped_count}}},
                      {"corpus_games", scan.records.size()},
                      {"empty_sample_iterations", bands.empty_sample_iterations}},
                 command, timer.seconds());
  std::cerr << "godist: bootstrap of " << args.k << " games x " << args.iters << " iterations over "
            << scan.records.size() << " game(s) -> " << args.out << "\n";
  return kExitOk;
}

struct FitArgs {
  std::string hist;
  double xmin = 2.0;
  std::string out;
};

int run_fit(const FitArgs& args, const std::string& command) {
  Timer timer;
  const auto hists = godist::io::read_histograms(args.hist);
  std::vector<std::pair<godist::GroupKey, godist::PowerLawFit>> fits;
  for (const godist::DistanceHistogram& hist : hists) {
    try {
      fits.emplace_back(hist.group, godist::fit_power_law(hist, args.xmin));
    } catch (const godist::FitError& e) {
      throw std::runtime_error("group \"" + hist.group.label + "\": " + e.what());
    }
  }
  godist::io::write_fits(args.out, fits);
  write_manifest(args.out + ".manifest.json",
                 json{{"inputs", json::array({args.hist})}, {"params", json{{"x_min", args.xmin}}}},
                 command, timer.seconds());
  std::cerr << "godist: fitted " << fits.size() << " group(s) -> " << args.out << "\n";
  return fits.empty() ? kExitEmpty : kExitOk;
}

struct CompareArgs {
  std::string hist;
  std::string out;
};

int run_compare(const CompareArgs& args, const std::string& command) {
  Timer timer;
  const auto hists = godist::io::read_histograms(args.hist);
  const auto reports = godist::compare_cohorts(hists);
  godist::io::write_separations_csv(args.out, reports);
  write_manifest(args.out + ".manifest.json", json{{"inputs", json::array({args.hist})}}, command,
                 timer.seconds());
  std::cerr << "godist: " << reports.size() << " cohort pair(s) -> " << args.out << "\n";
  return kExitOk;
}

struct SynthArgs {
  uint64_t n = 0;
  double alpha = 2.5;
  double min_step = 1.0;
  int moves_lo = 150;
  int moves_hi = 250;
  double pass_rate = 0.0;
  uint64_t seed = 0;
  int year_lo = 2016;
  int year_hi = 2016;
  std::string out;
  bool force = false;
};

int run_synth(const SynthArgs& args, const std::string& command) {
  Timer timer;
  const fs::path dir = args.out;
  if (fs::exists(dir) && !fs::is_empty(dir) && !args.force)
    throw std::runtime_error("output directory " + dir.string() +
                             " is not empty (use --force to overwrite)");
  godist::SynthParams params;
  params.tail_alpha = args.alpha;
  params.min_step = args.min_step;
  params.moves_lo = args.moves_lo;
  params.moves_hi = args.moves_hi;
  params.pass_rate = args.pass_rate;
  params.seed = args.seed;
  params.year_lo = args.year_lo;
  params.year_hi = args.year_hi;
  godist::write_corpus(dir, args.n, params);
  write_manifest(dir / "manifest.json",
                 json{{"params", json{{"n", args.n},
                                      {"alpha", params.tail_alpha},
                                      {"min_step", params.min_step},
                                      {"moves", json::array({params.moves_lo, params.moves_hi})},
                                      {"pass_rate", params.pass_rate},
                                      {"seed", params.seed},
                                      {"years", json::array({params.year_lo, params.year_hi})}}}},
                 command, timer.seconds());
  std::cerr << "godist: wrote " << args.n << " game(s) to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consecutive-placement distance statistics for Go game records"};
  const std::string version = std::string("godist ") + godist::kVersion;
  app.set_version_flag("--version", version);
  app.require_subcommand(1);

  HistArgs hist_args;
  CLI::App* hist = app.add_subcommand("hist", "Aggregate per-cohort distance histograms from SGF files");
  hist->set_version_flag("--version", version);
  hist->add_option("--input", hist_args.input, "Corpus directory")->required();
  hist->add_option("--glob", hist_args.glob, "Filename glob (default *.sgf)");
  hist->add_option("--group-by", hist_args.group_by, "Cohort scheme: year, decade, or all")
      ->check(CLI::IsMember({"year", "decade", "all"}));
  hist->add_option("--out", hist_args.out, "Histogram JSON output")->required();
  hist->add_option("--threads", hist_args.threads, "Worker threads (never changes results)");

  DistArgs dist_args;
  CLI::App* dist = app.add_subcommand("dist", "Derive pdf/cdf/ccdf CSVs from a histogram file");
  dist->set_version_flag("--version", version);
  dist->add_option("--hist", dist_args.hist, "Histogram JSON input")->required();
  dist->add_option("--out", dist_args.out, "Distribution CSV output (group label inserted)")->required();

  BootstrapArgs boot_args;
  CLI::App* boot = app.add_subcommand("bootstrap", "Mean/variance bands over repeated fixed-size samples");
  boot->set_version_flag("--version", version);
  boot->add_option("--input", boot_args.input, "Corpus directory")->required();
  boot->add_option("--glob", boot_args.glob, "Filename glob (default *.sgf)");
  boot->add_option("--k", boot_args.k, "Games per sample (default 55)");
  boot->add_option("--iters", boot_args.iters, "Bootstrap iterations (default 10000)");
  boot->add_option("--seed", boot_args.seed, "Master seed");
  boot->add_flag("--replacement", boot_args.replacement, "Sample with replacement");
  boot->add_option("--threads", boot_args.threads, "Worker threads (never changes results)");
  boot->add_option("--out", boot_args.out, "Bands CSV output")->required();

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "Fit a power-law tail exponent per cohort");
  fit->set_version_flag("--version", version);
  fit->add_option("--hist", fit_args.hist, "Histogram JSON input")->required();
  fit->add_option("--xmin", fit_args.xmin, "Tail threshold in grid units (default 2.0)");
  fit->add_option("--out", fit_args.out, "Fit JSON output")->required();

  CompareArgs cmp_args;
  CLI::App* cmp = app.add_subcommand("compare", "Pairwise KS separation between cohorts");
  cmp->set_version_flag("--version", version);
  cmp->add_option("--hist", cmp_args.hist, "Histogram JSON input")->required();
  cmp->add_option("--out", cmp_args.out, "Separation CSV output")->required();

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic SGF corpus with a known step law");
  synth->set_version_flag("--version", version);
  synth->add_option("--n", synth_args.n, "Number of games")->required();
  synth->add_option("--alpha", synth_args.alpha, "Step-length tail exponent (default 2.5)");
  synth->add_option("--min-step", synth_args.min_step, "Minimum step length (default 1.0)");
  synth->add_option("--moves-lo", synth_args.moves_lo, "Fewest move slots per game (default 150)");
  synth->add_option("--moves-hi", synth_args.moves_hi, "Most move slots per game (default 250)");
  synth->add_option("--pass-rate", synth_args.pass_rate, "Per-slot pass probability (default 0)");
  synth->add_option("--seed", synth_args.seed, "Master seed");
  synth->add_option("--year-lo", synth_args.year_lo, "Earliest game year (default 2016)");
  synth->add_option("--year-hi", synth_args.year_hi, "Latest game year (default 2016)");
  synth->add_option("--out", synth_args.out, "Output directory")->required();
  synth->add_flag("--force", synth_args.force, "Write into a non-empty directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  const std::string command = join_args(argc, argv);
  try {
    if (hist->parsed()) return run_hist(hist_args, command);
    if (dist->parsed()) return run_dist(dist_args, command);
    if (boot->parsed()) return run_bootstrap(boot_args, command);
    if (fit->parsed()) return run_fit(fit_args, command);
    if (cmp->parsed()) return run_compare(cmp_args, command);
    if (synth->parsed()) return run_synth(synth_args, command);
  } catch (const std::exception& e) {
    std::cerr << "godist: error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
