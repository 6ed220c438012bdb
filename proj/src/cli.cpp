#include "linmdtw/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "linmdtw/approx.hpp"
#include "linmdtw/eval.hpp"
#include "linmdtw/io.hpp"
#include "linmdtw/linmdtw.hpp"
#include "linmdtw/oracle.hpp"
#include "linmdtw/synth.hpp"

namespace lmdtw {

namespace {

struct AlignArgs {
  std::string a;
  std::string b;
  std::string algo = "linmdtw";
  std::size_t radius = 30;
  std::uint64_t budget = 100000;
  std::size_t min_dim = 500;
  std::string precision = "64";
  std::string tie_rule = "diag";
  int threads = 0;
  bool progress = false;
  std::string out;
  double max_oracle_gib = 8.0;
};

struct CompareArgs {
  std::string a;
  std::string b;
  std::vector<double> thresholds = kDefaultThresholdsSeconds;
  std::string out;
};

struct MemArgs {
  double m_seconds = 0.0;
  double n_seconds = 0.0;
  double fps = 43.0664;
  std::size_t radius = 30;
  std::vector<std::uint64_t> budgets{100000};
};

struct SynthArgs {
  std::string kind = "warped-sine";
  std::size_t length = 256;
  std::size_t second_length = 0;
  std::uint64_t seed = 0;
  double warp = 0.3;
  std::size_t dim = 4;
  double fps = kDefaultFps;
  std::string out;
};

void set_threads(int threads) {
  if (threads < 0) throw InvalidInput("--threads must be >= 0");
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
}

int cmd_align(const AlignArgs& args, std::ostream& out, std::ostream& err) {
  set_threads(args.threads);
  const Algorithm algo = parse_algorithm(args.algo);
  const Precision precision = parse_precision(args.precision);
  const TieRule tie = parse_tie_rule(args.tie_rule);
  const FeatureSeries x = load_features(std::filesystem::path(args.a));
  const FeatureSeries y = load_features(std::filesystem::path(args.b));
  if (x.dim() != y.dim()) {
    throw InvalidInput("feature dimensions differ: " + std::to_string(x.dim()) + " vs " +
                       std::to_string(y.dim()));
  }
  const std::size_t m = x.length();
  const std::size_t n = y.length();
  const MemoryEstimate est = memory_estimate(algo, m, n, {args.radius, args.budget});

  const auto start = std::chrono::steady_clock::now();
  AlignmentResult r;
  try {
    switch (algo) {
      case Algorithm::textbook: {
        OracleOptions o;
        o.tie_rule = tie;
        o.precision = precision;
        o.max_backpointer_bytes = static_cast<std::uint64_t>(args.max_oracle_gib * (1ULL << 30));
        r = dtw_full(x, y, {}, o);
        break;
      }
      case Algorithm::linmdtw: {
        LinMdtwConfig cfg;
        cfg.min_dim = args.min_dim;
        cfg.precision = precision;
        cfg.tie_rule = tie;
        if (args.progress) {
          cfg.progress = [&err](std::uint64_t done, std::uint64_t total) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "progress %.1f%%\n",
                          100.0 * static_cast<double>(done) / static_cast<double>(total));
            err << buf << std::flush;
          };
        }
        r = linmdtw(x, y, {}, cfg);
        break;
      }
      case Algorithm::fastdtw:
        r = fastdtw(x, y, {}, {args.radius, tie, precision});
        break;
      case Algorithm::mrmsdtw: {
        MrMsDtwOptions o;
        o.budget.max_cells = args.budget;
        o.tie_rule = tie;
        o.precision = precision;
        r = mrmsdtw(x, y, {}, o);
        break;
      }
    }
  } catch (const ResourceError& e) {
    const MemoryEstimate full = memory_estimate(Algorithm::textbook, m, n);
    err << "error: " << e.what() << "\n"
        << "the full cost matrix for " << m << " x " << n << " frames needs "
        << format_bytes(full.bytes) << "; linmdtw needs "
        << format_bytes(memory_estimate(Algorithm::linmdtw, m, n).bytes) << "\n";
    return kExitResource;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!args.out.empty()) {
    PathFile pf;
    pf.header = {m, n, x.fps(), r.cost, to_string(algo)};
    pf.path = r.path;
    write_path_file(std::filesystem::path(args.out), pf);
  }

  char cost[64];
  std::snprintf(cost, sizeof cost, "%.17g", r.cost);
  out << "algo " << to_string(algo) << "\n"
      << "frames " << m << " x " << n << "\n"
      << "precision " << to_string(precision) << "\n"
      << "cost " << cost << "\n"
      << "path_length " << r.path.size() << "\n"
      << "cells_processed " << r.cells_processed << "\n"
      << "cells_ratio " << cells_ratio(r, m, n) << "\n"
      << "peak_retained_cells " << r.peak_retained_cells << "\n"
      << "peak_backpointer_cells " << r.peak_backpointer_cells << "\n"
      << "estimated_cells " << est.cells << "\n"
      << "estimated_bytes " << est.bytes << " (" << format_bytes(est.bytes) << ")\n"
      << "seconds " << secs << "\n";
  if (!args.out.empty()) out << "path_file " << args.out << "\n";
  return kExitOk;
}

int cmd_compare(const CompareArgs& args, std::ostream& out) {
  const PathFile a = read_path_file(std::filesystem::path(args.a));
  const PathFile b = read_path_file(std::filesystem::path(args.b));
  if (a.header.rows != b.header.rows || a.header.cols != b.header.cols) {
    throw InvalidInput("path files refer to different grids: " + std::to_string(a.header.rows) +
                       "x" + std::to_string(a.header.cols) + " vs " +
                       std::to_string(b.header.rows) + "x" + std::to_string(b.header.cols));
  }
  for (double t : args.thresholds) {
    if (!(t >= 0.0)) throw InvalidInput("thresholds must be non-negative");
  }
  const DiscrepancyReport rep = discrepancy(a.path, b.path, a.header.fps);
  const auto props = proportion_below(rep, args.thresholds);
  out << "# M=" << rep.rows << " N=" << rep.cols << " fps=" << rep.fps
      << " count=" << rep.errors.size() << "\n";
  for (std::size_t k = 0; k < props.size(); ++k) {
    char line[96];
    std::snprintf(line, sizeof line, "below %.3f s: %.6f\n", args.thresholds[k], props[k]);
    out << line;
  }
  if (!args.out.empty()) {
    std::ofstream os(args.out, std::ios::trunc);
    if (!os) throw InvalidInput("cannot open '" + args.out + "' for writing");
    write_report(os, rep, args.thresholds);
    out << "distribution " << args.out << "\n";
  }
  return kExitOk;
}

int cmd_memreport(const MemArgs& args, std::ostream& out) {
  const std::size_t m = frames_for(args.m_seconds, args.fps);
  const std::size_t n = frames_for(args.n_seconds, args.fps);
  out << "frames " << m << " x " << n << " at " << args.fps << " fps\n";
  auto row = [&](const std::string& label, const MemoryEstimate& e) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-22s cells=%-14llu bytes=%-14llu %s\n", label.c_str(),
                  static_cast<unsigned long long>(e.cells),
                  static_cast<unsigned long long>(e.bytes), format_bytes(e.bytes).c_str());
    out << buf;
  };
  row("textbook", memory_estimate(Algorithm::textbook, m, n));
  row("fastdtw radius=" + std::to_string(args.radius),
      memory_estimate(Algorithm::fastdtw, m, n, {args.radius, 0}));
  row("linmdtw", memory_estimate(Algorithm::linmdtw, m, n));
  for (auto b : args.budgets) {
    row("mrmsdtw budget=" + std::to_string(b),
        memory_estimate(Algorithm::mrmsdtw, m, n, {args.radius, b}));
  }
  return kExitOk;
}

int cmd_synth(const SynthArgs& args, std::ostream& out) {
  SynthOptions o;
  o.kind = parse_synth_kind(args.kind);
  o.length = args.length;
  o.second_length = args.second_length;
  o.seed = args.seed;
  o.warp_strength = args.warp;
  o.dim = args.dim;
  o.fps = args.fps;
  const auto [a, b] = synthesize_pair(o);
  const std::string pa = args.out + "_a.lmdw";
  const std::string pb = args.out + "_b.lmdw";
  save_features(a, std::filesystem::path(pa));
  save_features(b, std::filesystem::path(pb));
  out << "kind " << to_string(o.kind) << " seed " << o.seed << " warp " << o.warp_strength
      << " frames " << a.length() << " x " << b.length() << " dim " << o.dim << "\n"
      << pa << "\n"
      << pb << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact linear-memory DTW alignment and baselines", "linmdtw"};
  app.require_subcommand(1);

  AlignArgs al;
  auto* align = app.add_subcommand("align", "Align two feature files");
  align->add_option("a", al.a, "First feature file")->required();
  align->add_option("b", al.b, "Second feature file")->required();
  align->add_option("--algo", al.algo, "dtw|textbook, linmdtw, fastdtw, mrmsdtw")
      ->capture_default_str();
  align->add_option("--radius", al.radius, "FastDTW radius")->capture_default_str();
  align->add_option("--budget", al.budget, "MrMsDTW cell budget")->capture_default_str();
  align->add_option("--min-dim", al.min_dim, "linmdtw base-case size")->capture_default_str();
  align->add_option("--precision", al.precision, "32 or 64")->capture_default_str();
  align->add_option("--tie-rule", al.tie_rule, "diag, left or up")->capture_default_str();
  align->add_option("--threads", al.threads, "OpenMP threads (0 = auto)")->capture_default_str();
  align->add_flag("--progress", al.progress, "Report progress on stderr");
  align->add_option("--out", al.out, "Path file to write");
  align->add_option("--max-oracle-gib", al.max_oracle_gib,
                    "Largest backpointer grid the textbook solver may allocate")
      ->capture_default_str();

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Discrepancy between two path files");
  compare->add_option("a", cmp.a, "Reference path file")->required();
  compare->add_option("b", cmp.b, "Other path file")->required();
  compare->add_option("--thresholds", cmp.thresholds, "Thresholds in seconds");
  compare->add_option("--out", cmp.out, "Distribution file to write");

  MemArgs mem;
  auto* memreport = app.add_subcommand("memreport", "DP memory per algorithm");
  memreport->add_option("m_seconds", mem.m_seconds, "Duration of the first recording")
      ->required();
  memreport->add_option("n_seconds", mem.n_seconds, "Duration of the second recording")
      ->required();
  memreport->add_option("--fps", mem.fps)->capture_default_str();
  memreport->add_option("--radius", mem.radius)->capture_default_str();
  memreport->add_option("--budget", mem.budgets, "One or more MrMsDTW budgets");

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Write a synthetic feature-file pair");
  synth->add_option("--kind", syn.kind, "warped-sine or random-walk")->capture_default_str();
  synth->add_option("--length", syn.length)->capture_default_str();
  synth->add_option("--second-length", syn.second_length, "0 = same as --length");
  synth->add_option("--seed", syn.seed)->capture_default_str();
  synth->add_option("--warp-strength", syn.warp)->capture_default_str();
  synth->add_option("--dim", syn.dim)->capture_default_str();
  synth->add_option("--fps", syn.fps);
  synth->add_option("--out", syn.out, "Output prefix; writes <out>_a.lmdw and <out>_b.lmdw")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*align) return cmd_align(al, out, err);
    if (*compare) return cmd_compare(cmp, out);
    if (*memreport) return cmd_memreport(mem, out);
    if (*synth) return cmd_synth(syn, out);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace lmdtw
