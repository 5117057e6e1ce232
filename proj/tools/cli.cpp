#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include "cajux/bounds.hpp"
#include "cajux/canonical.hpp"
#include "cajux/coverage.hpp"
#include "cajux/errors.hpp"
#include "cajux/generator.hpp"
#include "cajux/search.hpp"
#include "cajux/store.hpp"

namespace cajux::cli {

namespace {

namespace fs = std::filesystem;

struct RunLimits {
  int workers = 1;
  std::optional<double> time_budget;
  std::optional<std::uint64_t> node_budget;
  double progress = 0;

  Budget budget() const { return {time_budget, node_budget}; }
};

void add_limits(CLI::App* cmd, RunLimits& l) {
  cmd->add_option("--workers", l.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--time-budget", l.time_budget, "Wall-clock budget in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--node-budget", l.node_budget, "Search node budget")->check(CLI::PositiveNumber);
  cmd->add_option("--progress", l.progress, "Progress report interval in seconds (0 = off)")
      ->check(CLI::NonNegativeNumber);
}

void add_params(CLI::App* cmd, Params& p, const char* t_help, const char* k_help) {
  cmd->add_option("N,--n", p.N, "Rows")->required();
  cmd->add_option("t,--t", p.t, t_help)->required();
  cmd->add_option("k,--k", p.k, k_help)->required();
  cmd->add_option("v,--v", p.v, "Symbols")->required();
}

ProgressFn progress_printer(std::ostream& err) {
  return [&err](const Progress& p) {
    err << "progress: nodes=" << p.nodes << " found=" << p.found << " elapsed=" << p.seconds << "s" << std::endl;
  };
}

std::string describe(const Params& p) {
  return "CA(" + std::to_string(p.N) + ";" + std::to_string(p.t) + "," + std::to_string(p.k) + "," +
         std::to_string(p.v) + ")";
}

std::string join(const std::vector<int>& xs) {
  std::string s;
  for (int x : xs) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& file, std::optional<int> strength, std::ostream& out, std::ostream& err) {
  if (!fs::exists(file)) {
    err << "no such file: " << file << "\n";
    return kMissingInput;
  }
  const CoveringArray a = read_ca(fs::path(file));
  const int s = strength.value_or(a.strength());
  if (s < 1 || s > a.cols()) {
    err << "strength " << s << " outside 1.." << a.cols() << "\n";
    return kParseError;
  }
  const auto witness = find_uncovered(a, s);
  if (!witness) {
    out << "strength " << s << ": PASS\n";
    return kOk;
  }
  std::vector<int> tuple(witness->tuple.begin(), witness->tuple.end());
  out << "strength " << s << ": FAIL\n";
  out << "uncovered columns " << join(witness->columns) << " tuple " << join(tuple) << "\n";
  return kVerifyFailed;
}

int cmd_canon(const std::string& file, const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (!fs::exists(file)) {
    err << "no such file: " << file << "\n";
    return kMissingInput;
  }
  const CoveringArray a = read_ca(fs::path(file));
  const CanonicalForm form = canonical_minimum(a);
  const char* status = form.array() == a ? "already canonical" : "not canonical";
  if (out_path.empty()) {
    err << status << "\n";
    write_ca(form.array(), out);
  } else {
    write_ca(form.array(), fs::path(out_path));
    out << status << "\n";
  }
  return kOk;
}

int cmd_multisets(const Params& p, std::ostream& out) {
  validate(p);
  for (const auto& m : valid_multisets(p.N, p.t, p.k, p.v)) out << join(m.sizes) << "\n";
  return kOk;
}

int cmd_bounds(int t, int k, int v, std::ostream& out) {
  const Bound b = can_bound(t, k, v);
  out << (b.kind == BoundKind::exact ? "exact " : "lower ") << b.value << "\n";
  return kOk;
}

int cmd_generate(const Params& p, const std::string& out_path, const RunLimits& limits, std::ostream& out,
                 std::ostream& err) {
  validate(p);
  GenerateOptions options;
  options.workers = limits.workers;
  options.budget = limits.budget();
  if (limits.progress > 0) {
    options.progress = progress_printer(err);
    options.progress_interval = limits.progress;
  }

  RunManifest manifest;
  manifest.command = "generate";
  manifest.params = p;
  GenerationStats stats;
  std::optional<CaLibrary> lib;
  std::optional<CaLibrary> partial;
  try {
    lib = generate_distinct(p, options, &stats);
  } catch (const BudgetExhausted& e) {
    std::vector<CanonicalForm> found;
    for (const auto& a : e.partial()) found.push_back(CanonicalForm::trusted(a));
    partial.emplace(p, std::move(found));
    stats.nodes = e.nodes();
    stats.seconds = e.seconds();
  }

  const CaLibrary& written = lib ? *lib : *partial;
  if (!out_path.empty()) {
    const fs::path target = lib ? fs::path(out_path) : fs::path(out_path + ".partial");
    write_library(written, target);
    manifest.results.push_back(
        {"output", target.filename().string(), sha256_file(target), {{"members", std::to_string(written.size())}}});
    manifest.stats = {{"nodes", std::to_string(stats.nodes)},
                      {"prefixes", std::to_string(stats.prefixes)},
                      {"seconds", fixed(stats.seconds)}};
    manifest.verdict = lib ? verdict_for(written.size(), true, false) : Verdict::budget_exhausted;
    write_manifest(manifest, fs::path(out_path + ".manifest"));
  }

  if (!lib) {
    err << "budget exhausted after " << stats.nodes << " nodes; " << written.size()
        << " members found so far (not a complete library)\n";
    return kBudget;
  }
  out << written.size() << "\n";
  err << "generated " << written.size() << " non-isomorphic " << describe(p) << " in " << fixed(stats.seconds)
      << " s\n";
  return kOk;
}

struct SearchFlags {
  std::string libs;
  std::string out;
  bool allow_partial = false;
  bool validate = false;
  bool lookahead = false;
};

// Remove results of an earlier run so the directory holds exactly this run.
void clear_results(const fs::path& dir) {
  static const std::regex pattern(R"((result|partial)_\d+\.ca)");
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), pattern))
      fs::remove(entry.path());
}

int cmd_search(const Params& target, const SearchFlags& flags, const RunLimits& limits, std::ostream& out,
               std::ostream& err) {
  validate(target);
  if (target.t < 2) {
    err << "search needs strength >= 2\n";
    return kParseError;
  }
  const int t = target.t - 1;
  const int k = target.k - 1;
  const auto multisets = valid_multisets(target.N, t, k, target.v);
  std::set<int> required;
  for (const auto& m : multisets) required.insert(m.sizes.begin(), m.sizes.end());

  std::map<int, fs::path> files;
  if (!required.empty()) {
    if (flags.libs.empty() || !fs::is_directory(flags.libs)) {
      if (!flags.allow_partial) {
        err << "library directory not found: " << (flags.libs.empty() ? "(none given)" : flags.libs) << "\n";
        err << "required libraries: " << describe({0, t, k, target.v}) << " for N in {"
            << join({required.begin(), required.end()}) << "}\n";
        return kMissingInput;
      }
    } else {
      std::vector<fs::path> candidates;
      for (const auto& entry : fs::directory_iterator(flags.libs))
        if (entry.is_regular_file() && entry.path().extension() == ".calib") candidates.push_back(entry.path());
      std::sort(candidates.begin(), candidates.end());
      for (const auto& path : candidates) {
        const Params p = read_library_header(path);
        if (p.t != t || p.k != k || p.v != target.v || !required.count(p.N)) continue;
        if (files.count(p.N)) {
          err << "two libraries for " << describe(p) << ": " << files[p.N].string() << " and " << path.string() << "\n";
          return kParseError;
        }
        files[p.N] = path;
      }
    }
  }

  std::vector<int> missing;
  for (int size : required)
    if (!files.count(size)) missing.push_back(size);
  if (!missing.empty() && !flags.allow_partial) {
    err << "missing libraries: " << describe({0, t, k, target.v}) << " for N in {" << join(missing) << "}\n";
    return kMissingInput;
  }

  LibraryMap libraries;
  RunManifest manifest;
  manifest.command = "search";
  manifest.params = target;
  manifest.inputs = {{"lookahead", flags.lookahead ? "yes" : "no"},
                     {"allow_partial", flags.allow_partial ? "yes" : "no"},
                     {"validated_libraries", flags.validate ? "yes" : "no"}};
  for (const auto& [size, path] : files) {
    auto lib = read_library(path, LibraryValidation{true, flags.validate});
    manifest.libraries.push_back({"library." + std::to_string(size),
                                  path.filename().string(),
                                  sha256_file(path),
                                  {{"members", std::to_string(lib.size())}}});
    libraries.emplace(size, std::move(lib));
  }
  for (const auto& m : multisets) manifest.multisets.push_back(m.sizes);

  SearchOptions options;
  options.workers = limits.workers;
  options.budget = limits.budget();
  options.lookahead = flags.lookahead;
  options.allow_partial = flags.allow_partial;
  if (limits.progress > 0) {
    options.progress = progress_printer(err);
    options.progress_interval = limits.progress;
  }

  std::vector<CoveringArray> found;
  SearchStats stats;
  bool exhausted = false;
  bool complete = missing.empty();
  try {
    auto result = construct(target.N, target.t, target.k, target.v, libraries, options);
    for (const auto& f : result.members) found.push_back(f.array());
    stats = result.stats;
    complete = result.libraries_complete;
  } catch (const BudgetExhausted& e) {
    exhausted = true;
    found = e.partial();
    stats.total.nodes = e.nodes();
    stats.seconds = e.seconds();
  }
  manifest.verdict = verdict_for(found.size(), complete, exhausted);

  if (!flags.out.empty()) {
    const fs::path dir(flags.out);
    fs::create_directories(dir);
    clear_results(dir);
    const char* stem = exhausted ? "partial_" : "result_";
    for (std::size_t i = 0; i < found.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "%s%03zu.ca", stem, i);
      write_ca(found[i], dir / name);
      manifest.results.push_back({"result." + std::to_string(i), name, sha256_file(dir / name), {}});
    }
    const auto& c = stats.total;
    manifest.stats = {{"tuples", std::to_string(c.tuples)},
                      {"nodes", std::to_string(c.nodes)},
                      {"juxtapositions", std::to_string(c.juxtapositions)},
                      {"verified", std::to_string(c.emitted)},
                      {"coverage_prunes", std::to_string(c.coverage_prunes)},
                      {"lookahead_prunes", std::to_string(c.lookahead_prunes)},
                      {"seconds", fixed(stats.seconds)}};
    write_manifest(manifest, dir / "manifest.txt");
  }

  out << "multisets " << multisets.size() << "\n";
  out << "tuples " << stats.total.tuples << "\n";
  out << "results " << found.size() << "\n";
  out << "verdict " << to_string(manifest.verdict) << "\n";
  if (!missing.empty()) err << "skipped multisets needing N in {" << join(missing) << "}\n";
  if (exhausted) {
    err << "budget exhausted after " << stats.total.nodes << " nodes; results are not authoritative\n";
    return kBudget;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covering array generation and juxtaposition search", "cajux"};
  app.require_subcommand(1);

  std::string file;
  std::string out_path;
  std::optional<int> strength;
  Params params;
  RunLimits limits;
  SearchFlags search_flags;

  auto* verify = app.add_subcommand("verify", "Check the coverage strength of a CA file");
  verify->add_option("file", file, "CA file")->required();
  verify->add_option("--t,--strength", strength, "Strength to check (default: the header's)");

  auto* canon = app.add_subcommand("canon", "Write the canonical minimum of a CA file");
  canon->add_option("file", file, "CA file")->required();
  canon->add_option("--out", out_path, "Output CA file (default: standard output)");

  auto* generate = app.add_subcommand("generate", "Generate all non-isomorphic CA(N;t,k,v)");
  add_params(generate, params, "Strength", "Columns");
  generate->add_option("--out", out_path, "Library file; a manifest is written next to it");
  add_limits(generate, limits);

  auto* search = app.add_subcommand("search", "Decide CA(N;t,k,v) by juxtaposing strength t-1 libraries");
  add_params(search, params, "Strength of the target", "Columns of the target");
  search->add_option("--libs", search_flags.libs, "Directory of .calib libraries");
  search->add_option("--out", search_flags.out, "Directory for result files and the manifest");
  search->add_flag("--allow-partial", search_flags.allow_partial, "Run with missing libraries");
  search->add_flag("--validate", search_flags.validate, "Check that library members are class minima");
  search->add_flag("--lookahead", search_flags.lookahead, "Extra feasibility pruning in earlier blocks");
  add_limits(search, limits);

  auto* multisets = app.add_subcommand("multisets", "List the valid block-size multisets for CA(N;t+1,k+1,v)");
  add_params(multisets, params, "Block strength", "Block columns");

  int bt = 0, bk = 0, bv = 0;
  auto* bounds = app.add_subcommand("bounds", "Print the known value or a lower bound of CAN(t,k,v)");
  bounds->add_option("t,--t", bt, "Strength")->required();
  bounds->add_option("k,--k", bk, "Columns")->required();
  bounds->add_option("v,--v", bv, "Symbols")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*verify) return cmd_verify(file, strength, out, err);
    if (*canon) return cmd_canon(file, out_path, out, err);
    if (*generate) return cmd_generate(params, out_path, limits, out, err);
    if (*search) return cmd_search(params, search_flags, limits, out, err);
    if (*multisets) return cmd_multisets(params, out);
    if (*bounds) return cmd_bounds(bt, bk, bv, out);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kParseError;
  } catch (const MissingLibrary& e) {
    err << e.what() << "\n";
    return kMissingInput;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kMissingInput;
  }
  return kParseError;
}

}  // namespace cajux::cli
