// Copyright 2026 The RBO Verifier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rbo/analysis.hpp"
#include "rbo/error.hpp"
#include "rbo/protocol.hpp"
#include "rbo/report.hpp"
#include "rbo/verifier.hpp"

namespace rbo::cli {
namespace {

enum class Format { kJson, kCsv, kText };

const std::map<std::string, Format> kFormats{
    {"json", Format::kJson}, {"csv", Format::kCsv}, {"text", Format::kText}};
const std::map<std::string, SweepMode> kModes{
    {"exhaustive", SweepMode::kExhaustive}, {"random", SweepMode::kRandom}};
const std::map<std::string, KeyScheme> kSchemes{{"distinct", KeyScheme::kDistinct},
                                                {"duplicates", KeyScheme::kDuplicates},
                                                {"file", KeyScheme::kFile}};
const std::map<std::string, kernels::Backend> kBackends{{"auto", kernels::Backend::kAuto},
                                                        {"scalar", kernels::Backend::kScalar},
                                                        {"avx2", kernels::Backend::kAvx2}};

std::int64_t parse_int(std::string_view text, const std::string& what) {
  std::int64_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ConfigError("invalid integer '" + std::string(text) + "' in " + what);
  }
  return value;
}

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& text,
                                                 const std::string& what) {
  const auto colon = text.find(':', text.empty() ? 0 : 1);
  if (colon == std::string::npos) throw ConfigError(what + " must be a:b");
  return {parse_int(std::string_view(text).substr(0, colon), what),
          parse_int(std::string_view(text).substr(colon + 1), what)};
}

std::vector<std::int64_t> parse_key_list(const std::string& text, const std::string& what) {
  std::vector<std::int64_t> keys;
  std::string token;
  std::istringstream in(text);
  while (in >> std::ws && !in.eof()) {
    std::getline(in, token, ',');
    std::istringstream words(token);
    std::string word;
    bool any = false;
    while (words >> word) {
      keys.push_back(parse_int(word, what));
      any = true;
    }
    if (!any) throw ConfigError("empty entry in " + what);
  }
  return keys;
}

std::vector<std::int64_t> read_keys_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open keys file " + path);
  std::vector<std::int64_t> keys;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (auto& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream words(line);
    std::string word;
    while (words >> word) keys.push_back(parse_int(word, path));
  }
  return keys;
}

std::pair<int, int> k_bounds(const std::optional<int>& k, const std::string& range, int def_lo,
                             int def_hi) {
  if (!range.empty()) {
    const auto [a, b] = parse_pair(range, "--k-range");
    if (a < 0 || b < a || b > 62) throw ConfigError("invalid --k-range " + range);
    return {static_cast<int>(a), static_cast<int>(b)};
  }
  if (k) return {*k, *k};
  return {def_lo, def_hi};
}

struct Output {
  std::string path;
  std::ostream* fallback = nullptr;
  std::ofstream file;

  std::ostream& stream() {
    if (path.empty()) return *fallback;
    if (!file.is_open()) {
      file.open(path);
      if (!file) throw ConfigError("cannot write " + path);
    }
    return file;
  }
};

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

struct SweepOptions {
  std::optional<int> k;
  std::string k_range;
  std::string mode = "exhaustive";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::string key_scheme = "distinct";
  std::string keys_file;
  int jobs = 1;
  std::string backend = "auto";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--k", k, "cycle exponent (n = 2^k)")->check(CLI::Range(0, 62));
    cmd->add_option("--k-range", k_range, "inclusive k range a:b");
    cmd->add_option("--mode", mode, "exhaustive or random")
        ->check(CLI::IsMember({"exhaustive", "random"}));
    cmd->add_option("--samples", samples, "instances per k in random mode");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--key-scheme", key_scheme, "distinct, duplicates or file")
        ->check(CLI::IsMember({"distinct", "duplicates", "file"}));
    cmd->add_option("--keys-file", keys_file, "keys for --key-scheme file");
    cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--backend", backend, "batch kernel: auto, scalar or avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
  }

  SweepConfig config() const {
    SweepConfig cfg;
    std::tie(cfg.k_min, cfg.k_max) = k_bounds(k, k_range, 2, 8);
    cfg.mode = kModes.at(mode);
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.key_scheme = kSchemes.at(key_scheme);
    cfg.jobs = jobs;
    cfg.backend = kBackends.at(backend);
    cfg.exhaustive_cap = cap_from_env("RBO_EXHAUSTIVE_CAP", kDefaultExhaustiveCap);
    if (!keys_file.empty() && cfg.key_scheme != KeyScheme::kFile) {
      throw ConfigError("--keys-file requires --key-scheme file");
    }
    if (cfg.key_scheme == KeyScheme::kFile) {
      if (keys_file.empty()) throw ConfigError("--key-scheme file requires --keys-file");
      cfg.explicit_keys = read_keys_file(keys_file);
      if (!k && k_range.empty()) {
        const auto len = cfg.explicit_keys.size();
        if (len != 0 && (len & (len - 1)) == 0) {
          cfg.k_min = cfg.k_max = std::countr_zero(len);
        }
      }
    }
    cfg.validate();
    return cfg;
  }
};

int cmd_trace(int k, std::int64_t s, const std::string& keys_text, const std::string& keys_file,
              const std::string& query_text, const std::string& targets_text, Format format,
              Output& output) {
  if (!keys_text.empty() && !keys_file.empty()) {
    throw ConfigError("--keys and --keys-file are mutually exclusive");
  }
  if (query_text.empty() == targets_text.empty()) {
    throw ConfigError("exactly one of --query and --targets is required");
  }
  const std::int64_t n = std::int64_t{1} << k;

  std::vector<std::int64_t> keys;
  std::optional<QueryInterval<std::int64_t>> q;
  if (!targets_text.empty()) {
    if (!keys_text.empty() || !keys_file.empty()) {
      throw ConfigError("--targets builds its own keys; drop --keys/--keys-file");
    }
    const auto [r_lo, r_hi] = parse_pair(targets_text, "--targets");
    auto tq = query_for_targets(n, r_lo, r_hi);
    keys = std::move(tq.keys);
    q = tq.query;
  } else {
    if (!keys_text.empty()) {
      keys = parse_key_list(keys_text, "--keys");
    } else if (!keys_file.empty()) {
      keys = read_keys_file(keys_file);
    } else {
      for (std::int64_t i = 0; i < n; ++i) keys.push_back(2 * i);
    }
    const auto [lo, hi] = parse_pair(query_text, "--query");
    q = QueryInterval<std::int64_t>::make(lo, hi);
  }

  const auto cycle = cycle_new(std::move(keys));
  if (cycle.k() != k) {
    throw ShapeError("cycle holds " + std::to_string(cycle.n()) + " keys but --k is " +
                     std::to_string(k));
  }
  const auto trace = run(cycle, *q, s);
  const auto targets = target_bounds(cycle, *q);
  auto& out = output.stream();
  switch (format) {
    case Format::kJson: emit_json(out, to_json(trace, targets)); break;
    case Format::kCsv: write_trace_records(out, trace); break;
    case Format::kText: write_text(out, cycle, trace, targets); break;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Receiver energy analysis for bit-reversal-ordered broadcasts", "rbo"};
  app.require_subcommand(1);

  std::string format_name = "text";
  std::string out_path;
  auto add_common = [&](CLI::App* cmd, bool csv) {
    std::vector<std::string> allowed{"json", "text"};
    if (csv) allowed.push_back("csv");
    cmd->add_option("--format", format_name, "output format")->check(CLI::IsMember(allowed));
    cmd->add_option("--out", out_path, "write output to this file instead of stdout");
  };

  auto* trace_cmd = app.add_subcommand("trace", "run the receiver for one query");
  int trace_k = 0;
  std::int64_t trace_s = 0;
  std::string keys_text, keys_file, query_text, targets_text;
  trace_cmd->add_option("--k", trace_k, "cycle exponent")->required()->check(CLI::Range(0, 30));
  trace_cmd->add_option("--s", trace_s, "start slot (reduced mod n)");
  trace_cmd->add_option("--keys", keys_text, "comma-separated ascending keys");
  trace_cmd->add_option("--keys-file", keys_file, "file of ascending keys");
  trace_cmd->add_option("--query", query_text, "query interval lo:hi");
  trace_cmd->add_option("--targets", targets_text, "target bounds r':r'' (keys 2i)");
  add_common(trace_cmd, true);

  auto* dec_cmd = app.add_subcommand("decompose", "segment decomposition of a start slot");
  int dec_k = 0;
  std::int64_t dec_s = 0;
  dec_cmd->add_option("--k", dec_k, "cycle exponent")->required()->check(CLI::Range(0, 62));
  dec_cmd->add_option("--s", dec_s, "start slot, 0 <= s < 2^k")->required();
  add_common(dec_cmd, false);

  auto* verify_cmd = app.add_subcommand("verify", "check the energy bounds over many runs");
  SweepOptions verify_opts;
  verify_opts.add_to(verify_cmd);
  add_common(verify_cmd, true);

  auto* worst_cmd = app.add_subcommand("worst", "largest observed energies per k");
  SweepOptions worst_opts;
  worst_opts.add_to(worst_cmd);
  add_common(worst_cmd, true);

  auto* lemma_cmd = app.add_subcommand("lemmas", "check the per-segment statements");
  std::optional<int> lemma_k;
  std::string lemma_range;
  int lemma_jobs = 1;
  lemma_cmd->add_option("--k", lemma_k, "cycle exponent")->check(CLI::Range(0, 30));
  lemma_cmd->add_option("--k-range", lemma_range, "inclusive k range a:b");
  lemma_cmd->add_option("--jobs", lemma_jobs, "worker threads")->check(CLI::PositiveNumber);
  add_common(lemma_cmd, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "rbo: " << e.what() << '\n';
    return 2;
  }

  try {
    const auto format = kFormats.at(format_name);
    Output output{out_path, &out, {}};

    if (trace_cmd->parsed()) {
      return cmd_trace(trace_k, trace_s, keys_text, keys_file, query_text, targets_text, format,
                       output);
    }
    if (dec_cmd->parsed()) {
      const auto dec = decompose(dec_s, dec_k);
      if (format == Format::kJson) {
        emit_json(output.stream(), to_json(dec));
      } else {
        write_text(output.stream(), dec);
      }
      return 0;
    }
    if (verify_cmd->parsed()) {
      const auto report = sweep_bounds(verify_opts.config());
      auto& o = output.stream();
      switch (format) {
        case Format::kJson: emit_json(o, to_json(report)); break;
        case Format::kCsv: write_csv(o, report); break;
        case Format::kText: write_text(o, report); break;
      }
      return report.passed() ? 0 : 1;
    }
    if (worst_cmd->parsed()) {
      const auto rows = worst_case(worst_opts.config());
      auto& o = output.stream();
      switch (format) {
        case Format::kJson: emit_json(o, worst_to_json(rows)); break;
        case Format::kCsv: write_worst_csv(o, rows); break;
        case Format::kText: write_worst_text(o, rows); break;
      }
      bool ok = true;
      for (const auto& row : rows) ok = ok && row.passed();
      return ok ? 0 : 1;
    }
    if (lemma_cmd->parsed()) {
      LemmaSuiteConfig cfg;
      std::tie(cfg.k_min, cfg.k_max) = k_bounds(lemma_k, lemma_range, 2, 4);
      cfg.jobs = lemma_jobs;
      cfg.cap = cap_from_env("RBO_LEMMA_CAP", kDefaultLemmaCap);
      const auto report = check_lemma_suite(cfg);
      auto& o = output.stream();
      switch (format) {
        case Format::kJson: emit_json(o, to_json(report)); break;
        case Format::kCsv: write_csv(o, report); break;
        case Format::kText: write_text(o, report); break;
      }
      return report.passed() ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "rbo: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace rbo::cli
