// Copyright 2026 The dpmicro Authors
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

// dpmicro release|sweep|verify
//
//   dpmicro release --data d.csv --schema d.schema --method ir-dp --k 10 \
//       --epsilon 1 --seed 7 --out masked.csv
//   dpmicro sweep --data d.csv --schema d.schema --method ir-dp,mv-dp \
//       --k 2:100 --epsilon 0.1,1,10 --attrs a,b --attrs a,b,c --out sweep.csv

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"

#include "dpmicro/error.h"
#include "dpmicro/harness.h"
#include "dpmicro/mechanisms.h"
#include "dpmicro/oracle.h"
#include "dpmicro/report.h"
#include "dpmicro/taxonomy.h"

namespace {

using dpmicro::InvalidArgument;

std::vector<std::string> SplitCommas(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string item(text.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view text, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument(std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

// "2,5,10" or "2:100" or "2:100:2"
std::vector<std::size_t> ParseKList(const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& item : SplitCommas(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(ParseNumber<std::size_t>(item, "k"));
      continue;
    }
    const std::string_view rest = std::string_view(item).substr(colon + 1);
    const auto colon2 = rest.find(':');
    const auto lo = ParseNumber<std::size_t>(std::string_view(item).substr(0, colon), "k");
    const auto hi = ParseNumber<std::size_t>(rest.substr(0, colon2), "k");
    const std::size_t step = colon2 == std::string_view::npos
                                 ? 1
                                 : ParseNumber<std::size_t>(rest.substr(colon2 + 1), "k step");
    if (step == 0 || hi < lo) throw InvalidArgument("bad k range '" + item + "'");
    for (std::size_t k = lo; k <= hi; k += step) out.push_back(k);
  }
  return out;
}

std::vector<double> ParseRealList(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const std::string& item : SplitCommas(text)) out.push_back(ParseNumber<double>(item, what));
  return out;
}

struct CommonFlags {
  std::string data;
  std::string schema;
  std::string method = "ir-dp";
  std::string k = "10";
  std::string epsilon = "1";
  std::vector<std::string> attrs;
  std::size_t runs = 10;
  std::uint64_t seed = 0;
  std::string out;
  bool no_clamp = false;
  std::size_t jobs = 1;
};

void AddDataFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--data", f.data, "Input CSV with a header row")->required();
  cmd->add_option("--schema", f.schema, "Schema file")->required();
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--out", f.out, "Output CSV path")->required();
  cmd->add_flag("--no-clamp", f.no_clamp, "Keep noisy values outside the domain");
}

int RunRelease(const CommonFlags& f) {
  dpmicro::ReleaseJob job;
  job.data = f.data;
  job.schema = f.schema;
  job.out = f.out;
  job.config.method = dpmicro::parse_method(f.method);
  const auto ks = ParseKList(f.k);
  if (ks.size() != 1) throw InvalidArgument("release takes a single --k");
  job.config.k = ks.front();
  job.config.epsilon = ParseNumber<double>(f.epsilon, "epsilon");
  job.config.seed = f.seed;
  job.config.clamp = !f.no_clamp;
  if (!f.attrs.empty()) job.attrs = SplitCommas(f.attrs.front());
  const dpmicro::UtilityReport report = dpmicro::run_release(job);
  std::cout << dpmicro::report_csv_header() << '\n'
            << dpmicro::to_csv_row(report) << '\n';
  std::cerr << "wrote " << f.out << " and " << dpmicro::report_path(f.out).string()
            << '\n';
  return 0;
}

int RunSweep(const CommonFlags& f) {
  dpmicro::SweepSpec spec;
  spec.data = f.data;
  spec.schema = f.schema;
  spec.output = f.out;
  for (const std::string& m : SplitCommas(f.method)) {
    spec.methods.push_back(dpmicro::parse_method(m));
  }
  spec.k_values = ParseKList(f.k);
  spec.epsilon_values = ParseRealList(f.epsilon, "epsilon");
  for (const std::string& subset : f.attrs) spec.attribute_subsets.push_back(SplitCommas(subset));
  spec.runs = f.runs;
  spec.master_seed = f.seed;
  spec.clamp = !f.no_clamp;
  spec.jobs = f.jobs;
  const dpmicro::SweepReport report = dpmicro::run_sweep(spec);
  std::size_t failed = 0;
  for (const auto& cell : report.cells) failed += cell.ok ? 0 : 1;
  std::cerr << "wrote " << report.cells.size() << " cells (" << failed << " failed) to "
            << f.out << " and " << dpmicro::sidecar_path(f.out).string() << '\n';
  return 0;
}

int RunVerify(std::size_t probes, std::uint64_t seed) {
  bool ok = true;
  const auto suite = dpmicro::oracle::random_sensitivity_suite(probes, seed);
  std::cout << "sensitivity: " << suite.probes << " probes, " << suite.failures
            << " failures, worst shift/bound " << suite.worst_ratio << '\n';
  ok = ok && suite.failures == 0;

  // Toy taxonomy: root -> {a -> {a1, a2}, b -> {b1}}
  const std::vector<dpmicro::Taxonomy::Edge> edges = {
      {"root", "a"}, {"root", "b"}, {"a", "a1"}, {"a", "a2"}, {"b", "b1"}};
  const auto t = dpmicro::Taxonomy::FromEdges("root", edges);
  const std::vector<dpmicro::NodeId> base = {t.id_of("a1"), t.id_of("a1"), t.id_of("a2")};
  const double eps = 1.0;
  double worst = 0.0;
  for (std::size_t node = 0; node < t.size(); ++node) {
    auto modified = base;
    modified[0] = static_cast<dpmicro::NodeId>(node);
    worst = std::max(worst, dpmicro::oracle::exact_dp_ratio(
                                t, base, modified, eps, dpmicro::kQualitySensitivity));
  }
  std::cout << "expmech: max ln-ratio " << worst << " at eps " << eps << '\n';
  ok = ok && worst <= eps + 1e-9;
  std::cout << (ok ? "verify: ok" : "verify: FAILED") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private microaggregated releases of tabular data"};
  app.require_subcommand(1);

  CommonFlags rel;
  CLI::App* release = app.add_subcommand("release", "Release one anonymized dataset");
  AddDataFlags(release, rel);
  release->add_option("--method", rel.method,
                      "ir-dp, plain-laplace, mv-dp, ir-only or mv-only");
  release->add_option("--k", rel.k, "Cluster size");
  release->add_option("--epsilon", rel.epsilon, "Total privacy budget");
  release->add_option("--attrs", rel.attrs, "Comma-separated attributes to release")
      ->expected(1);

  CommonFlags sw;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  AddDataFlags(sweep, sw);
  sweep->add_option("--method", sw.method, "Comma-separated methods");
  sweep->add_option("--k", sw.k, "k values: list and/or lo:hi[:step] ranges");
  sweep->add_option("--epsilon", sw.epsilon, "Comma-separated total budgets");
  sweep->add_option("--attrs", sw.attrs,
                    "Attribute subset (comma-separated); repeat for several subsets");
  sweep->add_option("--runs", sw.runs, "Runs per cell");
  sweep->add_option("--jobs", sw.jobs, "Worker threads");

  std::size_t probes = 1000;
  std::uint64_t verify_seed = 1;
  CLI::App* verify = app.add_subcommand("verify", "Run the built-in oracle checks");
  verify->group("");
  verify->add_option("--probes", probes, "Random sensitivity probes");
  verify->add_option("--seed", verify_seed, "Probe seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*release) return RunRelease(rel);
    if (*sweep) return RunSweep(sw);
    if (*verify) return RunVerify(probes, verify_seed);
  } catch (const std::exception& e) {
    std::cerr << "dpmicro: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
