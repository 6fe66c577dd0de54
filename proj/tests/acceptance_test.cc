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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpmicro/harness.h"
#include "dpmicro/mechanisms.h"
#include "dpmicro/metrics.h"
#include "dpmicro/microaggregation.h"
#include "dpmicro/oracle.h"
#include "dpmicro/random.h"
#include "dpmicro/taxonomy.h"

namespace dpmicro {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double Normal(Rng& rng) {
  const double u1 = rng.Uniform();
  const double u2 = rng.Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// n = 1080, four log-normal(8, 1) and four uniform(0, 1000) columns, bounds
// inferred as [0, 1.5 * max].
Dataset PaperLike(std::uint64_t seed) {
  constexpr std::size_t kN = 1080;
  Rng rng(seed);
  std::vector<AttributeSchema> attrs;
  std::vector<Column> cols;
  for (int a = 0; a < 8; ++a) {
    const bool lognormal = a < 4;
    NumericColumn col(kN);
    for (double& v : col) v = lognormal ? std::exp(8.0 + Normal(rng)) : 1000.0 * rng.Uniform();
    const auto [lo, hi] = infer_numeric_bounds(col, 1.5);
    attrs.push_back(AttributeSchema::Numeric((lognormal ? "ln" : "u") + std::to_string(a % 4),
                                             lo, hi));
    cols.emplace_back(std::move(col));
  }
  return Dataset(Schema(std::move(attrs)), std::move(cols));
}

Dataset Uniform(std::size_t n, std::size_t m, double upper, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<AttributeSchema> attrs;
  std::vector<Column> cols;
  for (std::size_t a = 0; a < m; ++a) {
    NumericColumn col(n);
    for (double& v : col) v = upper * rng.Uniform();
    attrs.push_back(AttributeSchema::Numeric("a" + std::to_string(a), 0, upper));
    cols.emplace_back(std::move(col));
  }
  return Dataset(Schema(std::move(attrs)), std::move(cols));
}

Taxonomy Build(std::string_view root, const std::vector<Taxonomy::Edge>& edges) {
  return Taxonomy::FromEdges(root, edges);
}

Taxonomy FiveNode() { return Build("r", {{"r", "p"}, {"r", "q"}, {"p", "p1"}, {"p", "p2"}}); }

// 1. Sensitivity bound of individual ranking.
Outcome SensitivityBound() {
  const auto start = Clock::now();
  const oracle::ProbeSuiteResult suite = oracle::random_sensitivity_suite(1000, 20260101);
  const std::vector<double> before = {1, 2, 3, 4};
  const std::vector<double> after = {1, 2, 3, 0};
  const double hand = oracle::centroid_shift(before, after, 2);
  const double elapsed = Seconds(start);
  Outcome o;
  o.pass = suite.failures == 0 && hand == 2.0 && elapsed < 30.0;
  o.detail = Fmt("%zu probes, %zu over bound, worst shift/bound %.6f; hand case %.17g; %.1f s",
                 suite.probes, suite.failures, suite.worst_ratio, hand, elapsed);
  return o;
}

// 2. Shared noise: distinct released values per attribute, and the exact
// ratio of shared vs per-record categorical draws.
Outcome SharedNoise() {
  std::size_t releases = 0;
  std::size_t violations = 0;
  const Dataset data = PaperLike(7);
  for (std::size_t k : {2, 3, 7, 25, 100}) {
    for (double eps : {0.1, 1.0, 10.0}) {
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Release r = ir_dp_release(data, k, PrivacyBudget(eps, data.num_attributes()),
                                        seed, {.clamp = false});
        const std::size_t cap = (data.num_records() + k - 1) / k;
        for (std::size_t a = 0; a < data.num_attributes(); ++a) {
          const auto col = r.data.numeric(a);
          violations += std::set<double>(col.begin(), col.end()).size() > cap;
        }
        ++releases;
      }
    }
  }

  const Taxonomy t = FiveNode();
  const std::vector<NodeId> cluster = {t.id_of("p1"), t.id_of("p1"), t.id_of("p2")};
  const double eps = 1.0;
  double shared = 0.0;
  double per_record = 0.0;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    for (NodeId v = 0; v < static_cast<NodeId>(t.size()); ++v) {
      auto other = cluster;
      other[i] = v;
      shared = std::max(shared, oracle::exact_dp_ratio(t, cluster, other, eps, 1.0));
      per_record = std::max(
          per_record,
          oracle::exact_dp_ratio(
              oracle::exact_per_record_distribution(t, cluster, eps, 1.0, cluster.size()),
              oracle::exact_per_record_distribution(t, other, eps, 1.0, cluster.size())));
    }
  }
  Outcome o;
  const bool broken_caught = per_record > eps + 1e-9;
  o.pass = violations == 0 && shared <= eps + 1e-9 && broken_caught;
  o.detail = Fmt("%zu releases, %zu attributes over ceil(n/k) distinct values; exact ln-ratio "
                 "shared %.4f, per-record %.4f (eps %.1f, per-record %s)",
                 releases, violations, shared, per_record, eps,
                 broken_caught ? "flagged" : "NOT flagged");
  return o;
}

// 3. Empirical noise standard deviation per cluster.
Outcome NoiseCalibration() {
  struct Setting {
    std::size_t k;
    double eps;
    std::size_t m;
  };
  constexpr std::size_t kDraws = 100000;
  constexpr double kUpper = 1000.0;
  Outcome o{true, ""};
  for (const Setting s : {Setting{2, 1, 1}, Setting{25, 10, 8}, Setting{10, 0.5, 4}}) {
    const Dataset data = Uniform(1080, s.m, kUpper, 300 + s.k);
    std::vector<ClusterPlan> plans;
    for (std::size_t a = 0; a < s.m; ++a) plans.push_back(individual_ranking(data.numeric(a), s.k));
    double sum = 0.0;
    double sq = 0.0;
    std::size_t count = 0;
    for (std::uint64_t seed = 0; count < kDraws; ++seed) {
      const Release r = ir_dp_release(data, s.k, PrivacyBudget(s.eps, s.m), seed,
                                      {.clamp = false});
      for (std::size_t a = 0; a < s.m && count < kDraws; ++a) {
        const ClusterPlan& plan = plans[a];
        for (std::size_t c = 0; c < plan.partition.num_clusters() && count < kDraws; ++c) {
          const std::size_t first = plan.partition.members(c)[0];
          const double x = r.data.numeric(a)[first] - plan.numeric_centroids()[c];
          sum += x;
          sq += x * x;
          ++count;
        }
      }
    }
    const double mean = sum / count;
    const double sd = std::sqrt(sq / count - mean * mean);
    const double want = std::sqrt(2.0) * kUpper / (s.k * s.eps / s.m);
    const double rel = std::fabs(sd - want) / want;
    o.pass = o.pass && rel < 0.02;
    o.detail += Fmt("%s(k=%zu,eps=%g,m=%zu) sd %.3f vs %.3f (%.2f%%)", o.detail.empty() ? "" : "; ",
                    s.k, s.eps, s.m, sd, want, 100 * rel);
  }
  o.detail += Fmt("; %zu draws each", kDraws);
  return o;
}

// 4. ir-dp at k = 1 against plain Laplace with matched streams.
Outcome KOneEquivalence() {
  constexpr std::size_t kN = 100000;
  const Dataset data = Uniform(kN, 1, 100.0, 4);
  const PrivacyBudget budget(1.0, 1);
  const Release ir = ir_dp_release(data, 1, budget, 99, {.clamp = false});
  const Release pl = plain_laplace_release(data, budget, 99, {.clamp = false});
  auto scale = [&](const Release& r) {
    double total = 0.0;
    for (std::size_t i = 0; i < kN; ++i) total += std::fabs(r.data.numeric(0)[i] - data.numeric(0)[i]);
    return total / kN;
  };
  const double a = scale(ir);
  const double b = scale(pl);
  const double rel = std::fabs(a - b) / b;
  Outcome o;
  o.pass = rel < 0.01;
  o.detail = Fmt("mean |noise| ir-dp %.4f, plain-laplace %.4f, relative gap %.2e "
                 "(nominal m*Delta/eps = %.1f)",
                 a, b, rel, plain_laplace_scale(100.0, budget));
  return o;
}

// 5. Crossover of the ir-dp and mv-dp scales.
Outcome Crossover() {
  const double n = 1080;
  const std::size_t m = 13;
  const double eps = 1.0;
  const PrivacyBudget budget(eps, m);
  const double k_star = crossover_k(n, static_cast<double>(m));
  const double ir = ir_dp_scale(1.0, k_star, budget);
  const double mv = mv_dp_scale(1.0, n, k_star, eps);
  bool ordered = true;
  for (std::size_t k = 2; k <= 1080; ++k) {
    const double kd = static_cast<double>(k);
    const double a = ir_dp_scale(1.0, kd, budget);
    const double b = mv_dp_scale(1.0, n, kd, eps);
    // Below the crossover ir-dp adds less noise; above it, more.
    ordered = ordered && (kd < k_star ? a < b : a > b);
  }
  Outcome o;
  o.pass = std::fabs(ir - mv) <= 1e-12 * mv && ordered &&
           static_cast<int>(std::floor(k_star)) == 83;
  o.detail = Fmt("k* = %.4f, scales at k* %.6g vs %.6g, ordering on k=2..1080 %s", k_star, ir,
                 mv, ordered ? "holds" : "BROKEN");
  return o;
}

SweepSpec Grid(std::vector<Method> methods, std::vector<std::size_t> ks,
               std::vector<double> eps, std::uint64_t seed) {
  SweepSpec spec;
  spec.methods = std::move(methods);
  spec.k_values = std::move(ks);
  spec.epsilon_values = std::move(eps);
  spec.runs = 10;
  spec.master_seed = seed;
  return spec;
}

// 6. RE trends on paper-like synthetic data.
Outcome Trends(const Dataset& data) {
  const auto start = Clock::now();
  std::vector<std::size_t> ks;
  for (std::size_t k = 2; k <= 100; ++k) ks.push_back(k);
  const std::vector<double> eps = {0.1, 1.0, 10.0};
  const SweepReport ir = run_sweep(Grid({Method::kIrDp}, ks, eps, 61), data);
  const SweepReport pl = run_sweep(Grid({Method::kPlainLaplace}, {1}, eps, 62), data);
  const SweepReport only = run_sweep(Grid({Method::kIrOnly}, {80, 90, 100}, {10.0}, 63), data);

  std::map<double, double> plain;
  for (const auto& c : pl.cells) plain[c.epsilon] = c.re_mean;
  std::size_t below = 0;
  std::string worst;
  double worst_gap = -1e300;
  std::map<std::size_t, double> ir_eps10;
  for (const auto& c : ir.cells) {
    const double gap = c.re_mean - plain[c.epsilon];
    if (gap < 0) ++below;
    if (gap > worst_gap) {
      worst_gap = gap;
      worst = Fmt("k=%zu eps=%g: %.4f vs %.4f", c.k, c.epsilon, c.re_mean, plain[c.epsilon]);
    }
    if (c.epsilon == 10.0) ir_eps10[c.k] = c.re_mean;
  }
  const bool first = below == ir.cells.size();

  std::string large_k;
  double rel100 = 0.0;
  for (const auto& c : only.cells) {
    const double rel = (ir_eps10[c.k] - c.re_mean) / c.re_mean;
    if (c.k == 100) rel100 = rel;
    large_k += Fmt(" k=%zu %.4f/%.4f(%+.1f%%)", c.k, ir_eps10[c.k], c.re_mean, 100 * rel);
  }
  const bool second = std::fabs(rel100) <= 0.10;

  // Same comparison restricted to the uniform columns, for diagnosis.
  std::vector<std::string> uniform_names = {"u0", "u1", "u2", "u3"};
  SweepSpec u_ir = Grid({Method::kIrDp}, {100}, {10.0}, 64);
  u_ir.attribute_subsets = {uniform_names};
  SweepSpec u_only = Grid({Method::kIrOnly}, {100}, {10.0}, 65);
  u_only.attribute_subsets = {uniform_names};
  const double u_a = run_sweep(u_ir, data).cells[0].re_mean;
  const double u_b = run_sweep(u_only, data).cells[0].re_mean;

  const double elapsed = Seconds(start);
  Outcome o;
  o.pass = first && second && elapsed < 300.0;
  o.detail = Fmt("ir-dp < plain in %zu/%zu (k,eps) cells (closest: %s); eps=10 ir-dp/ir-only:%s "
                 "[%s]; uniform columns only k=100 %+.1f%%; %.1f s",
                 below, ir.cells.size(), worst.c_str(), large_k.c_str(),
                 second ? "within 10%" : "outside 10%", 100 * (u_a - u_b) / u_b, elapsed);
  return o;
}

// 7. Variance deltas, ir-dp vs mv-dp.
Outcome VarianceDirection(const Dataset& data) {
  const std::vector<std::size_t> ks = {25, 50, 100};
  const std::vector<double> eps = {1.0, 10.0};
  const SweepReport ir = run_sweep(Grid({Method::kIrDp}, ks, eps, 71), data);
  const SweepReport mv = run_sweep(Grid({Method::kMvDp}, ks, eps, 72), data);
  std::size_t cells = 0;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < ir.cells.size(); ++i) {
    for (std::size_t a = 0; a < data.num_attributes(); ++a) {
      const auto& x = ir.cells[i].variance_delta_mean[a];
      const auto& y = mv.cells[i].variance_delta_mean[a];
      if (!x || !y) continue;
      ++cells;
      ok += *x <= *y;
    }
  }
  const double share = cells ? static_cast<double>(ok) / cells : 0.0;
  Outcome o;
  o.pass = cells == ks.size() * eps.size() * data.num_attributes() && share >= 0.90;
  o.detail = Fmt("ir-dp <= mv-dp in %zu/%zu attribute cells (%.1f%%, 10 runs each)", ok, cells,
                 100 * share);
  return o;
}

// 8. Sampler frequencies against the exact distribution.
Outcome ExponentialExactness() {
  struct Case {
    Taxonomy t;
    std::vector<std::string> cluster;
    double eps;
  };
  std::vector<Case> cases;
  cases.push_back({Build("root", {{"root", "x"}, {"root", "y"}, {"x", "a"}, {"y", "b"}}),
                   {"a", "a", "b"}, 1.0});
  cases.push_back({FiveNode(), {"p1", "p2", "p2", "q"}, 2.0});
  cases.push_back({Build("Any", {{"Any", "Professional"}, {"Any", "Manual"},
                                 {"Professional", "Engineer"}, {"Professional", "Teacher"},
                                 {"Professional", "Lawyer"}, {"Manual", "Farmer"},
                                 {"Manual", "Driver"}}),
                   {"Engineer", "Teacher", "Teacher", "Farmer"}, 1.5});
  constexpr int kDraws = 100000;
  constexpr int kLimitDraws = 10000;
  Rng rng(808);
  std::size_t outside = 0;
  std::size_t checked = 0;
  double worst_z = 0.0;
  double min_limit = 1.0;
  for (const Case& c : cases) {
    std::vector<NodeId> cluster;
    for (const auto& label : c.cluster) cluster.push_back(c.t.id_of(label));
    const auto exact = oracle::exact_expmech_distribution(c.t, cluster, c.eps, 1.0);
    std::map<std::string, int> freq;
    for (int i = 0; i < kDraws; ++i) {
      ++freq[c.t.label(exponential_mechanism_centroid(c.t, cluster, c.eps, 1.0, rng))];
    }
    for (const auto& [label, p] : exact) {
      const double sigma = std::sqrt(p * (1 - p) / kDraws);
      const double z = std::fabs(freq[label] / static_cast<double>(kDraws) - p) / sigma;
      worst_z = std::max(worst_z, z);
      outside += z > 3.0;
      ++checked;
    }
    const NodeId best = marginality_centroid(c.t, cluster);
    int hits = 0;
    for (int i = 0; i < kLimitDraws; ++i) {
      hits += exponential_mechanism_centroid(c.t, cluster, 1e4, 1.0, rng) == best;
    }
    min_limit = std::min(min_limit, hits / static_cast<double>(kLimitDraws));
  }
  Outcome o;
  o.pass = outside == 0 && min_limit > 0.999;
  o.detail = Fmt("%zu candidate frequencies over 3 taxonomies, %zu outside 3 sigma (max %.2f "
                 "sigma); eps=1e4 centroid frequency >= %.4f",
                 checked, outside, worst_z, min_limit);
  return o;
}

// 9. Metric identities.
Outcome MetricIdentities() {
  const std::vector<double> p = {1, 0};
  const std::vector<double> q = {0.5, 0.5};
  const std::vector<double> r = {0, 1};
  const double same = jensen_shannon(p, p);
  const double disjoint = jensen_shannon(p, r);
  const double hand = jensen_shannon(p, q);

  Rng rng(909);
  double asym = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(50);
    std::vector<double> b(50);
    double sa = 0;
    double sb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.Uniform() < 0.3 ? 0.0 : rng.Uniform();
      b[i] = rng.Uniform();
      sa += a[i];
      sb += b[i];
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] /= sa;
      b[i] /= sb;
    }
    asym = std::max(asym, std::fabs(jensen_shannon(a, b) - jensen_shannon(b, a)));
  }
  const Dataset data = PaperLike(9);
  const double re = relative_error(data, data).dataset;
  const double js_identity = jsd(data, data).dataset;

  Outcome o;
  o.pass = same == 0.0 && disjoint == 1.0 && asym <= 1e-12 && re == 0.0 && js_identity == 0.0 &&
           std::fabs(hand - 0.31128) <= 1e-5;
  o.detail = Fmt("JSD(P,P)=%g, disjoint=%g, max asymmetry %.1e, identity RE=%g, "
                 "JSD((1,0),(1/2,1/2))=%.6f",
                 same, disjoint, asym, re, hand);
  return o;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// 10. Byte-identical sweep reruns through the file interface.
Outcome SweepDeterminism(const Dataset& data) {
  const fs::path dir = fs::temp_directory_path() / "dpmicro_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_dataset(data, dir / "data.csv");
  {
    std::ofstream schema(dir / "data.schema");
    for (const auto& attr : data.schema().attributes()) {
      schema << '[' << attr.name << "]\nkind = numeric\nlower = " << format_real(attr.lower)
             << "\nupper = " << format_real(attr.upper) << "\n\n";
    }
  }
  SweepSpec spec = Grid({Method::kIrDp, Method::kPlainLaplace, Method::kMvDp}, {2, 10, 50},
                        {0.1, 1.0, 10.0}, 2026);
  spec.runs = 3;
  spec.attribute_subsets = {{"u0"}, {"ln0", "u0"}, {}};
  for (const auto& attr : data.schema().attributes()) {
    spec.attribute_subsets.back().push_back(attr.name);
  }
  spec.data = dir / "data.csv";
  spec.schema = dir / "data.schema";
  spec.output = dir / "first.csv";
  run_sweep(spec);
  spec.output = dir / "second.csv";
  spec.jobs = 2;
  run_sweep(spec);
  const std::string a = Slurp(dir / "first.csv");
  const std::string b = Slurp(dir / "second.csv");
  const bool same_sidecar = Slurp(dir / "first.runs.json") == Slurp(dir / "second.runs.json");
  Outcome o;
  o.pass = !a.empty() && a == b && same_sidecar;
  o.detail = Fmt("%zu-byte CSV %s, sidecar %s (second run with 2 worker threads)", a.size(),
                 a == b ? "identical" : "DIFFERS", same_sidecar ? "identical" : "DIFFERS");
  return o;
}

}  // namespace
}  // namespace dpmicro

int main() {
  using namespace dpmicro;
  const Dataset paper_like = PaperLike(1080);
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "sensitivity bound", SensitivityBound},
      {2, "shared-noise structure", SharedNoise},
      {3, "noise calibration", NoiseCalibration},
      {4, "k=1 equivalence", KOneEquivalence},
      {5, "crossover law", Crossover},
      {6, "RE trends", [&] { return Trends(paper_like); }},
      {7, "variance-delta direction", [&] { return VarianceDirection(paper_like); }},
      {8, "exponential mechanism exactness", ExponentialExactness},
      {9, "metric identities", MetricIdentities},
      {10, "sweep determinism", [&] { return SweepDeterminism(paper_like); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
