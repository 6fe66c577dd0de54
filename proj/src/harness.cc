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

#include "dpmicro/harness.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "dpmicro/error.h"
#include "dpmicro/random.h"
#include "dpmicro/schema.h"

namespace dpmicro {

namespace {

std::vector<std::string> AllNames(const Schema& schema) {
  std::vector<std::string> names;
  for (const auto& attr : schema.attributes()) names.push_back(attr.name);
  return names;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void CheckWritten(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

nlohmann::json OptionalMap(const std::vector<std::string>& names,
                           const std::vector<std::optional<double>>& values) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t a = 0; a < names.size(); ++a) {
    if (a < values.size() && values[a]) {
      out[names[a]] = *values[a];
    } else {
      out[names[a]] = nullptr;
    }
  }
  return out;
}

nlohmann::json RealMap(const std::vector<std::string>& names,
                       const std::vector<double>& values) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t a = 0; a < names.size(); ++a) out[names[a]] = values[a];
  return out;
}

SweepCell RunCell(const SweepSpec& spec, const Dataset& data, Method method,
                  std::size_t k, double epsilon, const std::vector<std::string>& subset) {
  SweepCell cell;
  cell.method = method;
  cell.k = k;
  cell.epsilon = epsilon;
  cell.attributes = subset;
  try {
    const Dataset sub = data.Select(std::span<const std::string>(subset));
    for (std::size_t run = 0; run < spec.runs; ++run) {
      MechanismConfig config;
      config.method = method;
      config.k = k;
      config.epsilon = epsilon;
      config.seed = cell_seed(spec.master_seed, method, k, epsilon, subset, run);
      config.clamp = spec.clamp;
      const Release rel = release(sub, config);
      cell.runs.push_back({run, config.seed, make_report(sub, rel, config, spec.metrics)});
    }
  } catch (const Error& e) {
    cell.ok = false;
    cell.error = e.what();
    cell.runs.clear();
    cell.re_mean = std::numeric_limits<double>::quiet_NaN();
    cell.jsd_mean = std::numeric_limits<double>::quiet_NaN();
    cell.variance_delta_mean.assign(subset.size(), std::nullopt);
    return cell;
  }

  cell.ok = true;
  const double runs = static_cast<double>(cell.runs.size());
  double re = 0.0;
  double js = 0.0;
  std::vector<double> var_sum(subset.size(), 0.0);
  std::vector<std::size_t> var_count(subset.size(), 0);
  for (const RunRecord& r : cell.runs) {
    re += r.report.re_dataset;
    js += r.report.jsd_dataset;
    for (std::size_t a = 0; a < subset.size(); ++a) {
      if (const auto& d = r.report.variance_delta_per_attribute[a]) {
        var_sum[a] += *d;
        ++var_count[a];
      }
    }
  }
  cell.re_mean = re / runs;
  cell.jsd_mean = js / runs;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    if (var_count[a] > 0) {
      cell.variance_delta_mean.emplace_back(var_sum[a] / static_cast<double>(var_count[a]));
    } else {
      cell.variance_delta_mean.emplace_back();
    }
  }
  return cell;
}

}  // namespace

ReleaseResult run_release(const Dataset& data, const MechanismConfig& config,
                          const std::vector<std::string>& attrs,
                          const MetricConfig& metrics) {
  const Dataset selected =
      attrs.empty() ? data : data.Select(std::span<const std::string>(attrs));
  Release rel = release(selected, config);
  UtilityReport report = make_report(selected, rel, config, metrics);
  return {std::move(rel), std::move(report)};
}

UtilityReport run_release(const ReleaseJob& job) {
  const Schema schema = LoadSchema(job.schema);
  const Dataset data = load_dataset(job.data, schema);
  const ReleaseResult result = run_release(data, job.config, job.attrs);
  write_dataset(result.release.data, job.out);
  const auto path = report_path(job.out);
  std::ofstream out = OpenForWrite(path);
  out << to_json(result.report).dump(2) << '\n';
  CheckWritten(out, path);
  return result.report;
}

std::filesystem::path report_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  return p.replace_extension(".report.json");
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  return p.replace_extension(".runs.json");
}

void validate_sweep(const SweepSpec& spec, const Schema& schema) {
  if (spec.methods.empty()) throw InvalidArgument("sweep: no methods given");
  if (spec.k_values.empty()) throw InvalidArgument("sweep: empty k list");
  if (spec.epsilon_values.empty()) throw InvalidArgument("sweep: empty epsilon list");
  if (spec.runs < 1) throw InvalidArgument("sweep: runs must be >= 1");
  if (spec.jobs < 1) throw InvalidArgument("sweep: jobs must be >= 1");
  for (std::size_t k : spec.k_values) {
    if (k < 1) throw InvalidArgument("sweep: k must be >= 1");
  }
  for (double e : spec.epsilon_values) {
    if (!std::isfinite(e) || e <= 0) {
      throw InvalidArgument("sweep: epsilon must be finite and positive, got " +
                            format_real(e));
    }
  }
  for (const auto& subset : spec.attribute_subsets) {
    if (subset.empty()) throw InvalidArgument("sweep: empty attribute subset");
    std::set<std::string> seen;
    for (const auto& name : subset) {
      if (!schema.find(name)) throw InvalidArgument("sweep: unknown attribute '" + name + "'");
      if (!seen.insert(name).second) {
        throw InvalidArgument("sweep: attribute '" + name + "' repeated in a subset");
      }
    }
  }
}

std::uint64_t cell_seed(std::uint64_t master_seed, Method method, std::size_t k,
                        double epsilon, const std::vector<std::string>& subset,
                        std::size_t run) {
  std::string key = std::to_string(master_seed);
  key += '|';
  key += to_string(method);
  key += '|' + std::to_string(k) + '|' + format_real(epsilon) + '|';
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i > 0) key += '\x1f';
    key += subset[i];
  }
  key += '|' + std::to_string(run);
  return mix64(stable_hash(key));
}

SweepReport run_sweep(const SweepSpec& spec, const Dataset& data) {
  validate_sweep(spec, data.schema());
  std::vector<std::vector<std::string>> subsets = spec.attribute_subsets;
  if (subsets.empty()) subsets.push_back(AllNames(data.schema()));

  struct Task {
    Method method;
    std::size_t k;
    double epsilon;
    const std::vector<std::string>* subset;
  };
  std::vector<Task> tasks;
  for (Method method : spec.methods) {
    for (std::size_t k : spec.k_values) {
      for (double e : spec.epsilon_values) {
        for (const auto& subset : subsets) tasks.push_back({method, k, e, &subset});
      }
    }
  }

  SweepReport report;
  report.master_seed = spec.master_seed;
  report.runs = spec.runs;
  report.cells.resize(tasks.size());

  auto run_task = [&](std::size_t i) {
    const Task& t = tasks[i];
    report.cells[i] = RunCell(spec, data, t.method, t.k, t.epsilon, *t.subset);
  };

  const std::size_t workers = std::min(spec.jobs, tasks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    return report;
  }

  // Each cell lands in its own slot, so the result order never depends on
  // scheduling.
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        try {
          run_task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return report;
}

SweepReport run_sweep(const SweepSpec& spec) {
  const Schema schema = LoadSchema(spec.schema);
  validate_sweep(spec, schema);
  const Dataset data = load_dataset(spec.data, schema);
  SweepReport report = run_sweep(spec, data);

  std::ofstream csv = OpenForWrite(spec.output);
  write_sweep_csv(report, csv);
  CheckWritten(csv, spec.output);

  const auto side = sidecar_path(spec.output);
  std::ofstream json = OpenForWrite(side);
  json << sweep_sidecar(report).dump(2) << '\n';
  CheckWritten(json, side);
  return report;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << kSweepCsvHeader << '\n';
  for (const SweepCell& cell : report.cells) {
    out << to_string(cell.method) << ',' << cell.k << ',' << format_real(cell.epsilon)
        << ',' << cell.attributes.size() << ',' << format_real(cell.re_mean) << ','
        << format_real(cell.jsd_mean) << ',' << cell.runs.size() << '\n';
  }
}

nlohmann::json sweep_sidecar(const SweepReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const SweepCell& cell : report.cells) {
    nlohmann::json c;
    c["method"] = std::string(to_string(cell.method));
    c["k"] = cell.k;
    c["epsilon"] = cell.epsilon;
    c["m"] = cell.attributes.size();
    c["attributes"] = cell.attributes;
    c["status"] = cell.ok ? "ok" : "failed";
    if (!cell.ok) c["error"] = cell.error;
    c["re_mean"] = cell.ok ? nlohmann::json(cell.re_mean) : nlohmann::json(nullptr);
    c["jsd_mean"] = cell.ok ? nlohmann::json(cell.jsd_mean) : nlohmann::json(nullptr);
    c["variance_delta_mean"] = OptionalMap(cell.attributes, cell.variance_delta_mean);
    nlohmann::json runs = nlohmann::json::array();
    for (const RunRecord& r : cell.runs) {
      nlohmann::json j;
      j["run"] = r.run;
      j["seed"] = r.seed;
      j["re"] = r.report.re_dataset;
      j["jsd"] = r.report.jsd_dataset;
      j["re_per_attribute"] = RealMap(cell.attributes, r.report.re_per_attribute);
      j["jsd_per_attribute"] = RealMap(cell.attributes, r.report.jsd_per_attribute);
      j["variance_delta"] =
          OptionalMap(cell.attributes, r.report.variance_delta_per_attribute);
      runs.push_back(std::move(j));
    }
    c["runs"] = std::move(runs);
    cells.push_back(std::move(c));
  }
  nlohmann::json out;
  out["master_seed"] = report.master_seed;
  out["runs_per_cell"] = report.runs;
  out["cells"] = std::move(cells);
  return out;
}

}  // namespace dpmicro
