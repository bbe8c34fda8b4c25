// Copyright 2026 The Noisy Gates Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noisy_gates/report.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#ifndef NOISY_GATES_REVISION
#define NOISY_GATES_REVISION "unknown"
#endif

namespace noisy_gates {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view source_revision() { return NOISY_GATES_REVISION; }

namespace {

std::string bit_label(std::size_t x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q) {
    if ((x >> (n - 1 - q)) & 1U) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

class Csv {
 public:
  explicit Csv(const fs::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << std::setprecision(std::numeric_limits<double>::max_digits10);
  }
  std::ostream& os() { return out_; }
  fs::path close() {
    out_.close();
    if (!out_) throw std::runtime_error("error writing " + path_.string());
    return path_;
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

void prefix_header(std::ostream& os) { os << "gates,time_s"; }

void prefix_row(std::ostream& os, const ExperimentPlan& plan, std::size_t i) {
  os << plan.gate_counts[i] << ',' << plan.times_s[i];
}

fs::path write_dist(const fs::path& path, const ExperimentPlan& plan, const DistSeries& d) {
  Csv csv(path);
  const int n = plan.scheduled.n_qubits;
  prefix_header(csv.os());
  for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) csv.os() << ",p_" << bit_label(x, n);
  csv.os() << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    prefix_row(csv.os(), plan, i);
    for (double p : d[i]) csv.os() << ',' << p;
    csv.os() << '\n';
  }
  return csv.close();
}

fs::path write_metadata(const fs::path& dir, std::string_view command, const ExperimentConfig& config,
                        const std::vector<fs::path>& files, const json& extra) {
  json meta;
  meta["command"] = std::string(command);
  meta["config"] = json::parse(config_json(config));
  meta["config_hash"] = config_hash(config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : calibration_to_json(config.device)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  meta["params_hash"] = hex.str();
  meta["seed"] = config.seed;
  meta["seed_derivation"] =
      "noisy gates run r: shot i uses stream (mix(seed, r + 1), i); channel sampling run r uses "
      "stream (mix(seed, 0xc4a22e1), r)";
  meta["revision"] = std::string(source_revision());
  meta["units"] = {{"time_s", "seconds"}, {"gates", "gate repetitions (layers for custom circuits)"},
                   {"p_*", "probability of the bitstring, qubit 0 leftmost"}};
  std::vector<std::string> names;
  for (const auto& f : files) names.push_back(f.filename().string());
  meta["files"] = names;
  for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
  const fs::path path = dir / "metadata.json";
  std::ofstream out(path, std::ios::binary);
  out << meta.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return path;
}

}  // namespace

fs::path output_dir(const fs::path& root, std::string_view command, const ExperimentConfig& config) {
  return root / (std::string(command) + "-" + config.experiment + "-" + config_hash(config));
}

OutputFiles write_simulate(const SimulateResult& r, const ExperimentConfig& config, const fs::path& root) {
  OutputFiles out;
  out.dir = output_dir(root, "simulate", config);
  fs::create_directories(out.dir);
  const ExperimentPlan& plan = r.plan;
  if (r.lindblad) out.files.push_back(write_dist(out.dir / "lindblad.csv", plan, *r.lindblad));
  if (r.channel) out.files.push_back(write_dist(out.dir / "channel.csv", plan, *r.channel));
  if (r.noisy_gates) {
    const auto& cps = r.noisy_gates->checkpoints;
    DistSeries d;
    for (const auto& cp : cps) d.push_back(cp.distribution(config.estimator));
    out.files.push_back(write_dist(out.dir / "noisy_gates.csv", plan, d));

    Csv diag(out.dir / "noisy_gates_diagonal.csv");
    const int n = plan.scheduled.n_qubits;
    prefix_header(diag.os());
    for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
      diag.os() << ",rho_" << bit_label(x, n) << ",stderr_" << bit_label(x, n);
    }
    diag.os() << ",weight_mean,weight_stderr\n";
    for (std::size_t i = 0; i < cps.size(); ++i) {
      prefix_row(diag.os(), plan, i);
      for (std::size_t x = 0; x < cps[i].diag_mean.size(); ++x) {
        diag.os() << ',' << cps[i].diag_mean[x] << ',' << cps[i].diag_stderr[x];
      }
      diag.os() << ',' << cps[i].weight_mean << ',' << cps[i].weight_stderr << '\n';
    }
    out.files.push_back(diag.close());

    if (!cps.empty() && cps.front().rho) {
      Csv rho(out.dir / "noisy_gates_rho.csv");
      prefix_header(rho.os());
      const Eigen::Index dim = cps.front().rho->rows();
      for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = 0; b < dim; ++b) {
          const std::string lab = bit_label(static_cast<std::size_t>(a), n) + "_" +
                                  bit_label(static_cast<std::size_t>(b), n);
          rho.os() << ",re_" << lab << ",im_" << lab;
        }
      }
      rho.os() << '\n';
      for (std::size_t i = 0; i < cps.size(); ++i) {
        prefix_row(rho.os(), plan, i);
        const ComplexMatrix& m = *cps[i].rho;
        for (Eigen::Index a = 0; a < dim; ++a) {
          for (Eigen::Index b = 0; b < dim; ++b) rho.os() << ',' << m(a, b).real() << ',' << m(a, b).imag();
        }
        rho.os() << '\n';
      }
      out.files.push_back(rho.close());
    }
  }
  json extra;
  extra["checkpoints"] = plan.gate_counts;
  out.files.push_back(write_metadata(out.dir, "simulate", config, out.files, extra));
  return out;
}

OutputFiles write_compare(const CompareResult& r, const ExperimentConfig& config, const fs::path& root) {
  OutputFiles out;
  out.dir = output_dir(root, "compare", config);
  fs::create_directories(out.dir);
  const ExperimentPlan& plan = r.plan;
  out.files.push_back(write_dist(out.dir / "lindblad.csv", plan, r.lindblad));

  auto write_runs = [&](const char* name, const std::vector<std::vector<double>>& runs) {
    Csv csv(out.dir / name);
    prefix_header(csv.os());
    for (std::size_t k = 0; k < runs.size(); ++k) csv.os() << ",hellinger_run" << k;
    csv.os() << '\n';
    for (std::size_t i = 0; i < plan.gate_counts.size(); ++i) {
      prefix_row(csv.os(), plan, i);
      for (const auto& run : runs) csv.os() << ',' << run[i];
      csv.os() << '\n';
    }
    out.files.push_back(csv.close());
  };
  if (!r.h_ng.empty()) write_runs("hellinger_noisy_gates.csv", r.h_ng);
  if (!r.h_ch.empty()) write_runs("hellinger_channel.csv", r.h_ch);

  Csv sum(out.dir / "summary.csv");
  prefix_header(sum.os());
  sum.os() << ",lindblad_p_" << bit_label(plan.observable, plan.scheduled.n_qubits);
  if (!r.h_ng.empty()) sum.os() << ",mean_hellinger_noisy_gates,std_hellinger_noisy_gates";
  if (!r.h_ch.empty()) sum.os() << ",mean_hellinger_channel,std_hellinger_channel";
  if (!r.relative_improvement.empty()) sum.os() << ",relative_improvement,signed_improvement";
  sum.os() << '\n';
  for (std::size_t i = 0; i < plan.gate_counts.size(); ++i) {
    prefix_row(sum.os(), plan, i);
    sum.os() << ',' << r.lindblad[i][plan.observable];
    if (!r.h_ng.empty()) sum.os() << ',' << r.ng.mean[i] << ',' << r.ng.std[i];
    if (!r.h_ch.empty()) sum.os() << ',' << r.ch.mean[i] << ',' << r.ch.std[i];
    if (!r.relative_improvement.empty()) {
      sum.os() << ',' << r.relative_improvement[i] << ',' << r.signed_improvement[i];
    }
    sum.os() << '\n';
  }
  out.files.push_back(sum.close());

  json extra;
  extra["checkpoints"] = plan.gate_counts;
  if (!r.relative_improvement.empty()) extra["fraction_noisy_gates_better"] = r.fraction_ng_better;
  out.files.push_back(write_metadata(out.dir, "compare", config, out.files, extra));
  return out;
}

}  // namespace noisy_gates
