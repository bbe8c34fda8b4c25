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

#include "noisy_gates/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace noisy_gates {

Estimator estimator_from_name(std::string_view name) {
  if (name == "weighted") return Estimator::Weighted;
  if (name == "unweighted") return Estimator::Unweighted;
  throw std::invalid_argument("unknown estimator \"" + std::string(name) + "\"");
}

std::string_view estimator_name(Estimator e) {
  return e == Estimator::Weighted ? "weighted" : "unweighted";
}

int resolved_workers(int parallel) {
  if (parallel < 0) throw std::invalid_argument("parallel must be >= 0");
  if (parallel > 0) return parallel;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

constexpr int kDenseCap = 5;
constexpr int kChunk = 64;
// Substream tags. The main trajectory stream is the shot stream itself.
constexpr std::uint64_t kSpamTag = 0x5a00000000ULL;
constexpr std::uint64_t kSampleTag = 0xb100000000ULL;

using SamplerKey = std::tuple<int, std::vector<int>, double, double, double>;

Kernel unitary_kernel(ComplexMatrix u, std::vector<int> qubits) {
  Kernel k;
  k.kind = Kernel::Kind::Unitary;
  k.unitary = std::move(u);
  k.qubits = std::move(qubits);
  return k;
}

}  // namespace

PreparedCircuit prepare(const ScheduledCircuit& circuit, const DeviceParams& params,
                        int substeps) {
  if (substeps < 0) throw std::invalid_argument("prepare: substeps must be >= 0");
  if (params.n_qubits() < circuit.n_qubits) {
    throw std::invalid_argument("prepare: calibration has fewer qubits than the circuit");
  }
  PreparedCircuit out;
  out.n_qubits = circuit.n_qubits;
  out.measured = circuit.measured;
  out.substeps = substeps;

  std::map<SamplerKey, Kernel> cache;
  for (const auto& layer : circuit.layers) {
    std::vector<Kernel> kernels;
    for (const auto& g : layer.gates) {
      if (g.kind == GateKind::RZ) {
        kernels.push_back(unitary_kernel(ideal_unitary(g), g.qubits));
        continue;
      }
      if (g.kind == GateKind::IDLE) {
        const double dt = params.duration_of(g);
        for (int q : g.qubits) {
          const QubitParams& qp = params.qubits.at(static_cast<std::size_t>(q));
          const RelaxationRates r = relaxation_rates(qp.t1, qp.t2);
          if (r.gamma1 == 0.0 && r.gamma_pd == 0.0) continue;
          Kernel k;
          k.kind = Kernel::Kind::Relaxation;
          k.qubits = {q};
          k.gamma1 = r.gamma1;
          k.gamma_pd = r.gamma_pd;
          k.dt = dt;
          kernels.push_back(std::move(k));
        }
        continue;
      }
      const double duration = params.duration_of(g);
      const SamplerKey key{static_cast<int>(g.kind), g.qubits, g.theta, g.phi, duration};
      auto it = cache.find(key);
      if (it == cache.end()) {
        const NoiseContext ctx = noise_context_for_gate(g, params);
        Kernel k;
        if (ctx.noiseless() || duration <= 0.0) {
          k = unitary_kernel(ideal_unitary(g), g.qubits);
        } else {
          auto sched = std::make_shared<DriveSchedule>(schedule(g, duration));
          k.kind = Kernel::Kind::Noisy;
          k.qubits = g.qubits;
          if (substeps > 0) {
            k.jumps = std::make_shared<SubstepJumps>(substep_jumps(*sched, ctx, substeps));
            k.schedule = sched;
          } else {
            k.sampler = std::make_shared<NoisyGateSampler>(*sched, ctx);
          }
        }
        it = cache.emplace(key, std::move(k)).first;
      }
      kernels.push_back(it->second);
    }
    out.layers.push_back(std::move(kernels));
  }

  for (int q : circuit.measured) {
    const double v = spam_strength(params.qubits.at(static_cast<std::size_t>(q)).p_readout);
    if (v == 0.0) continue;
    Kernel k;
    k.kind = Kernel::Kind::Spam;
    k.qubits = {q};
    k.spam_variance = v;
    out.spam.push_back(std::move(k));
  }
  return out;
}

namespace {

void apply_kernel(const Kernel& k, StateVector& psi, RngStream& rng, int substeps) {
  switch (k.kind) {
    case Kernel::Kind::Unitary:
      apply_gate_inplace(psi, k.unitary, k.qubits);
      return;
    case Kernel::Kind::Noisy:
      if (substeps > 0) {
        const WienerPath path =
            sample_wiener_path(static_cast<int>(k.jumps->epsilons.size()), substeps, rng);
        apply_gate_inplace(psi, noisy_gate_on_path(*k.schedule, *k.jumps, path, false), k.qubits);
      } else {
        apply_gate_inplace(psi, k.sampler->sample(rng), k.qubits);
      }
      return;
    case Kernel::Kind::Relaxation:
      apply_gate_inplace(psi, sample_relaxation_gate(k.gamma1, k.gamma_pd, k.dt, rng), k.qubits);
      return;
    case Kernel::Kind::Spam:
      apply_gate_inplace(psi, sample_spam_gate(k.spam_variance, rng), k.qubits);
      return;
  }
}

void check_finite(const StateVector& psi, std::size_t layer) {
  if (!psi.amplitudes.allFinite()) {
    throw NumericError("trajectory state became non-finite after layer " + std::to_string(layer));
  }
}

}  // namespace

void apply_layers(const PreparedCircuit& prepared, std::size_t begin, std::size_t end,
                  StateVector& psi, RngStream& rng) {
  if (end > prepared.layers.size() || begin > end) {
    throw std::out_of_range("apply_layers: layer range out of bounds");
  }
  for (std::size_t l = begin; l < end; ++l) {
    for (const auto& k : prepared.layers[l]) apply_kernel(k, psi, rng, prepared.substeps);
    check_finite(psi, l);
  }
}

void apply_spam(const PreparedCircuit& prepared, StateVector& psi, RngStream& rng) {
  for (const auto& k : prepared.spam) apply_kernel(k, psi, rng, prepared.substeps);
}

std::size_t sample_bitstring(const StateVector& psi, RngStream& rng) {
  const double total = psi.squared_norm();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NumericError("sample_bitstring: state has zero or non-finite norm");
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  const Eigen::Index dim = psi.amplitudes.size();
  for (Eigen::Index x = 0; x < dim; ++x) {
    acc += std::norm(psi.amplitudes[x]);
    if (u < acc) return static_cast<std::size_t>(x);
  }
  // Round-off at the top end: last outcome with nonzero probability.
  for (Eigen::Index x = dim - 1; x >= 0; --x) {
    if (std::norm(psi.amplitudes[x]) > 0.0) return static_cast<std::size_t>(x);
  }
  return 0;
}

TrajectoryResult run_trajectory(const PreparedCircuit& prepared, RngStream rng,
                                std::size_t initial_basis) {
  TrajectoryResult r;
  r.state = StateVector::basis(prepared.n_qubits, initial_basis);
  apply_layers(prepared, 0, prepared.layers.size(), r.state, rng);
  RngStream spam_rng = rng.substream(kSpamTag + prepared.layers.size());
  apply_spam(prepared, r.state, spam_rng);
  check_finite(r.state, prepared.layers.size());
  r.weight = r.state.squared_norm();
  if (!(r.weight > 0.0)) throw NumericError("trajectory weight is zero");
  RngStream sample_rng = rng.substream(kSampleTag + prepared.layers.size());
  r.bitstring = sample_bitstring(r.state, sample_rng);
  return r;
}

namespace {

// Running sums for one checkpoint over a chunk (or, merged, over all shots).
struct Accumulator {
  std::vector<double> diag_sum, diag_sq, counts;
  ComplexMatrix rho_sum;
  RealMatrix rho_sq;  // sum of |psi_a psi_b^*|^2 for standard errors
  double w_sum = 0.0, w_sq = 0.0;
  bool dense = false;

  void init(Eigen::Index dim, bool want_dense) {
    const auto d = static_cast<std::size_t>(dim);
    diag_sum.assign(d, 0.0);
    diag_sq.assign(d, 0.0);
    counts.assign(d, 0.0);
    dense = want_dense;
    if (dense) {
      rho_sum = ComplexMatrix::Zero(dim, dim);
      rho_sq = RealMatrix::Zero(dim, dim);
    }
  }

  void add(const StateVector& psi, std::size_t bitstring) {
    const Eigen::Index dim = psi.amplitudes.size();
    double w = 0.0;
    for (Eigen::Index x = 0; x < dim; ++x) {
      const double p = std::norm(psi.amplitudes[x]);
      diag_sum[static_cast<std::size_t>(x)] += p;
      diag_sq[static_cast<std::size_t>(x)] += p * p;
      w += p;
    }
    w_sum += w;
    w_sq += w * w;
    counts[bitstring] += 1.0;
    if (dense) {
      rho_sum.noalias() += psi.amplitudes * psi.amplitudes.adjoint();
      const RealVector mag = psi.amplitudes.cwiseAbs2();
      rho_sq.noalias() += mag * mag.transpose();
    }
  }

  void merge(const Accumulator& o) {
    for (std::size_t i = 0; i < diag_sum.size(); ++i) {
      diag_sum[i] += o.diag_sum[i];
      diag_sq[i] += o.diag_sq[i];
      counts[i] += o.counts[i];
    }
    w_sum += o.w_sum;
    w_sq += o.w_sq;
    if (dense) {
      rho_sum += o.rho_sum;
      rho_sq += o.rho_sq;
    }
  }
};

double stderr_of(double sum, double sq, int n) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1));
  return std::sqrt(var / n);
}

}  // namespace

EnsembleResult run_shots(const PreparedCircuit& prepared, const RunConfig& config,
                         std::vector<std::size_t> checkpoints) {
  if (config.shots < 1) throw std::invalid_argument("run_shots: shots must be >= 1");
  if (config.substeps != prepared.substeps) {
    throw std::invalid_argument("run_shots: circuit was prepared for a different substep count");
  }
  const std::size_t n_layers = prepared.layers.size();
  if (checkpoints.empty()) checkpoints.push_back(n_layers);
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] > n_layers || (i > 0 && checkpoints[i] <= checkpoints[i - 1])) {
      throw std::invalid_argument("run_shots: checkpoints must be strictly ascending layer counts");
    }
  }
  const Eigen::Index dim = Eigen::Index{1} << prepared.n_qubits;
  if (config.initial_basis >= static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("run_shots: initial basis index out of range");
  }
  const bool dense = prepared.n_qubits <= kDenseCap;
  const std::size_t n_cp = checkpoints.size();

  auto fresh = [&] {
    std::vector<Accumulator> acc(n_cp);
    for (auto& a : acc) a.init(dim, dense);
    return acc;
  };

  const int n_chunks = (config.shots + kChunk - 1) / kChunk;
  std::vector<std::optional<std::vector<Accumulator>>> pending(static_cast<std::size_t>(n_chunks));
  std::vector<Accumulator> total = fresh();
  int next_merge = 0;
  std::mutex mu;
  std::atomic<int> next_chunk{0};
  std::exception_ptr failure;

  auto run_chunk = [&](int c) {
    std::vector<Accumulator> acc = fresh();
    const int first = c * kChunk;
    const int last = std::min(config.shots, first + kChunk);
    for (int shot = first; shot < last; ++shot) {
      RngStream rng(config.master_seed, static_cast<std::uint64_t>(shot));
      StateVector psi = StateVector::basis(prepared.n_qubits, config.initial_basis);
      std::size_t done = 0;
      for (std::size_t i = 0; i < n_cp; ++i) {
        apply_layers(prepared, done, checkpoints[i], psi, rng);
        done = checkpoints[i];
        StateVector measured = psi;
        RngStream spam_rng = rng.substream(kSpamTag + done);
        apply_spam(prepared, measured, spam_rng);
        check_finite(measured, done);
        RngStream sample_rng = rng.substream(kSampleTag + done);
        acc[i].add(measured, sample_bitstring(measured, sample_rng));
      }
    }
    return acc;
  };

  auto worker = [&] {
    for (;;) {
      const int c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (failure) return;
      }
      try {
        auto acc = run_chunk(c);
        std::lock_guard<std::mutex> lock(mu);
        pending[static_cast<std::size_t>(c)] = std::move(acc);
        // Merge strictly in chunk order so the sums do not depend on timing.
        while (next_merge < n_chunks && pending[static_cast<std::size_t>(next_merge)]) {
          auto& part = *pending[static_cast<std::size_t>(next_merge)];
          for (std::size_t i = 0; i < n_cp; ++i) total[i].merge(part[i]);
          pending[static_cast<std::size_t>(next_merge)].reset();
          ++next_merge;
        }
      } catch (const NumericError& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) {
          failure = std::make_exception_ptr(NumericError(
              std::string(e.what()) + " (chunk " + std::to_string(c) + ", seed " +
              std::to_string(config.master_seed) + ")"));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int workers = std::min(resolved_workers(config.parallel), n_chunks);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleResult result;
  result.shots = config.shots;
  const int s = config.shots;
  for (std::size_t i = 0; i < n_cp; ++i) {
    const Accumulator& a = total[i];
    CheckpointEstimate est;
    est.layers = checkpoints[i];
    double diag_total = 0.0;
    for (double v : a.diag_sum) diag_total += v;
    for (std::size_t x = 0; x < a.diag_sum.size(); ++x) {
      est.weighted.push_back(a.diag_sum[x] / diag_total);
      est.unweighted.push_back(a.counts[x] / s);
      est.diag_mean.push_back(a.diag_sum[x] / s);
      est.diag_stderr.push_back(stderr_of(a.diag_sum[x], a.diag_sq[x], s));
    }
    if (dense) {
      est.rho = a.rho_sum / static_cast<double>(s);
      RealMatrix se = RealMatrix::Zero(dim, dim);
      if (s > 1) {
        const RealMatrix mean_sq = est.rho->cwiseAbs2();
        se = ((a.rho_sq / s - mean_sq).cwiseMax(0.0) / (s - 1)).cwiseSqrt();
      }
      est.rho_stderr = std::move(se);
    }
    est.weight_mean = a.w_sum / s;
    est.weight_stderr = stderr_of(a.w_sum, a.w_sq, s);
    result.checkpoints.push_back(std::move(est));
  }
  return result;
}

EnsembleResult run_shots(const Circuit& circuit, const DeviceParams& params,
                         const RunConfig& config, std::vector<std::size_t> checkpoints) {
  const ScheduledCircuit sched = schedule_layers(circuit, params, config.cnot_mode);
  return run_shots(prepare(sched, params, config.substeps), config, std::move(checkpoints));
}

}  // namespace noisy_gates
