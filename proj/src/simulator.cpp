#include "ssk/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <Eigen/Eigenvalues>

#include "ssk/errors.hpp"
#include "ssk/rs_solver.hpp"

namespace ssk {

WorkingModel::WorkingModel(const DisorderSample& disorder, double beta, double h)
    : disorder_(&disorder), n_(disorder.n), beta_(beta), h_(h) {
  const double n = n_;
  quad_ = Eigen::VectorXd::Zero(n_);
  Eigen::VectorXd linear_orig = Eigen::VectorXd::Constant(n_, h);
  for (const auto& t : disorder.tensors) {
    if (t.weight == 0.0 || beta == 0.0) continue;
    const double scale = beta * std::sqrt(t.weight) * std::pow(n, 0.5 * (1 - t.degree));
    if (t.degree == 1) {
      linear_orig += scale * Eigen::Map<const Eigen::VectorXd>(t.g.data(), n_);
    } else if (t.degree == 2) {
      const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> g(
          t.g.data(), n_, n_);
      const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
      basis_ = eig.eigenvectors();
      quad_ = scale * eig.eigenvalues();
      identity_basis_ = false;
    } else {
      higher_.push_back({&t, scale});
    }
  }
  if (identity_basis_) {
    lin_ = linear_orig;
    mag_ = Eigen::VectorXd::Ones(n_);
  } else {
    lin_ = basis_.transpose() * linear_orig;
    mag_ = basis_.transpose() * Eigen::VectorXd::Ones(n_);
  }
}

Eigen::VectorXd WorkingModel::to_original(const Eigen::VectorXd& y) const {
  return identity_basis_ ? y : Eigen::VectorXd(basis_ * y);
}

double WorkingModel::energy(const Eigen::VectorXd& y) const {
  double e = quad_.dot(y.cwiseAbs2()) + lin_.dot(y);
  if (!higher_.empty()) {
    const Eigen::VectorXd sigma = to_original(y);
    const std::span<const double> s(sigma.data(), sigma.size());
    for (const auto& term : higher_) e += term.scale * contract(*term.tensor, s);
  }
  return e;
}

double WorkingModel::reference_energy(const Eigen::VectorXd& y) const {
  const Eigen::VectorXd sigma = to_original(y);
  return ssk::energy(*disorder_, std::span<const double>(sigma.data(), sigma.size()), beta_, h_);
}

ChainState init_chain(const WorkingModel& model, std::uint64_t stream_key, double step) {
  ChainState s;
  s.stream = rng::CounterStream(stream_key);
  s.y.resize(model.n());
  for (int i = 0; i < model.n(); ++i) s.y[i] = s.stream.normal();
  s.y *= std::sqrt(static_cast<double>(model.n())) / s.y.norm();
  s.energy = model.energy(s.y);
  s.step = step;
  return s;
}

namespace {

// per-thread proposal buffers
struct Scratch {
  Eigen::VectorXd direction;
  Eigen::VectorXd proposal;
};

void step_with(const WorkingModel& model, ChainState& state, Scratch& scratch) {
  const int n = model.n();
  const double root_n = std::sqrt(static_cast<double>(n));
  auto& u = scratch.direction;
  auto& next = scratch.proposal;
  u.resize(n);
  for (int i = 0; i < n; ++i) u[i] = state.stream.normal();
  u -= (u.dot(state.y) / n) * state.y;
  u *= root_n / u.norm();
  const double theta = state.step * state.stream.normal();
  next = std::cos(theta) * state.y + std::sin(theta) * u;
  const double proposed_energy = model.energy(next);
  const double log_u = std::log(state.stream.uniform());
  ++state.proposed;
  if (log_u < proposed_energy - state.energy) {
    state.y.swap(next);
    state.energy = proposed_energy;
    ++state.accepted;
  }
  ++state.steps;
  if (state.steps % kRenormalizeEvery == 0) {
    const double reference = model.reference_energy(state.y);
    state.max_energy_drift = std::max(state.max_energy_drift, std::abs(state.energy - reference));
    state.y *= root_n / state.y.norm();
    state.energy = model.energy(state.y);
  }
}

}  // namespace

void mcmc_step(const WorkingModel& model, ChainState& state) {
  thread_local Scratch scratch;
  step_with(model, state, scratch);
}

std::string_view observable_name(int index) {
  static constexpr std::array<std::string_view, kObservableCount> names = {
      "N_f1", "N_f2", "N_f3", "N_f4", "N_f5", "N_f6", "N_f7",
      "R12", "R1", "xi_R12", "tail_R12"};
  return names.at(index);
}

void validate(const ExperimentConfig& c) {
  if (c.n < 4) throw ConfigError("N must be at least 4");
  if (c.n_chains < 4) throw ConfigError("n_chains must be at least 4 (f3 uses four replicas)");
  if (c.n_disorder < 1) throw ConfigError("n_disorder must be positive");
  if (c.sweeps < 1 || c.burnin < 0) throw ConfigError("need sweeps >= 1 and burnin >= 0");
  if (c.measure_every < 1) throw ConfigError("measure_every must be positive");
  if (c.batches < 2) throw ConfigError("batches must be at least 2");
  if (c.sweeps / c.measure_every < c.batches)
    throw ConfigError("too few measurements for the requested number of batches");
  if (!(c.beta >= 0.0) || !std::isfinite(c.h)) throw ConfigError("need beta >= 0 and finite h");
  if (c.dump_every < 0) throw ConfigError("dump_every must be nonnegative");
}

namespace {

using ObservableRow = std::array<double, kObservableCount>;

// Replica observables averaged over all injective assignments of replica
// labels to chains, so no chain plays two replica roles in one term.
ObservableRow measure(const std::vector<ChainState>& chains, const WorkingModel& model,
                      const MixturePolynomial& mixture, double q, double r, double tail_threshold) {
  const int c = static_cast<int>(chains.size());
  const double n = model.n();
  std::vector<double> mag(c);
  std::vector<double> ov(c * c, 0.0);
  for (int a = 0; a < c; ++a) {
    mag[a] = model.magnetization(chains[a].y) - r;
    for (int b = a + 1; b < c; ++b) ov[a * c + b] = ov[b * c + a] = chains[a].y.dot(chains[b].y) / n;
  }
  ObservableRow row{};
  double pairs = 0, triples = 0, quads = 0;
  double xi_sum = 0.0, tail = 0.0, raw_overlap = 0.0;
  for (int a = 0; a < c; ++a) {
    row[kF6] += mag[a] * mag[a];
    row[kMagnetization] += mag[a] + r;
    for (int b = 0; b < c; ++b) {
      if (b == a) continue;
      const double rab = ov[a * c + b];
      const double dab = rab - q;
      pairs += 1;
      raw_overlap += rab;
      xi_sum += mixture.eval(std::clamp(rab, -1.0, 1.0), 0);
      tail += std::abs(dab) >= tail_threshold ? 1.0 : 0.0;
      row[kF1] += dab * dab;
      row[kF4] += dab * mag[a];
      row[kF7] += mag[a] * mag[b];
      for (int d = 0; d < c; ++d) {
        if (d == a || d == b) continue;
        triples += 1;
        row[kF2] += dab * (ov[a * c + d] - q);
        row[kF5] += dab * mag[d];
        for (int e = 0; e < c; ++e) {
          if (e == a || e == b || e == d) continue;
          quads += 1;
          row[kF3] += dab * (ov[d * c + e] - q);
        }
      }
    }
  }
  row[kF1] *= n / pairs;
  row[kF2] *= n / triples;
  row[kF3] *= n / quads;
  row[kF4] *= n / pairs;
  row[kF5] *= n / triples;
  row[kF6] *= n / c;
  row[kF7] *= n / pairs;
  row[kOverlap] = raw_overlap / pairs;
  row[kMagnetization] /= c;
  row[kXiOverlap] = xi_sum / pairs;
  row[kTail] = tail / pairs;
  return row;
}

// Split-chain potential scale reduction over 2 * chains half-sequences.
double split_rhat(const std::vector<std::vector<double>>& traces) {
  std::vector<double> means, vars;
  std::size_t len = 0;
  for (const auto& t : traces) {
    const std::size_t half = t.size() / 2;
    if (half < 2) return 1.0;
    len = half;
    for (int part = 0; part < 2; ++part) {
      const auto begin = t.begin() + part * half;
      double m = 0.0;
      for (std::size_t i = 0; i < half; ++i) m += begin[i];
      m /= half;
      double v = 0.0;
      for (std::size_t i = 0; i < half; ++i) v += (begin[i] - m) * (begin[i] - m);
      means.push_back(m);
      vars.push_back(v / (half - 1));
    }
  }
  const double k = means.size();
  double grand = 0.0, within = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    grand += means[i];
    within += vars[i];
  }
  grand /= k;
  within /= k;
  double between = 0.0;
  for (double m : means) between += (m - grand) * (m - grand);
  between = between * len / (k - 1);
  if (within <= 0.0) return 1.0;
  const double pooled = (len - 1.0) / len * within + between / len;
  return std::sqrt(pooled / within);
}

}  // namespace

DisorderEstimate simulate_disorder(const ExperimentConfig& config, int d, double q, double r) {
  const std::uint64_t disorder_seed = rng::derive_key(config.seed, 0xD15, d);
  const DisorderSample disorder =
      sample_disorder(config.mixture, config.n, disorder_seed, Execution::serial);
  const WorkingModel model(disorder, config.beta, config.h);
  const double n = config.n;
  const double tail_threshold = 2.0 * std::pow(std::log(n) / n, 0.25);

  std::vector<ChainState> chains;
  for (int c = 0; c < config.n_chains; ++c)
    chains.push_back(init_chain(model, rng::derive_key(config.seed, 0xC4A1, d, c)));

  Scratch scratch;
  // burn-in with step-size adaptation towards 50% acceptance
  constexpr long kAdaptWindow = 100;
  for (auto& chain : chains) {
    std::uint64_t window_start = chain.accepted;
    for (long t = 1; t <= config.burnin; ++t) {
      step_with(model, chain, scratch);
      if (t % kAdaptWindow == 0) {
        const double rate = static_cast<double>(chain.accepted - window_start) / kAdaptWindow;
        chain.step = std::clamp(chain.step * std::exp(2.0 * (rate - 0.5)), 1e-4, kMaxStep);
        window_start = chain.accepted;
      }
    }
    chain.accepted = 0;
    chain.proposed = 0;
  }

  const long measurements = config.sweeps / config.measure_every;
  std::vector<ObservableRow> series;
  series.reserve(measurements);
  std::vector<std::vector<double>> mag_traces(config.n_chains);
  DisorderEstimate est;
  est.index = d;
  for (long t = 1; t <= config.sweeps; ++t) {
    for (auto& chain : chains) step_with(model, chain, scratch);
    if (t % config.measure_every == 0) {
      series.push_back(measure(chains, model, config.mixture, q, r, tail_threshold));
      for (int c = 0; c < config.n_chains; ++c)
        mag_traces[c].push_back(model.magnetization(chains[c].y));
    }
    if (config.dump_every > 0 && t % config.dump_every == 0) {
      for (const auto& chain : chains) {
        const Eigen::VectorXd s = model.to_original(chain.y);
        est.dump.insert(est.dump.end(), s.data(), s.data() + s.size());
      }
    }
  }

  est.samples = static_cast<long>(series.size());
  const long per_batch = est.samples / config.batches;
  for (int k = 0; k < kObservableCount; ++k) {
    double mean = 0.0;
    for (const auto& row : series) mean += row[k];
    mean /= est.samples;
    double var = 0.0;
    for (const auto& row : series) var += (row[k] - mean) * (row[k] - mean);
    var /= (est.samples - 1);
    // batch means over the leading batches * per_batch samples
    std::vector<double> batch(config.batches, 0.0);
    for (int b = 0; b < config.batches; ++b) {
      for (long i = 0; i < per_batch; ++i) batch[b] += series[b * per_batch + i][k];
      batch[b] /= per_batch;
    }
    double bmean = 0.0;
    for (double x : batch) bmean += x;
    bmean /= config.batches;
    double bvar = 0.0;
    for (double x : batch) bvar += (x - bmean) * (x - bmean);
    bvar /= (config.batches - 1);
    est.mean[k] = mean;
    est.var_of_mean[k] = bvar / config.batches;
    est.n_effective[k] = est.var_of_mean[k] > 0.0 ? var / est.var_of_mean[k] : est.samples;
  }

  std::uint64_t accepted = 0, proposed = 0;
  for (const auto& chain : chains) {
    accepted += chain.accepted;
    proposed += chain.proposed;
    est.step += chain.step / config.n_chains;
    est.max_energy_drift = std::max(est.max_energy_drift, chain.max_energy_drift);
  }
  est.acceptance = proposed ? static_cast<double>(accepted) / proposed : 0.0;
  est.rhat = split_rhat(mag_traces);
  return est;
}

EstimatorSummary summarize(const std::vector<DisorderEstimate>& rows, int k) {
  EstimatorSummary s;
  s.n_disorder = static_cast<int>(rows.size());
  const double nd = s.n_disorder;
  double within = 0.0;
  for (const auto& row : rows) {
    s.mean += row.mean[k];
    within += row.var_of_mean[k];
    s.n_effective += row.n_effective[k];
  }
  s.mean /= nd;
  double across = 0.0;
  if (s.n_disorder > 1) {
    for (const auto& row : rows) across += (row.mean[k] - s.mean) * (row.mean[k] - s.mean);
    across /= (nd - 1) * nd;
  }
  s.std_error = std::sqrt(std::max(across, within / (nd * nd)));
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& config, Execution exec) {
  validate(config);
  ExperimentResult result;
  result.config = config;
  result.q = solve_q(config.mixture, config.beta, config.h);
  result.r = config.h * (1.0 - result.q);
  const double n = config.n;
  result.tail_threshold = 2.0 * std::pow(std::log(n) / n, 0.25);

  result.per_disorder.resize(config.n_disorder);
  if (exec == Execution::parallel) {
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < config.n_disorder; ++d) {
      try {
        result.per_disorder[d] = simulate_disorder(config, d, result.q, result.r);
      } catch (const std::exception& ex) {
#pragma omp critical(ssk_experiment_failure)
        failure = ex.what();
      }
    }
    if (!failure.empty()) throw NumericError(failure);
  } else {
    for (int d = 0; d < config.n_disorder; ++d)
      result.per_disorder[d] = simulate_disorder(config, d, result.q, result.r);
  }

  for (int k = 0; k < kObservableCount; ++k) result.estimates[k] = summarize(result.per_disorder, k);
  for (const auto& row : result.per_disorder) {
    result.rhat_max = std::max(result.rhat_max, row.rhat);
    result.max_energy_drift = std::max(result.max_energy_drift, row.max_energy_drift);
    result.mean_acceptance += row.acceptance / config.n_disorder;
  }
  result.converged = result.rhat_max <= 1.1;
  if (config.dump_every > 0 && !config.dump_path.empty())
    write_sample_dump(config.dump_path, config.n, result.per_disorder);
  return result;
}

namespace {

template <class T>
void put_le(std::ofstream& out, T value) {
  auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <class T>
T get_le(std::ifstream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw ConfigError("truncated sample dump");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

}  // namespace

void write_sample_dump(const std::string& path, int n, const std::vector<DisorderEstimate>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open dump file " + path);
  std::uint64_t values = 0;
  for (const auto& row : rows) values += row.dump.size();
  out.write("SSKD", 4);
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(n));
  put_le<std::uint64_t>(out, values / n);
  for (const auto& row : rows)
    for (double v : row.dump) put_le<double>(out, v);
  if (!out) throw ConfigError("failed writing dump file " + path);
}

SampleDump read_sample_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dump file " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SSKD", 4) != 0) throw ConfigError("not a sample dump: " + path);
  SampleDump dump;
  dump.version = get_le<std::uint32_t>(in);
  dump.n = get_le<std::uint32_t>(in);
  dump.count = get_le<std::uint64_t>(in);
  dump.values.resize(dump.count * dump.n);
  for (auto& v : dump.values) v = get_le<double>(in);
  return dump;
}

}  // namespace ssk
