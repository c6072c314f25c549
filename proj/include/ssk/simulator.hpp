#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ssk/cavity1d.hpp"
#include "ssk/disorder.hpp"
#include "ssk/mixture.hpp"
#include "ssk/rng.hpp"

namespace ssk {

// Energy model of one disorder sample in the working basis y = V^T sigma, where
// V diagonalizes the symmetrized degree-2 couplings. The orthogonal change of
// variables preserves the sphere and the uniform measure, and makes the
// degree <= 2 part of the energy O(N) per evaluation.
class WorkingModel {
 public:
  WorkingModel(const DisorderSample& disorder, double beta, double h);

  int n() const { return n_; }
  double beta() const { return beta_; }
  double h() const { return h_; }

  double energy(const Eigen::VectorXd& y) const;
  // Recomputation from the full coupling tensors in the original basis.
  double reference_energy(const Eigen::VectorXd& y) const;

  double magnetization(const Eigen::VectorXd& y) const { return mag_.dot(y) / n_; }
  Eigen::VectorXd to_original(const Eigen::VectorXd& y) const;

 private:
  const DisorderSample* disorder_;
  int n_;
  double beta_;
  double h_;
  bool identity_basis_ = true;
  Eigen::MatrixXd basis_;  // columns are eigenvectors; empty when identity
  Eigen::VectorXd quad_;   // beta sqrt(w2) N^-1/2 lambda_k
  Eigen::VectorXd lin_;    // V^T (beta sqrt(w1) g1 + h 1)
  Eigen::VectorXd mag_;    // V^T 1
  struct Higher {
    const CouplingTensor* tensor;
    double scale;  // beta sqrt(w_p) N^((1-p)/2)
  };
  std::vector<Higher> higher_;
};

struct ChainState {
  Eigen::VectorXd y;  // working-basis coordinates, |y|^2 = N
  double energy = 0.0;
  double step = 0.5;  // proposal angle scale delta
  std::uint64_t proposed = 0;
  std::uint64_t accepted = 0;
  std::uint64_t steps = 0;
  double max_energy_drift = 0.0;  // worst |energy - reference_energy| seen at a check
  rng::CounterStream stream;
};

inline constexpr int kRenormalizeEvery = 1000;
inline constexpr double kMaxStep = 3.141592653589793;

// Uniform starting point on the sphere.
ChainState init_chain(const WorkingModel& model, std::uint64_t stream_key, double step = 0.5);

// Geodesic random-walk Metropolis: a uniform tangent direction u, an angle
// theta ~ Normal(0, step^2), proposal y cos(theta) + u sin(theta), accepted
// with probability min(1, exp(E' - E)). Every kRenormalizeEvery steps the
// radius is restored and the energy is checked against the full tensors.
void mcmc_step(const WorkingModel& model, ChainState& state);

// Observables measured on the replicas, in report order.
enum Observable : int {
  kF1, kF2, kF3, kF4, kF5, kF6, kF7,
  kOverlap, kMagnetization, kXiOverlap, kTail,
  kObservableCount
};
std::string_view observable_name(int index);

struct EstimatorSummary {
  double mean = 0.0;
  double std_error = 0.0;
  double n_effective = 0.0;
  int n_disorder = 0;
};

struct ExperimentConfig {
  MixturePolynomial mixture{std::vector<MixtureTerm>{{2, 1.0}}};
  double beta = 0.2;
  double h = 0.3;
  int n = 400;
  int n_disorder = 32;
  int n_chains = 4;
  long sweeps = 100000;  // measured steps per chain, after burn-in
  long burnin = 20000;
  std::uint64_t seed = 12345;
  int measure_every = 5;
  int batches = 20;
  long dump_every = 0;  // 0 disables the thinned sample dump
  std::string dump_path;
};

// Values measured on one disorder sample.
struct DisorderEstimate {
  int index = 0;
  std::array<double, kObservableCount> mean{};
  std::array<double, kObservableCount> var_of_mean{};  // batch means
  std::array<double, kObservableCount> n_effective{};
  double acceptance = 0.0;
  double step = 0.0;
  double rhat = 1.0;  // split-chain diagnostic on the magnetization
  double max_energy_drift = 0.0;
  long samples = 0;
  std::vector<double> dump;  // thinned configurations, original basis
};

struct ExperimentResult {
  ExperimentConfig config;
  double q = 0.0;  // centering values from the fixed-point equation
  double r = 0.0;
  double tail_threshold = 0.0;  // 2 (log N / N)^(1/4)
  std::array<EstimatorSummary, kObservableCount> estimates{};
  std::vector<DisorderEstimate> per_disorder;
  double rhat_max = 1.0;
  bool converged = true;  // rhat_max <= 1.1
  double max_energy_drift = 0.0;
  double mean_acceptance = 0.0;
};

void validate(const ExperimentConfig& config);

// One disorder sample: n_chains chains run in lockstep and are measured together.
DisorderEstimate simulate_disorder(const ExperimentConfig& config, int disorder_index, double q,
                                   double r);

// Parallel across disorder samples; the serial mode is the reference and the
// two agree bit for bit (independent streams, ordered reduction).
ExperimentResult run_experiment(const ExperimentConfig& config,
                                Execution exec = Execution::parallel);

EstimatorSummary summarize(const std::vector<DisorderEstimate>& rows, int observable);

// Thinned-sample dump: "SSKD", u32 version, u32 N, u64 count, then count * N
// little-endian doubles.
void write_sample_dump(const std::string& path, int n, const std::vector<DisorderEstimate>& rows);

struct SampleDump {
  std::uint32_t version = 0;
  std::uint32_t n = 0;
  std::uint64_t count = 0;
  std::vector<double> values;
};
SampleDump read_sample_dump(const std::string& path);

struct ThermoResult {
  std::vector<double> betas;
  std::vector<EstimatorSummary> xi_overlap;  // E<xi(R12)> per grid point
  std::vector<double> integrand;             // beta (xi(1) - E<xi(R12)>)
  std::vector<double> integrand_stderr;
  double f_zero = 0.0;       // exact endpoint by quadrature
  double f_n = 0.0;          // F_N at the last grid point
  double f_n_stderr = 0.0;   // propagated Monte Carlo error
  double simpson_error = 0.0;  // |Simpson - trapezoid|
  bool grid_warning = false;   // simpson_error > f_n_stderr
  double f_rs = 0.0;           // replica-symmetric value at the last grid point
  double f_rs_zero = 0.0;      // replica-symmetric value at beta = 0
};

// Integrates dF_N/dbeta = beta (xi(1) - E<xi(R12)>) with composite Simpson over
// a uniform grid starting at 0 (odd number of points).
ThermoResult thermo_integrate_free_energy(const ExperimentConfig& config,
                                          const std::vector<double>& beta_grid,
                                          Execution exec = Execution::parallel);

}  // namespace ssk
