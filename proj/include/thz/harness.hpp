#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "thz/config.hpp"
#include "thz/dabl.hpp"
#include "thz/estimators.hpp"
#include "thz/pabl.hpp"

namespace thz::harness {

enum class Method {
  LS,
  MMSE,
  OMP,
  FOCUSS,
  PABL,
  DABL,
  GENIE,
  BCRLB_PA,
  BCRLB_DA,
};

Method method_from_string(const std::string& name);
std::string method_name(Method m);

struct ExperimentSpec {
  ScenarioConfig scenario;
  std::vector<Method> methods{Method::PABL};
  std::vector<double> snr_grid_db{0.0};
  int trials = 100;
  std::uint64_t seed = 0;
  int threads = 0;       // 0: hardware concurrency
  bool full_scale = false;
  bool timing = false;   // measured wall time breaks byte-level determinism
  pabl::Options pabl_options;
  dabl::Options dabl_options;
  double omp_eps_o = 1.0;
  double focuss_p = 1.0;
  int mmse_calibration_trials = 256;

  void validate() const;
};

struct ResultRow {
  std::string method;
  double snr_db = 0.0;
  int m_blocks = 0;
  double nmse = 0.0;
  double ber = std::numeric_limits<double>::quiet_NaN();  // NaN: not detecting
  int trials = 0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  int failures = 0;  // estimator failures, excluded from the averages
};

struct SweepResult {
  std::vector<ResultRow> rows;
};

/// NMSE = sum_k |H_hat[k] - H[k]|_F^2 / sum_k |H[k]|_F^2.
double nmse(const channel::ChannelFrequencyResponse& h_hat,
            const channel::ChannelFrequencyResponse& h_true);

/// Equivalent pilot sensing matrices Psi~_p[k] = Phi_p[k] Psi[k], assembled
/// from the Kronecker structure of the per-block rows rather than the full
/// product.
std::vector<MatC> build_equivalent_sensing(const frame::PilotFrame& frame,
                                           const sparse::DictionarySet& dict);

// Min-norm beamspace representation h_b = Psi^H (Psi Psi^H)^{-1} vec(H);
// factors Psi Psi^H once per subcarrier and is safe for concurrent solves.
class BeamspaceTruth {
 public:
  explicit BeamspaceTruth(const sparse::DictionarySet& dict);
  VecC solve(int k, const MatC& h) const;

 private:
  const sparse::DictionarySet& dict_;
  std::vector<Eigen::LLT<MatC>> factors_;
};

// Everything synthesized for one Monte Carlo trial.
struct TrialData {
  channel::ChannelFrequencyResponse h;
  frame::PilotFrame pilot_frame;
  frame::PilotMeasurements pilots;
  std::vector<MatC> psi_tilde_p;  // per k
  frame::DataMeasurements data;   // populated when the scenario has N_d > 0
  std::vector<VecC> h_b_true;     // min-norm beamspace truth (when requested)
};

/// Deterministic synthesis of one trial of the given scenario at the given
/// noise level. All randomness derives from (seed, snr_index, trial).
TrialData make_trial(const ScenarioConfig& scenario,
                     const sparse::DictionarySet& dict, std::uint64_t seed,
                     int snr_index, int trial, double sigma_sq, bool need_data,
                     const BeamspaceTruth* truth = nullptr);

/// Deterministic parallel map: tasks grab indices from a shared counter but
/// write into per-index slots, so results are independent of scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

/// Runs the Monte Carlo NMSE/BER sweep over the SNR grid. Rows come out
/// grouped by method in the order requested, then by SNR point.
SweepResult run_sweep(const ExperimentSpec& spec);

std::string results_to_csv(const std::vector<ResultRow>& rows);
std::string results_to_json(const std::vector<ResultRow>& rows,
                            const ExperimentSpec& spec);

/// Writes rows to `path` in "csv" or "json" format.
void emit_results(const std::vector<ResultRow>& rows, const std::string& format,
                  const std::string& path, const ExperimentSpec& spec);

/// Fast self-checks of the model-level invariants (steering norms, FD/TD
/// equivalence, sensing identities, posterior-route agreement, degenerate
/// reductions). Prints one line per check; returns the number of failures.
int validate_properties(std::uint64_t seed, std::ostream& out);

}  // namespace thz::harness
