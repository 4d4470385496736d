#include "thz/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "thz/linalg.hpp"
#include "thz/rng.hpp"

namespace thz::harness {

Method method_from_string(const std::string& name) {
  if (name == "ls") return Method::LS;
  if (name == "mmse") return Method::MMSE;
  if (name == "omp") return Method::OMP;
  if (name == "focuss") return Method::FOCUSS;
  if (name == "pa-bl" || name == "pabl") return Method::PABL;
  if (name == "da-bl" || name == "dabl") return Method::DABL;
  if (name == "genie") return Method::GENIE;
  if (name == "bcrlb-pa") return Method::BCRLB_PA;
  if (name == "bcrlb-da") return Method::BCRLB_DA;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::LS: return "LS";
    case Method::MMSE: return "MMSE";
    case Method::OMP: return "OMP";
    case Method::FOCUSS: return "FOCUSS";
    case Method::PABL: return "PA-BL";
    case Method::DABL: return "DA-BL";
    case Method::GENIE: return "GENIE";
    case Method::BCRLB_PA: return "BCRLB-PA";
    case Method::BCRLB_DA: return "BCRLB-DA";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  scenario.validate();
  if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials >= 1");
  if (snr_grid_db.empty())
    throw std::invalid_argument("ExperimentSpec: SNR grid must be nonempty");
  if (methods.empty())
    throw std::invalid_argument("ExperimentSpec: no methods selected");
  const long beam_dim =
      static_cast<long>(scenario.grid_tx) * scenario.grid_rx;
  if (beam_dim >= 16384 && !full_scale)
    throw std::invalid_argument(
        "ExperimentSpec: beamspace dimension " + std::to_string(beam_dim) +
        " needs --full-scale (posterior covariance would be " +
        std::to_string(beam_dim) + "^2 complex entries)");
}

double nmse(const channel::ChannelFrequencyResponse& h_hat,
            const channel::ChannelFrequencyResponse& h_true) {
  if (h_hat.h.size() != h_true.h.size())
    throw std::invalid_argument("nmse: subcarrier count mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < h_true.h.size(); ++k) {
    num += (h_hat.h[k] - h_true.h[k]).squaredNorm();
    den += h_true.h[k].squaredNorm();
  }
  if (den <= 0.0) throw std::invalid_argument("nmse: zero-energy truth");
  return num / den;
}

std::vector<MatC> build_equivalent_sensing(const frame::PilotFrame& frame,
                                           const sparse::DictionarySet& dict) {
  const int k_count = dict.n_subcarriers();
  const int m_blocks = static_cast<int>(frame.blocks.size());
  const int n_rf = static_cast<int>(frame.blocks.front().w_rf.cols());
  const Eigen::Index g = static_cast<Eigen::Index>(dict.grid_tx()) *
                         dict.grid_rx();

  std::vector<MatC> out(k_count);
  for (int k = 0; k < k_count; ++k) {
    const auto& pair = dict.at(k);
    out[k].resize(m_blocks * n_rf, g);
    for (int m = 0; m < m_blocks; ++m) {
      const auto& block = frame.blocks[m];
      const MatC t_w = block.w_rf.adjoint() * pair.a_r;  // N_RF x G_R
      const VecC q = pair.a_t.adjoint() * (block.f_rf * block.pilots_fd.col(k));
      for (Eigen::Index t = 0; t < q.size(); ++t)
        out[k].block(m * n_rf, t * t_w.cols(), n_rf, t_w.cols()) = q(t) * t_w;
    }
  }
  return out;
}

BeamspaceTruth::BeamspaceTruth(const sparse::DictionarySet& dict)
    : dict_(dict) {
  factors_.reserve(dict.n_subcarriers());
  for (int k = 0; k < dict.n_subcarriers(); ++k) {
    const MatC& psi = dict.psi(k);
    MatC gram = psi * psi.adjoint();
    gram.diagonal().array() +=
        1e-10 * gram.trace().real() / static_cast<double>(gram.rows());
    factors_.emplace_back(gram);
    if (factors_.back().info() != Eigen::Success)
      throw std::runtime_error("BeamspaceTruth: Psi Psi^H not PD");
  }
}

VecC BeamspaceTruth::solve(int k, const MatC& h) const {
  return dict_.psi(k).adjoint() * factors_.at(k).solve(linalg::vec(h));
}

TrialData make_trial(const ScenarioConfig& scenario,
                     const sparse::DictionarySet& dict, std::uint64_t seed,
                     int snr_index, int trial, double sigma_sq, bool need_data,
                     const BeamspaceTruth* truth) {
  ScenarioConfig sc = scenario;
  sc.system.sigma_v_sq = sigma_sq;
  sc.system.sigma_d_sq = sigma_sq;
  const auto si = static_cast<std::uint64_t>(snr_index);
  const auto ti = static_cast<std::uint64_t>(trial);

  TrialData td;
  {
    Rng rng(derive_seed(seed, 0x11, si, ti));
    const auto paths = channel::sample_paths(sc.physical, sc.sampling, rng);
    td.h = channel::assemble_channel(paths, sc.physical, sc.system.n_t,
                                     sc.system.n_r, sc.per_subcarrier_gain);
  }
  if (sc.normalize_channel) {
    const double energy = td.h.total_energy();
    if (energy <= 0.0)
      throw std::runtime_error("make_trial: zero-energy channel realization");
    const double scale =
        std::sqrt(static_cast<double>(sc.system.n_t) * sc.system.n_r *
                  td.h.h.size() / energy);
    for (auto& h : td.h.h) h *= scale;
  }

  {
    Rng rng(derive_seed(seed, 0x22, si, ti));
    td.pilot_frame = frame::generate_pilot_frame(sc.system, rng);
  }
  {
    Rng rng(derive_seed(seed, 0x33, si, ti));
    td.pilots = frame::synthesize_pilot_measurements(td.h, sc.system,
                                                     td.pilot_frame, rng);
  }
  td.psi_tilde_p = build_equivalent_sensing(td.pilot_frame, dict);

  if (need_data && sc.system.n_data_blocks > 0) {
    const auto constel = Constellation::from_name(sc.system.data_constellation);
    Rng sym_rng(derive_seed(seed, 0x44, si, ti));
    const auto x = frame::generate_data_symbols(sc.system, constel, sym_rng);
    Rng rf_rng(derive_seed(seed, 0x55, si, ti));
    const MatC f_rf = frame::generate_rf_codebook(rf_rng, sc.system.n_t,
                                                  sc.system.n_rf,
                                                  sc.system.phase_bits);
    const MatC w_rf = frame::generate_rf_codebook(rf_rng, sc.system.n_r,
                                                  sc.system.n_rf,
                                                  sc.system.phase_bits);
    Rng noise_rng(derive_seed(seed, 0x66, si, ti));
    td.data = frame::synthesize_data_blocks(td.h, sc.system, x, f_rf, w_rf,
                                            noise_rng);
  }

  if (truth) {
    td.h_b_true.reserve(td.h.h.size());
    for (std::size_t k = 0; k < td.h.h.size(); ++k)
      td.h_b_true.push_back(truth->solve(static_cast<int>(k), td.h.h[k]));
  }
  return td;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (const std::exception& e) {
          std::scoped_lock lock(error_mutex);
          failed = true;
          error = e.what();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failed) throw std::runtime_error("parallel_for: task failed: " + error);
}

namespace {

struct MethodOutcome {
  bool attempted = false;
  bool ok = false;
  double nmse_value = std::numeric_limits<double>::quiet_NaN();
  double bit_errors = -1.0;  // negative: method does not detect
  double bits = 0.0;
  double seconds = 0.0;
  std::string error;
};

bool needs_data(Method m) {
  return m == Method::DABL || m == Method::BCRLB_DA;
}

bool detects(Method m) {
  return m == Method::PABL || m == Method::DABL || m == Method::GENIE;
}

bool needs_truth(Method m) {
  return m == Method::GENIE || m == Method::BCRLB_PA || m == Method::BCRLB_DA;
}

VecD genie_gamma(const VecC& h_b_true) {
  VecD gamma = h_b_true.cwiseAbs2();
  const double top = gamma.maxCoeff();
  return gamma.cwiseMax(top > 0.0 ? 1e-8 * top : 1e-12);
}

// Bit/symbol error counting for an index matrix against the true symbols.
void count_bit_errors(const Eigen::MatrixXi& detected, const MatC& x_true,
                      const Constellation& constel, double* bit_errors,
                      double* bits) {
  for (Eigen::Index c = 0; c < detected.cols(); ++c)
    for (Eigen::Index r = 0; r < detected.rows(); ++r) {
      const int truth = constel.index_of(x_true(r, c));
      *bit_errors += constel.bit_errors(detected(r, c), truth);
      *bits += constel.bits_per_symbol();
    }
}

// MMSE data detection with an estimated channel, for methods whose BER is
// measured through the standard receiver.
void detect_with_channel(const channel::ChannelFrequencyResponse& h_hat,
                         const TrialData& td, const Constellation& constel,
                         double* bit_errors, double* bits) {
  const int n_rf = static_cast<int>(td.data.w_rf.cols());
  const MatC r_d = td.data.r_v.topLeftCorner(n_rf, n_rf);
  for (std::size_t k = 0; k < h_hat.h.size(); ++k) {
    const MatC h_eq = td.data.w_rf.adjoint() * h_hat.h[k] * td.data.f_rf;
    const MatC soft = dabl::mmse_detect(td.data.y[k], h_eq, r_d);
    Eigen::MatrixXi idx(soft.rows(), soft.cols());
    for (Eigen::Index c = 0; c < soft.cols(); ++c)
      for (Eigen::Index r = 0; r < soft.rows(); ++r)
        idx(r, c) = constel.demodulate(soft(r, c));
    count_bit_errors(idx, td.data.x_true[k], constel, bit_errors, bits);
  }
}

struct SweepContext {
  const ExperimentSpec& spec;
  const sparse::DictionarySet& dict;
  const BeamspaceTruth* truth = nullptr;
  const std::vector<MatC>* r_h = nullptr;  // MMSE prior, per subcarrier
  bool any_data = false;
  bool any_truth = false;
};

MethodOutcome run_method(Method m, const SweepContext& ctx, const TrialData& td,
                         const pabl::Report* pabl_report,
                         const dabl::Report* dabl_report,
                         const Constellation& constel) {
  const auto& sc = ctx.spec.scenario;
  const int k_count = sc.n_subcarriers();
  MethodOutcome out;
  out.attempted = true;

  channel::ChannelFrequencyResponse h_hat;
  h_hat.h.reserve(k_count);
  const bool have_data = !td.data.y.empty();

  switch (m) {
    case Method::LS: {
      for (int k = 0; k < k_count; ++k)
        h_hat.h.push_back(linalg::unvec(
            est::ls_estimate(td.pilots.y[k], td.pilots.phi[k]), sc.system.n_r,
            sc.system.n_t));
      break;
    }
    case Method::MMSE: {
      for (int k = 0; k < k_count; ++k)
        h_hat.h.push_back(linalg::unvec(
            est::mmse_estimate(td.pilots.y[k], td.pilots.phi[k],
                               (*ctx.r_h)[k], td.pilots.r_v),
            sc.system.n_r, sc.system.n_t));
      break;
    }
    case Method::OMP: {
      est::OmpOptions opt;
      opt.eps_o = ctx.spec.omp_eps_o;
      opt.noise_scale = std::sqrt(td.pilots.r_v.trace().real());
      for (int k = 0; k < k_count; ++k) {
        const auto r = est::omp_estimate(td.pilots.y[k], td.psi_tilde_p[k], opt);
        h_hat.h.push_back(sparse::beamspace_to_channel(r.x, ctx.dict.at(k)));
      }
      break;
    }
    case Method::FOCUSS: {
      est::FocussOptions opt;
      opt.p = ctx.spec.focuss_p;
      opt.lambda = std::max(
          1e-12, td.pilots.r_v.trace().real() / td.pilots.r_v.rows());
      for (int k = 0; k < k_count; ++k) {
        const auto r =
            est::focuss_estimate(td.pilots.y[k], td.psi_tilde_p[k], opt);
        h_hat.h.push_back(sparse::beamspace_to_channel(r.x, ctx.dict.at(k)));
      }
      break;
    }
    case Method::PABL: {
      h_hat = pabl_report->h_hat;
      if (have_data) {
        out.bit_errors = 0.0;
        detect_with_channel(h_hat, td, constel, &out.bit_errors, &out.bits);
      }
      break;
    }
    case Method::DABL: {
      h_hat = dabl_report->h_hat;
      if (have_data) {
        out.bit_errors = 0.0;
        for (int k = 0; k < k_count; ++k)
          count_bit_errors(dabl_report->per_k[k].data.x_idx, td.data.x_true[k],
                           constel, &out.bit_errors, &out.bits);
      }
      break;
    }
    case Method::GENIE: {
      for (int k = 0; k < k_count; ++k) {
        const auto model =
            bayes::whiten(td.psi_tilde_p[k], td.pilots.y[k], td.pilots.r_v);
        bayes::PosteriorSolve post(model, genie_gamma(td.h_b_true[k]));
        h_hat.h.push_back(
            sparse::beamspace_to_channel(post.mean(), ctx.dict.at(k)));
      }
      if (have_data) {
        out.bit_errors = 0.0;
        detect_with_channel(h_hat, td, constel, &out.bit_errors, &out.bits);
      }
      break;
    }
    case Method::BCRLB_PA: {
      double bound = 0.0, energy = 0.0;
      for (int k = 0; k < k_count; ++k) {
        bound += pabl::bcrlb_pa(td.psi_tilde_p[k], td.pilots.r_v,
                                genie_gamma(td.h_b_true[k]), ctx.dict.psi(k))
                     .antenna;
        energy += td.h.h[k].squaredNorm();
      }
      out.nmse_value = bound / energy;
      out.ok = true;
      return out;
    }
    case Method::BCRLB_DA: {
      const int n_rf = static_cast<int>(td.data.w_rf.cols());
      const MatC r_vd_block = td.data.r_v.topLeftCorner(n_rf, n_rf);
      double bound = 0.0, energy = 0.0;
      for (int k = 0; k < k_count; ++k) {
        const auto model = dabl::build_concatenated(
            td.data.x_true[k], td.data.y[k], td.pilots.y[k],
            td.psi_tilde_p[k], td.pilots.r_v, r_vd_block, td.data.f_rf,
            td.data.w_rf, ctx.dict.at(k));
        bound += dabl::bcrlb_da(model.psi_tilde, model.r_v,
                                genie_gamma(td.h_b_true[k]), ctx.dict.psi(k))
                     .antenna;
        energy += td.h.h[k].squaredNorm();
      }
      out.nmse_value = bound / energy;
      out.ok = true;
      return out;
    }
  }

  out.nmse_value = nmse(h_hat, td.h);
  out.ok = true;
  return out;
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const auto& sc = spec.scenario;
  const sparse::DictionarySet dict(sc.physical, sc.grid_tx, sc.grid_rx,
                                   sc.system.n_t, sc.system.n_r);

  SweepContext ctx{spec, dict};
  for (Method m : spec.methods) {
    ctx.any_data |= needs_data(m) || (detects(m) && sc.system.n_data_blocks > 0);
    ctx.any_truth |= needs_truth(m);
  }

  std::optional<BeamspaceTruth> truth;
  if (ctx.any_truth) {
    truth.emplace(dict);
    ctx.truth = &*truth;
  }

  // Sample-covariance prior for the MMSE baseline, from an independent
  // calibration ensemble of channel realizations.
  std::vector<MatC> r_h;
  if (std::find(spec.methods.begin(), spec.methods.end(), Method::MMSE) !=
      spec.methods.end()) {
    const int n = sc.system.n_t * sc.system.n_r;
    const int cal = spec.mmse_calibration_trials;
    r_h.assign(sc.n_subcarriers(), MatC::Zero(n, n));
    for (int i = 0; i < cal; ++i) {
      Rng rng(derive_seed(spec.seed, 0xCA1, static_cast<std::uint64_t>(i)));
      const auto paths = channel::sample_paths(sc.physical, sc.sampling, rng);
      auto h = channel::assemble_channel(paths, sc.physical, sc.system.n_t,
                                         sc.system.n_r, sc.per_subcarrier_gain);
      if (sc.normalize_channel) {
        const double scale = std::sqrt(static_cast<double>(n) * h.h.size() /
                                       h.total_energy());
        for (auto& hk : h.h) hk *= scale;
      }
      for (int k = 0; k < sc.n_subcarriers(); ++k) {
        const VecC v = linalg::vec(h.h[k]);
        r_h[k].selfadjointView<Eigen::Lower>().rankUpdate(v, 1.0 / cal);
      }
    }
    for (auto& rk : r_h) {
      rk = rk.selfadjointView<Eigen::Lower>();
      rk.diagonal().array() += 1e-3 * rk.trace().real() / rk.rows();
    }
    ctx.r_h = &r_h;
  }

  const int n_snr = static_cast<int>(spec.snr_grid_db.size());
  const int tasks = n_snr * spec.trials;
  const bool run_pabl =
      std::find(spec.methods.begin(), spec.methods.end(), Method::PABL) !=
          spec.methods.end() ||
      std::find(spec.methods.begin(), spec.methods.end(), Method::DABL) !=
          spec.methods.end();
  const bool run_dabl =
      std::find(spec.methods.begin(), spec.methods.end(), Method::DABL) !=
      spec.methods.end();
  const auto constel = Constellation::from_name(sc.system.data_constellation);

  std::vector<std::vector<MethodOutcome>> slots(
      tasks, std::vector<MethodOutcome>(spec.methods.size()));

  parallel_for(tasks, spec.threads, [&](int task) {
    const int snr_index = task / spec.trials;
    const int trial = task % spec.trials;
    const double sigma_sq =
        std::pow(10.0, -spec.snr_grid_db[snr_index] / 10.0);
    const TrialData td = make_trial(sc, dict, spec.seed, snr_index, trial,
                                    sigma_sq, ctx.any_data, ctx.truth);

    std::optional<pabl::Report> pabl_report;
    std::optional<dabl::Report> dabl_report;
    std::string shared_error;
    if (run_pabl) {
      try {
        pabl_report = pabl::pabl_estimate_cfr(td.pilots, dict, td.psi_tilde_p,
                                              spec.pabl_options);
        if (run_dabl)
          dabl_report =
              dabl::dabl_estimate_cfr(td.pilots, td.data, dict, td.psi_tilde_p,
                                      *pabl_report, constel,
                                      spec.dabl_options);
      } catch (const std::exception& e) {
        shared_error = e.what();
      }
    }

    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      const Method m = spec.methods[mi];
      auto& slot = slots[task][mi];
      const auto start = std::chrono::steady_clock::now();
      try {
        if ((m == Method::PABL && !pabl_report) ||
            (m == Method::DABL && !dabl_report))
          throw std::runtime_error(shared_error.empty()
                                       ? "shared estimate unavailable"
                                       : shared_error);
        slot = run_method(m, ctx, td,
                          pabl_report ? &*pabl_report : nullptr,
                          dabl_report ? &*dabl_report : nullptr, constel);
      } catch (const std::exception& e) {
        slot.attempted = true;
        slot.ok = false;
        slot.error = e.what();
      }
      slot.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    }
  });

  // Ordered reduction: method-major, then SNR.
  SweepResult result;
  for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
    for (int s = 0; s < n_snr; ++s) {
      ResultRow row;
      row.method = method_name(spec.methods[mi]);
      row.snr_db = spec.snr_grid_db[s];
      row.m_blocks = sc.system.n_pilot_blocks;
      row.trials = spec.trials;
      row.seed = spec.seed;
      double nmse_sum = 0.0, bit_errors = 0.0, bits = 0.0, seconds = 0.0;
      int ok_count = 0;
      bool any_detect = false;
      for (int t = 0; t < spec.trials; ++t) {
        const auto& slot = slots[s * spec.trials + t][mi];
        seconds += slot.seconds;
        if (!slot.ok) {
          ++row.failures;
          continue;
        }
        ++ok_count;
        nmse_sum += slot.nmse_value;
        if (slot.bit_errors >= 0.0) {
          any_detect = true;
          bit_errors += slot.bit_errors;
          bits += slot.bits;
        }
      }
      row.nmse = ok_count > 0 ? nmse_sum / ok_count
                              : std::numeric_limits<double>::quiet_NaN();
      if (any_detect && bits > 0.0) row.ber = bit_errors / bits;
      row.wall_time_s = spec.timing ? seconds : 0.0;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "method,snr_db,M,nmse,ber,trials,wall_time_s,seed\n";
  for (const auto& r : rows) {
    out << r.method << ',' << format_double(r.snr_db) << ',' << r.m_blocks
        << ',' << format_double(r.nmse) << ',';
    if (!std::isnan(r.ber)) out << format_double(r.ber);
    out << ',' << r.trials << ',' << format_double(r.wall_time_s) << ','
        << r.seed << '\n';
  }
  bool any_failures = false;
  for (const auto& r : rows) any_failures |= r.failures > 0;
  if (any_failures) {
    out << "# failures: method,snr_db,count\n";
    for (const auto& r : rows)
      if (r.failures > 0)
        out << "# " << r.method << ',' << format_double(r.snr_db) << ','
            << r.failures << '\n';
  }
  return out.str();
}

std::string results_to_json(const std::vector<ResultRow>& rows,
                            const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "{\n  \"scenario\": \"" << spec.scenario.name << "\",\n"
      << "  \"seed\": " << spec.seed << ",\n"
      << "  \"trials\": " << spec.trials << ",\n"
      << "  \"mmse_calibration_trials\": " << spec.mmse_calibration_trials
      << ",\n  \"rows\": [\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << "    {\"method\": \"" << r.method << "\", \"snr_db\": "
        << format_double(r.snr_db) << ", \"M\": " << r.m_blocks
        << ", \"nmse\": " << format_double(r.nmse) << ", \"ber\": ";
    if (std::isnan(r.ber))
      out << "null";
    else
      out << format_double(r.ber);
    out << ", \"trials\": " << r.trials
        << ", \"wall_time_s\": " << format_double(r.wall_time_s)
        << ", \"seed\": " << r.seed << ", \"failures\": " << r.failures << "}";
    out << (i + 1 < rows.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

void emit_results(const std::vector<ResultRow>& rows, const std::string& format,
                  const std::string& path, const ExperimentSpec& spec) {
  if (rows.empty()) throw std::invalid_argument("emit_results: no rows");
  std::string payload;
  if (format == "csv")
    payload = results_to_csv(rows);
  else if (format == "json")
    payload = results_to_json(rows, spec);
  else
    throw std::invalid_argument("emit_results: unknown format '" + format + "'");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_results: cannot open " + path);
  out << payload;
  if (!out) throw std::runtime_error("emit_results: write failed for " + path);
}

}  // namespace thz::harness
