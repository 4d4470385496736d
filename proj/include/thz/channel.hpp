#pragma once

#include <optional>
#include <vector>

#include "thz/rng.hpp"
#include "thz/types.hpp"

namespace thz::channel {

// Pulse shape used for the delay-tap gains. RaisedCosine evaluates the
// analytic impulse response; Delta is a discrete unit sample (test hook).
struct PulseShape {
  enum class Kind { RaisedCosine, Delta } kind = Kind::RaisedCosine;
  double rolloff = 0.8;
};

// Carrier/bandwidth geometry plus the propagation constants of one scenario.
// k_abs holds the per-subcarrier molecular absorption coefficients (1/m);
// a single-entry table is broadcast to all K subcarriers.
struct PhysicalConfig {
  double f_c = 1e12;        // carrier frequency (Hz)
  double bandwidth = 20e9;  // two-sided bandwidth B (Hz)
  int n_subcarriers = 16;   // K
  double distance = 10.0;   // transmission distance d (m)
  std::vector<double> k_abs{0.0};
  double tx_gain = 1.0;     // A_T, linear amplitude scale
  double rx_gain = 1.0;     // A_R, linear amplitude scale
  PulseShape pulse;

  double sampling_period() const { return 1.0 / bandwidth; }

  // Subcarrier frequency f_k = f_c + (k - (K-1)/2) * B/K for 0-based k,
  // symmetric about the carrier.
  double subcarrier_frequency(int k) const {
    return f_c + (k - 0.5 * (n_subcarriers - 1)) * bandwidth / n_subcarriers;
  }
  double relative_frequency(int k) const {
    return subcarrier_frequency(k) / f_c;
  }

  double absorption_at(int k) const {
    return k_abs.size() == 1 ? k_abs.front() : k_abs.at(k);
  }

  void validate() const;
};

// First-order reflection medium: refractive index, surface roughness and
// medium absorption entering the Fresnel/Rayleigh chain.
struct ReflectingMedium {
  double refractive_index = 2.24;  // n
  double sigma_rough = 0.13e-3;    // surface roughness std (m)
  double varsigma = 1000.0;        // absorption coefficient of the medium (1/m)
};

struct PathComponent {
  enum class Kind { LoS, NLoS } kind = Kind::LoS;
  int cluster = 0;  // z (NLoS only)
  int ray = 0;      // j (NLoS only)
  double alpha_mag = 0.0;    // |alpha| evaluated at f_c
  double alpha_phase = 0.0;  // uniform on (-pi, pi]
  double tau = 0.0;          // delay (s)
  double aoa = 0.0;          // phi_R (rad)
  double aod = 0.0;          // phi_T (rad)
  // NLoS reflection geometry, kept so gains can be re-evaluated per subcarrier.
  double theta_in = 0.0;
  int medium_index = -1;
};

struct PathSet {
  std::vector<PathComponent> paths;
  int n_nlos_clusters = 0;
  int n_rays_per_cluster = 0;
  // Media referenced by PathComponent::medium_index, copied from the
  // sampling configuration so gains can be re-evaluated at any frequency.
  std::vector<ReflectingMedium> media;
};

struct ChannelFrequencyResponse {
  std::vector<MatC> h;  // K matrices, each N_R x N_T

  double total_energy() const {
    double e = 0.0;
    for (const auto& m : h) e += m.squaredNorm();
    return e;
  }
};

// Controls for sample_paths. Cluster-mean angles are drawn from a uniform
// directional-cosine grid; each ray deviates by a Laplacian with the given
// std. NLoS incidence angles are uniform on [0, theta_in_max].
struct PathSamplingConfig {
  int n_nlos_clusters = 3;
  int n_rays_per_cluster = 1;
  int mean_grid_size = 64;
  double angle_std = 0.1;           // rad
  int n_delay_taps = 4;             // L; delays uniform on [0, (L-1) T_s]
  double theta_in_max = kPi / 2.0 * 0.95;
  std::vector<ReflectingMedium> media{ReflectingMedium{}};
};

/// Frequency-dependent ULA steering vector: element n (0-based) equals
/// (1/sqrt(N)) exp(-j pi n delta_k cos(theta)). Unit 2-norm by construction.
VecC steering_vector(double theta, double delta_k, int n_ant);

/// Effective spatial AoA arccos(delta_k cos theta); the argument is clamped
/// to [-1, 1] and *clamped is set when clamping occurred.
double effective_aoa(double theta, double delta_k, bool* clamped = nullptr);

/// Normalized array gain |a^H(theta, f_c) a(theta, f_k)|^2, in [0, 1].
double array_gain(double theta, double f_k, const PhysicalConfig& config,
                  int n_ant);

/// Squared LoS path gain (c / (4 pi f_k d))^2 exp(-k_abs d).
double los_path_gain_sq(double f_k, double d, double k_abs_k);

struct ReflectionResult {
  cxd value;        // Gamma = gamma * rho
  bool degenerate;  // |sin(theta_in) Z / Z_0| exceeded 1
};

/// First-order reflection coefficient: Fresnel coefficient of the medium's
/// characteristic impedance times the Rayleigh roughness factor.
ReflectionResult reflection_coefficient(double f_k,
                                        const ReflectingMedium& medium,
                                        double theta_in);

/// Raised-cosine impulse response sample p(t) for sampling period t_s.
double pulse_value(const PulseShape& pulse, double t, double t_s);

/// Delay-tap gain beta_tau[k] = sum_{l=0}^{K-1} p(l T_s - tau) e^{-j2pi k l/K}.
cxd pulse_tap_gain(double tau, int k, const PhysicalConfig& config);

/// Draws one multipath realization: a LoS component plus
/// n_nlos_clusters * n_rays_per_cluster NLoS components. Magnitudes are
/// evaluated at the carrier; per-subcarrier re-evaluation happens during
/// channel assembly.
PathSet sample_paths(const PhysicalConfig& config,
                     const PathSamplingConfig& sampling, Rng& rng);

/// Assembles the per-subcarrier channel matrices H[k] from a path set,
/// combining squint-aware steering vectors, pulse-shaped delay taps and
/// path gains. When per_subcarrier_gain is set, LoS/NLoS magnitudes are
/// re-evaluated at every f_k; otherwise the carrier-frequency magnitudes
/// stored in the path set are used throughout.
ChannelFrequencyResponse assemble_channel(const PathSet& paths,
                                          const PhysicalConfig& config,
                                          int n_t, int n_r,
                                          bool per_subcarrier_gain = true);

}  // namespace thz::channel
