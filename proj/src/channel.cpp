#include "thz/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thz::channel {

void PhysicalConfig::validate() const {
  if (f_c <= 0.0) throw std::invalid_argument("PhysicalConfig: f_c must be > 0");
  if (bandwidth <= 0.0 || bandwidth >= f_c)
    throw std::invalid_argument("PhysicalConfig: need 0 < B < f_c");
  if (n_subcarriers < 1)
    throw std::invalid_argument("PhysicalConfig: K must be >= 1");
  if (k_abs.empty() ||
      (k_abs.size() != 1 &&
       k_abs.size() != static_cast<std::size_t>(n_subcarriers)))
    throw std::invalid_argument("PhysicalConfig: k_abs must have length 1 or K");
  for (double v : k_abs)
    if (v < 0.0) throw std::invalid_argument("PhysicalConfig: k_abs entries >= 0");
  if (pulse.rolloff < 0.0 || pulse.rolloff > 1.0)
    throw std::invalid_argument("PhysicalConfig: roll-off must be in [0, 1]");
}

VecC steering_vector(double theta, double delta_k, int n_ant) {
  if (n_ant < 1) throw std::invalid_argument("steering_vector: n_ant >= 1");
  VecC a(n_ant);
  const double step = kPi * delta_k * std::cos(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_ant));
  for (int n = 0; n < n_ant; ++n) a(n) = std::polar(scale, -step * n);
  return a;
}

double effective_aoa(double theta, double delta_k, bool* clamped) {
  double x = delta_k * std::cos(theta);
  const bool out_of_range = x < -1.0 || x > 1.0;
  if (clamped) *clamped = out_of_range;
  x = std::clamp(x, -1.0, 1.0);
  return std::acos(x);
}

double array_gain(double theta, double f_k, const PhysicalConfig& config,
                  int n_ant) {
  const VecC at_carrier = steering_vector(theta, 1.0, n_ant);
  const VecC at_subcarrier = steering_vector(theta, f_k / config.f_c, n_ant);
  return std::norm(at_carrier.dot(at_subcarrier));
}

double los_path_gain_sq(double f_k, double d, double k_abs_k) {
  const double spread = kSpeedOfLight / (4.0 * kPi * f_k * d);
  return spread * spread * std::exp(-k_abs_k * d);
}

namespace {

// Characteristic impedance Z(f) of the reflecting medium.
cxd medium_impedance(double f, const ReflectingMedium& m) {
  const double u = m.varsigma * kSpeedOfLight / (4.0 * kPi * f);
  const cxd eps_rel(m.refractive_index * m.refractive_index - u * u,
                    -2.0 * m.refractive_index * u);
  return std::sqrt(kMu0 / (kEps0 * eps_rel));
}

}  // namespace

ReflectionResult reflection_coefficient(double f_k,
                                        const ReflectingMedium& medium,
                                        double theta_in) {
  if (theta_in < 0.0 || theta_in >= kPi / 2.0)
    throw std::invalid_argument("reflection_coefficient: need 0 <= theta_in < pi/2");
  const cxd z = medium_impedance(f_k, medium);
  const cxd sin_ref = std::sin(theta_in) * z / kFreeSpaceImpedance;
  const bool degenerate = std::abs(sin_ref) > 1.0;
  const cxd cos_ref = std::sqrt(cxd(1.0, 0.0) - sin_ref * sin_ref);
  const double cos_in = std::cos(theta_in);
  const cxd fresnel = (z * cos_in - kFreeSpaceImpedance * cos_ref) /
                      (z * cos_in + kFreeSpaceImpedance * cos_ref);
  const double arg = 4.0 * kPi * f_k * medium.sigma_rough * cos_in / kSpeedOfLight;
  const double roughness = std::exp(-0.5 * arg * arg);
  return {fresnel * roughness, degenerate};
}

double pulse_value(const PulseShape& pulse, double t, double t_s) {
  if (pulse.kind == PulseShape::Kind::Delta)
    return std::abs(t) < 0.5 * t_s ? 1.0 : 0.0;

  const double x = t / t_s;
  const double rho = pulse.rolloff;
  auto sinc = [](double v) {
    if (std::abs(v) < 1e-12) return 1.0;
    return std::sin(kPi * v) / (kPi * v);
  };
  if (rho > 0.0) {
    // Removable singularity at |t| = T_s / (2 rho).
    const double denom = 1.0 - (2.0 * rho * x) * (2.0 * rho * x);
    if (std::abs(denom) < 1e-8)
      return (kPi / 4.0) * sinc(1.0 / (2.0 * rho));
    return sinc(x) * std::cos(kPi * rho * x) / denom;
  }
  return sinc(x);
}

cxd pulse_tap_gain(double tau, int k, const PhysicalConfig& config) {
  const int big_k = config.n_subcarriers;
  if (k < 0 || k >= big_k)
    throw std::invalid_argument("pulse_tap_gain: subcarrier index out of range");
  const double t_s = config.sampling_period();
  cxd acc(0.0, 0.0);
  for (int l = 0; l < big_k; ++l) {
    const double p = pulse_value(config.pulse, l * t_s - tau, t_s);
    if (p != 0.0) acc += p * std::polar(1.0, -2.0 * kPi * k * l / big_k);
  }
  return acc;
}

namespace {

double grid_mean_angle(int grid_size, Rng& rng) {
  const int t = static_cast<int>(rng.uniform_index(grid_size)) + 1;
  const double cosine = 2.0 * (t - 1) / grid_size - 1.0;
  return std::acos(std::clamp(cosine, -1.0, 1.0));
}

double perturbed_angle(double mean, double angle_std, Rng& rng) {
  const double scale = angle_std / std::sqrt(2.0);
  return std::clamp(rng.laplace(mean, scale), 0.0, kPi);
}

}  // namespace

PathSet sample_paths(const PhysicalConfig& config,
                     const PathSamplingConfig& sampling, Rng& rng) {
  config.validate();
  if (sampling.media.empty())
    throw std::invalid_argument("sample_paths: need at least one medium");

  PathSet set;
  set.n_nlos_clusters = sampling.n_nlos_clusters;
  set.n_rays_per_cluster = sampling.n_rays_per_cluster;
  set.media = sampling.media;

  const double delay_span =
      (sampling.n_delay_taps - 1) * config.sampling_period();
  const double k_abs_c =
      config.k_abs.size() == 1
          ? config.k_abs.front()
          : config.k_abs.at(config.n_subcarriers / 2);  // value nearest f_c

  auto draw_common = [&](PathComponent& p, double mean_aoa, double mean_aod) {
    p.alpha_phase = rng.uniform(-kPi, kPi);
    p.tau = delay_span > 0.0 ? rng.uniform(0.0, delay_span) : 0.0;
    p.aoa = perturbed_angle(mean_aoa, sampling.angle_std, rng);
    p.aod = perturbed_angle(mean_aod, sampling.angle_std, rng);
  };

  {
    PathComponent los;
    los.kind = PathComponent::Kind::LoS;
    draw_common(los, grid_mean_angle(sampling.mean_grid_size, rng),
                grid_mean_angle(sampling.mean_grid_size, rng));
    los.alpha_mag =
        std::sqrt(los_path_gain_sq(config.f_c, config.distance, k_abs_c));
    set.paths.push_back(los);
  }

  for (int z = 0; z < sampling.n_nlos_clusters; ++z) {
    const double mean_aoa = grid_mean_angle(sampling.mean_grid_size, rng);
    const double mean_aod = grid_mean_angle(sampling.mean_grid_size, rng);
    const int medium_index =
        static_cast<int>(rng.uniform_index(sampling.media.size()));
    const double theta_in = rng.uniform(0.0, sampling.theta_in_max);
    for (int j = 0; j < sampling.n_rays_per_cluster; ++j) {
      PathComponent p;
      p.kind = PathComponent::Kind::NLoS;
      p.cluster = z;
      p.ray = j;
      p.medium_index = medium_index;
      p.theta_in = theta_in;
      draw_common(p, mean_aoa, mean_aod);
      const auto refl = reflection_coefficient(
          config.f_c, sampling.media[medium_index], theta_in);
      p.alpha_mag =
          std::abs(refl.value) *
          std::sqrt(los_path_gain_sq(config.f_c, config.distance, k_abs_c));
      set.paths.push_back(p);
    }
  }
  return set;
}

ChannelFrequencyResponse assemble_channel(const PathSet& paths,
                                          const PhysicalConfig& config,
                                          int n_t, int n_r,
                                          bool per_subcarrier_gain) {
  if (paths.paths.empty())
    throw std::invalid_argument("assemble_channel: empty path set");
  config.validate();

  const int big_k = config.n_subcarriers;
  const double nlos_count =
      static_cast<double>(paths.n_nlos_clusters) * paths.n_rays_per_cluster;
  const double los_scale = std::sqrt(static_cast<double>(n_t) * n_r);
  const double nlos_scale =
      nlos_count > 0 ? std::sqrt(n_t * n_r / nlos_count) : 0.0;
  const double antenna_gain = config.tx_gain * config.rx_gain;

  ChannelFrequencyResponse cfr;
  cfr.h.assign(big_k, MatC::Zero(n_r, n_t));

  for (int k = 0; k < big_k; ++k) {
    const double f_k = config.subcarrier_frequency(k);
    const double delta_k = config.relative_frequency(k);
    MatC& h = cfr.h[k];
    for (const auto& p : paths.paths) {
      double mag = p.alpha_mag;
      if (per_subcarrier_gain) {
        const double base = std::sqrt(
            los_path_gain_sq(f_k, config.distance, config.absorption_at(k)));
        if (p.kind == PathComponent::Kind::LoS) {
          mag = base;
        } else {
          const auto& medium = paths.media.at(p.medium_index);
          mag = std::abs(reflection_coefficient(f_k, medium, p.theta_in).value) *
                base;
        }
      }
      const cxd alpha = std::polar(mag, p.alpha_phase);
      const cxd beta = pulse_tap_gain(p.tau, k, config);
      const double scale =
          p.kind == PathComponent::Kind::LoS ? los_scale : nlos_scale;
      const VecC a_r = steering_vector(p.aoa, delta_k, n_r);
      const VecC a_t = steering_vector(p.aod, delta_k, n_t);
      h.noalias() +=
          (scale * antenna_gain * alpha * beta) * (a_r * a_t.adjoint());
    }
  }
  return cfr;
}

}  // namespace thz::channel
