#include "backflow/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "backflow/errors.hpp"
#include "fft.hpp"

namespace backflow {

namespace {

constexpr int kBrentBits = std::numeric_limits<double>::digits / 2;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Closed-form profiles of the combined state as functions of u = x - x_c.
// With A = |c_f|^2 + |c_b|^2, B = 2|c_f c_b| and beta = arg(c_f* c_b):
//   |psi|^2 = R^2 (A + B cos phi),  (m/hbar) J = R^2 (a0 + a1 cos phi)
// where phi = q u + dtheta + beta, a0 = g A + q |c_b|^2, a1 = B (g + q/2), g = grad theta.
struct FluxModel {
  FluxModel(const EncounterState& state, const ArmWeights& w)
      : geo(state.geometry),
        cf2(std::norm(w.free)),
        cb2(std::norm(w.pulsed)),
        A(cf2 + cb2),
        B(2.0 * std::abs(w.free) * std::abs(w.pulsed)),
        phase0(geo.delta_theta + std::arg(std::conj(w.free) * w.pulsed)),
        hbar_over_m(constants::hbar / geo.mass) {}

  double phase(double u) const { return geo.q * u + phase0; }
  double r2(double u) const {
    const double r = geo.envelope(u);
    return r * r;
  }
  double a0(double u) const { return geo.grad_theta(u) * A + geo.q * cb2; }
  double a1(double u) const { return B * (geo.grad_theta(u) + 0.5 * geo.q); }
  double sign_part(double u) const { return a0(u) + a1(u) * std::cos(phase(u)); }
  double flux(double u) const { return hbar_over_m * r2(u) * sign_part(u); }
  double density(double u) const { return r2(u) * (A + B * std::cos(phase(u))); }

  const EncounterGeometry& geo;
  double cf2, cb2, A, B, phase0, hbar_over_m;
};

double grid_shift(const EncounterState& state) {
  return (Extended(state.grid.center()) - state.geometry.center).value();
}

double trapezoid(const std::vector<double>& y, double h) {
  if (y.size() < 2) return 0.0;
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * h;
}

// Interval of u on which both arms' local wavenumbers are non-negative.
std::pair<double, double> forward_region(const EncounterGeometry& g, double lo, double hi) {
  const double k_low = std::min(g.k_free, g.k_free + g.q);
  if (g.chirp > 0.0) {
    lo = std::max(lo, -k_low / (2.0 * g.chirp));
  } else if (k_low < 0.0) {
    return {hi, hi};
  }
  return {lo, std::max(lo, hi)};
}

// Brent's stopping rule carries an absolute term, so search on [0, 1] and map back.
template <class F>
std::pair<double, double> minimize(F f, double a, double b) {
  boost::uintmax_t iters = 200;
  const double width = b - a;
  const auto [t, value] = boost::math::tools::brent_find_minima([&](double s) { return f(a + s * width); }, 0.0,
                                                               1.0, kBrentBits, iters);
  return {a + t * width, value};
}

template <class F>
double root(F f, double a, double b, double fa, double fb) {
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(50),
                                                   iters);
  return 0.5 * (r.first + r.second);
}

BackflowIntegral integrate_with_scale(const EncounterState& state, const ArmWeights& weights,
                                      const std::vector<double>& flux, double relative_threshold) {
  const FluxModel model(state, weights);
  const EncounterGeometry& g = state.geometry;
  const Grid& grid = state.grid;
  const double shift = grid_shift(state);
  double j_max = 0.0;
  for (double j : flux) j_max = std::max(j_max, std::abs(j));
  const double threshold = relative_threshold * j_max;

  const double u_first = grid.offset(0) + shift;
  const double u_last = grid.offset(grid.n_points() - 1) + shift;
  const double lo = u_first;
  const double hi = u_last;

  BackflowIntegral out;
  // Share of the negative flux where an arm runs backwards locally (grid estimate).
  {
    const auto [f_lo, f_hi] = forward_region(g, u_first, u_last);
    std::vector<double> outside(flux.size(), 0.0);
    for (std::size_t i = 0; i < flux.size(); ++i) {
      const double u = grid.offset(i) + shift;
      if ((u < f_lo || u > f_hi) && flux[i] < -threshold) outside[i] = -flux[i];
    }
    out.classical_rate = trapezoid(outside, grid.spacing());
  }
  if (!(hi > lo) || model.B == 0.0) return out;

  // Fringe boundaries sit where cos(phase) = 1; the lobe of negative flux, if
  // any, lies between two of them.
  std::vector<double> cuts{lo};
  if (g.q != 0.0) {
    const double period = 2.0 * std::numbers::pi / std::abs(g.q);
    const double base = -model.phase0 / g.q;
    double u = base + std::floor((lo - base) / period) * period;
    for (u += period; u < hi; u += period) {
      if (u > lo) cuts.push_back(u);
    }
  }
  cuts.push_back(hi);

  auto f = [&](double u) { return model.sign_part(u); };
  auto lower_bound = [&](double u) { return model.a0(u) - std::abs(model.a1(u)); };
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double p0 = cuts[c];
    const double p1 = cuts[c + 1];
    // a0 - |a1| is linear in u on a piece where a1 keeps its sign.
    if (lower_bound(p0) > 0.0 && lower_bound(p1) > 0.0 && model.a1(p0) * model.a1(p1) >= 0.0) continue;
    const auto [u_min, f_min] = minimize(f, p0, p1);
    if (!(f_min < 0.0)) continue;
    const double j_min = model.flux(u_min);
    if (!(j_min < -threshold)) continue;
    const double f0 = f(p0);
    const double f1 = f(p1);
    const double r0 = f0 < 0.0 ? p0 : root(f, p0, u_min, f0, f_min);
    const double r1 = f1 < 0.0 ? p1 : root(f, u_min, p1, f_min, f1);
    const double area = boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double u) { return -model.flux(u); }, r0, r1);
    out.rate += std::max(area, 0.0);
    ++out.interval_count;
    if (j_min < out.min_flux) {
      out.min_flux = j_min;
      out.min_flux_position = (g.center + Extended(u_min)).value();
    }
  }
  return out;
}

BackflowReport build_report(const EncounterState& state, const ArmWeights& weights, bool keep_profiles) {
  const FluxModel model(state, weights);
  const Grid& grid = state.grid;
  const double shift = grid_shift(state);
  const std::size_t n = grid.n_points();
  auto u_at = [&](std::size_t i) { return grid.offset(i) + shift; };

  BackflowReport r;
  std::vector<double> flux = flux_profile(state, weights);
  std::vector<double> density = density_profile(state, weights);
  CriticalDensity critical = critical_density_profile(state, weights);

  const BackflowIntegral integral = integrate_with_scale(state, weights, flux, 1e-12);
  r.backflow_rate = integral.rate;
  r.classical_backflow_rate = integral.classical_rate;
  r.backflow_interval_count = integral.interval_count;
  r.max_negative_flux = integral.min_flux;
  r.backflow_rate_grid = backflow_rate(flux, grid);
  std::vector<double> abs_flux(n);
  std::transform(flux.begin(), flux.end(), abs_flux.begin(), [](double j) { return std::abs(j); });
  const double total = trapezoid(abs_flux, grid.spacing());
  r.backflow_fraction = total > 0.0 ? r.backflow_rate / total : 0.0;

  // Peak density, refined between the neighbours of the best sample.
  const auto peak_it = std::max_element(density.begin(), density.end());
  const auto ip = static_cast<std::size_t>(peak_it - density.begin());
  r.density_max = *peak_it;
  if (ip > 0 && ip + 1 < n) {
    const auto best = minimize([&](double u) { return -model.density(u); }, u_at(ip - 1), u_at(ip + 1));
    r.density_max = std::max(r.density_max, -best.second);
  }

  r.singular_points = critical.singular_points;
  r.rho_crit_max = -std::numeric_limits<double>::infinity();
  for (double v : critical.values) {
    if (std::isfinite(v)) r.rho_crit_max = std::max(r.rho_crit_max, v);
  }
  if (!std::isfinite(r.rho_crit_max)) r.rho_crit_max = kNaN;
  r.rho_crit_max_fraction = r.density_max > 0.0 ? r.rho_crit_max / r.density_max : kNaN;

  const double q = state.geometry.q;
  r.fringe_wavelength = q != 0.0 ? 2.0 * std::numbers::pi / std::abs(q) : std::numeric_limits<double>::infinity();
  r.density_min = kNaN;
  r.density_min_fraction = kNaN;
  r.density_min_position = kNaN;
  if (q != 0.0) {
    const double window = 2.0 * r.fringe_wavelength;
    std::size_t best = n;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (std::abs(u_at(i)) > window) continue;
      if (density[i] <= density[i - 1] && density[i] <= density[i + 1]) {
        if (best == n || std::abs(u_at(i)) < std::abs(u_at(best))) best = i;
      }
    }
    if (best != n) {
      const auto refined = minimize([&](double u) { return model.density(u); }, u_at(best - 1), u_at(best + 1));
      r.density_min = std::min(density[best], refined.second);
      r.density_min_position =
          (state.geometry.center + Extended(refined.second <= density[best] ? refined.first : u_at(best))).value();
      r.density_min_fraction = r.density_min / r.density_max;
    }
  }

  if (keep_profiles) {
    r.flux_profile = std::move(flux);
    r.density_profile = std::move(density);
    r.critical_density_profile = std::move(critical.values);
  }
  return r;
}

}  // namespace

std::vector<double> flux_profile(const EncounterState& state, const ArmWeights& weights) {
  const EncounterGeometry& g = state.geometry;
  const double shift = grid_shift(state);
  const double hbar_over_m = constants::hbar / g.mass;
  const double cb2 = std::norm(weights.pulsed);
  const Complex cross = std::conj(weights.free) * weights.pulsed;
  std::vector<double> out(state.grid.n_points());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u = state.grid.offset(i) + shift;
    const double r2 = state.envelope[i] * state.envelope[i];
    const Complex beat = std::polar(1.0, g.q * u + g.delta_theta);
    const double rho = r2 * std::norm(weights.free + weights.pulsed * beat);
    out[i] = hbar_over_m * (state.theta_gradient[i] * rho + g.q * r2 * cb2 + g.q * r2 * (cross * beat).real());
  }
  return out;
}

std::vector<double> density_profile(const EncounterState& state, const ArmWeights& weights) {
  const EncounterGeometry& g = state.geometry;
  const double shift = grid_shift(state);
  std::vector<double> out(state.grid.n_points());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u = state.grid.offset(i) + shift;
    const Complex beat = std::polar(1.0, g.q * u + g.delta_theta);
    out[i] = state.envelope[i] * state.envelope[i] * std::norm(weights.free + weights.pulsed * beat);
  }
  return out;
}

CriticalDensity critical_density_profile(const EncounterState& state, const ArmWeights& weights) {
  const double q = state.geometry.q;
  const double imbalance = std::norm(weights.free) - std::norm(weights.pulsed);
  CriticalDensity out{std::vector<double>(state.grid.n_points()), 0};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double g = state.theta_gradient[i];
    const double denom = q + 2.0 * g;
    if (std::abs(denom) <= 1e-12 * (std::abs(q) + 2.0 * std::abs(g))) {
      out.values[i] = kNaN;
      ++out.singular_points;
      continue;
    }
    out.values[i] = q / denom * state.envelope[i] * state.envelope[i] * imbalance;
  }
  return out;
}

std::vector<double> finite_difference_flux(const WaveField& field, double mass) {
  const std::vector<Complex>& psi = field.amplitudes;
  const std::size_t n = psi.size();
  const double scale = constants::hbar / mass / (12.0 * field.grid.spacing());
  std::vector<double> out(n, kNaN);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const Complex d = -psi[i + 2] + 8.0 * psi[i + 1] - 8.0 * psi[i - 1] + psi[i - 2];
    out[i] = scale * (std::conj(psi[i]) * d).imag();
  }
  return out;
}

double backflow_rate(const std::vector<double>& flux, const Grid& grid) {
  if (flux.size() != grid.n_points()) throw GridMismatchError("flux profile does not match the grid");
  std::vector<double> negative(flux.size());
  std::transform(flux.begin(), flux.end(), negative.begin(), [](double j) { return j < 0.0 ? -j : 0.0; });
  return trapezoid(negative, grid.spacing());
}

BackflowIntegral integrate_backflow(const EncounterState& state, const ArmWeights& weights,
                                    double relative_threshold) {
  return integrate_with_scale(state, weights, flux_profile(state, weights), relative_threshold);
}

MomentumSpectrum momentum_spectrum(const WaveField& field, const std::vector<double>& arm_wavenumbers) {
  const Grid& grid = field.grid;
  const double nyquist = std::numbers::pi / grid.spacing();
  for (double k : arm_wavenumbers) {
    if (std::abs(k) >= nyquist) {
      throw AliasingError("arm wavenumber " + std::to_string(k) + " 1/m reaches the Nyquist limit " +
                          std::to_string(nyquist) + " 1/m of the grid");
    }
  }
  const std::size_t n = grid.n_points();
  std::vector<Complex> data = field.amplitudes;
  detail::Fft fft(n);
  fft.forward(data);

  MomentumSpectrum out;
  out.bin_width = 2.0 * std::numbers::pi / (static_cast<double>(n) * grid.spacing());
  out.wavenumbers.resize(n);
  out.spectral_density.resize(n);
  const double scale = grid.spacing() * grid.spacing() / (2.0 * std::numbers::pi);
  const std::size_t half = n / 2;
  for (std::size_t s = 0; s < n; ++s) {
    // Ascending order: bins -half .. +half of the wrapped transform.
    const std::size_t j = (s + n - half) % n;
    out.wavenumbers[s] = detail::fft_wavenumber(j, n, grid.spacing());
    out.spectral_density[s] = scale * std::norm(data[j]);
  }
  for (double d : out.spectral_density) out.total_weight += d * out.bin_width;
  if (out.total_weight > 0.0) {
    for (double& d : out.spectral_density) d /= out.total_weight;
  }
  // The k = 0 bin straddles zero and counts half.
  for (std::size_t s = 0; s < n; ++s) {
    const double w = out.spectral_density[s] * out.bin_width;
    if (out.wavenumbers[s] < 0.0) out.negative_weight += w;
    if (out.wavenumbers[s] == 0.0) out.negative_weight += 0.5 * w;
  }
  return out;
}

MomentumSpectrum momentum_spectrum(const EncounterState& state, const ArmWeights& weights) {
  return momentum_spectrum(combine_factored(state, weights),
                           {state.geometry.k_free, state.geometry.k_pulsed});
}

std::vector<double> spectral_peaks(const MomentumSpectrum& spectrum, std::size_t count) {
  const std::vector<double>& d = spectrum.spectral_density;
  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    if (d[i] > d[i - 1] && d[i] >= d[i + 1]) maxima.push_back(i);
  }
  std::sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
  if (maxima.size() > count) maxima.resize(count);
  std::vector<double> out;
  for (std::size_t i : maxima) out.push_back(spectrum.wavenumbers[i]);
  std::sort(out.begin(), out.end());
  return out;
}

ClassicalBackflowCheck classical_backflow_check(const CondensateParams& params, double velocity,
                                                const ClassicalThresholds& thresholds) {
  ClassicalBackflowCheck out;
  const double a = params.oscillator_length();
  out.momentum_ratio = params.mass() * velocity * a / constants::hbar;
  out.size_ratio = velocity > 0.0 ? a * params.trap_frequency() / velocity : std::numeric_limits<double>::infinity();
  out.momentum_ok = out.momentum_ratio >= thresholds.min_momentum_ratio;
  out.size_ok = velocity > 0.0 && out.size_ratio <= thresholds.max_size_ratio;
  return out;
}

BackflowReport report(const EncounterState& state, const ArmWeights& weights) {
  return build_report(state, weights, true);
}

BackflowReport report_scalars(const EncounterState& state, const ArmWeights& weights) {
  return build_report(state, weights, false);
}

}  // namespace backflow
