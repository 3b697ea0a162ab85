#pragma once

// Closed-form arm wavefunctions at the encounter time, sampled on a uniform
// grid centred on the common centre of mass.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "backflow/extended.hpp"
#include "backflow/kinematics.hpp"
#include "backflow/model.hpp"
#include "backflow/pulses.hpp"

namespace backflow {

/// Uniform, symmetric sampling of [center - half_width, center + half_width].
class Grid {
 public:
  /// Throws DomainError unless half_width > 0 and n_points is odd and >= 3.
  Grid(double center, double half_width, std::size_t n_points);

  double center() const { return center_; }
  double half_width() const { return half_width_; }
  std::size_t n_points() const { return n_points_; }
  double spacing() const { return spacing_; }
  std::size_t center_index() const { return n_points_ / 2; }
  /// x_i - center, exactly antisymmetric about the middle sample.
  double offset(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(center_index())) * spacing_;
  }
  double x(std::size_t i) const { return center_ + offset(i); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double center_;
  double half_width_;
  std::size_t n_points_;
  double spacing_;
};

struct WaveField {
  Grid grid;
  std::vector<Complex> amplitudes;
  double time = 0.0;

  /// sum |psi|^2 * spacing
  double norm() const;
  std::vector<double> density() const;
};

/// Scalars that fix both arms at the encounter. All profiles follow from
/// these in closed form, so a sweep computes them once.
struct EncounterGeometry {
  double time = 0.0;         ///< T_f, s
  Extended center;           ///< x_c of the free arm at T_f, m
  double center_offset = 0;  ///< x_pulsed - x_free at T_f, m (zero up to rounding for a solved encounter)
  double mass = 0.0;
  double expansion = 1.0;    ///< b(T_f)
  double width = 0.0;        ///< a_x * b, m
  double chirp = 0.0;        ///< m * b' / (2 hbar b), 1/m^2
  double k_free = 0.0;       ///< m v_free(T_f) / hbar, 1/m
  double k_pulsed = 0.0;     ///< m v_pulsed(T_f) / hbar, 1/m
  double q = 0.0;            ///< (m/hbar)(v_N + g T_N - v_0), 1/m
  Extended theta_free;       ///< unwrapped scalar phase of the free arm, rad
  Extended theta_pulsed;     ///< unwrapped scalar phase of the pulsed arm, rad
  double delta_theta = 0.0;  ///< theta_pulsed - theta_free reduced to (-pi, pi]

  /// |phi_CM(u)|, 1/sqrt(m)
  double envelope(double u) const;
  /// Gradient of the free-arm phase, k_free + 2 chirp u.
  double grad_theta(double u) const { return k_free + 2.0 * chirp * u; }
  /// phi_CM(u) including the expansion chirp.
  Complex com(double u) const;
  Complex free_arm(double u) const;
  Complex pulsed_arm(double u) const;
};

/// Reduce both arm trajectories to the encounter scalars at time T_f.
/// q is taken from its closed form and checked against the velocity
/// difference (ConsistencyError beyond 1e-9 relative).
EncounterGeometry encounter_geometry(const CondensateParams& params, const Environment& env,
                                     const ArmTrajectory& free_arm, const ArmTrajectory& pulsed_arm,
                                     double encounter_time);

/// Weight-independent profiles shared by every observable.
struct EncounterState {
  Grid grid;
  EncounterGeometry geometry;
  std::vector<double> envelope;       ///< R(x)
  std::vector<double> theta_gradient; ///< grad theta(x), 1/m
  std::vector<Complex> com;           ///< phi_CM(x - x_c)
};

EncounterState make_encounter_state(const EncounterGeometry& geometry, const Grid& grid);

/// Uniform grid about the encounter centre resolving the envelope, the fringes
/// 2 pi / q and the local wavenumbers of both arms.
struct GridOptions {
  double half_width_widths = 8.0;     ///< half width in units of a_x * b
  double envelope_resolution = 50.0;  ///< samples per width
  double fringe_resolution = 20.0;    ///< samples per fringe wavelength
  double nyquist_margin = 4.0;        ///< pi/spacing over the largest local wavenumber
};
Grid auto_grid(const EncounterGeometry& geometry, const GridOptions& options = {});
/// Same extent as auto_grid with an explicit point count.
Grid auto_grid(const EncounterGeometry& geometry, std::size_t n_points, const GridOptions& options = {});

/// (1/sqrt b) psi0((x - x_c)/b) exp(i m b' (x - x_c)^2 / (2 hbar b)) with x_c = grid.center().
std::vector<Complex> com_wavefunction(const Grid& grid, double t, const CondensateParams& params);

WaveField free_arm_wavefunction(const Grid& grid, double encounter_time, const CondensateParams& params,
                                const Environment& env, const TransitionParams& transition);

/// Throws ConsistencyError when a pulse of `trajectory` lies after encounter_time
/// or the trajectory was built for a different atom.
WaveField pulsed_arm_wavefunction(const Grid& grid, const ArmTrajectory& trajectory, double encounter_time,
                                  const CondensateParams& params, const Environment& env,
                                  const TransitionParams& transition);

/// c_f psi_f + c_b psi_b. GridMismatchError for different grids, ConsistencyError
/// for different times or envelopes that disagree by more than 1e-9 of the peak.
WaveField combine(const WaveField& free, const WaveField& pulsed, const ArmWeights& weights);

/// psi_f [c_f + c_b e^{i q u} e^{i (theta_b - theta_f)}] evaluated on the state grid.
WaveField combine_factored(const EncounterState& state, const ArmWeights& weights);

/// Arm fields evaluated from precomputed geometry.
WaveField free_arm_field(const EncounterState& state);
WaveField pulsed_arm_field(const EncounterState& state);

/// CSV with header x,re,im,density.
void write_csv(std::ostream& out, const WaveField& field);
/// Little-endian: n_points, spacing, center, time as float64, then interleaved re/im float64.
void write_binary(std::ostream& out, const WaveField& field);
WaveField read_binary(std::istream& in);

}  // namespace backflow
