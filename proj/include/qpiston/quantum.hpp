#pragma once

// Quantum layer for the expanding box: eigenstates, the exact
// auxiliary-potential solution, a unitary scaled-frame grid solver for the
// time-dependent Schrodinger equation, and overlap/fidelity evaluation.
//
// Representation: wavefunctions are stored in the scaled frame
//   psi(x, t) = a^{-1/2} exp[i adot x^2 / (2 a)] phi(x/a, t),
// so phi lives on the fixed unit box y in (0, 1) regardless of the wall
// position; the metadata (width a, width_rate adot) carries the frame. In
// this frame the Schrodinger equation becomes
//   i dphi/dt = -(1/(2 a^2)) d^2phi/dy^2 + w(t) y^2 phi,
//   w(t) = (a^2 k(t) + a(t) addot(t)) / 2,
// which vanishes identically when the stiffness is slaved (k = -addot/a).
// Normalized units hbar = m = a0 = k0 = 1 throughout.

#include "qpiston/types.hpp"

#include <Eigen/Core>

#include <complex>
#include <functional>

namespace qpiston {

using Complex = std::complex<double>;

/// Constant mode coefficients c_n (n = 1..size); unit norm within 1e-12.
struct ModeExpansion {
  Eigen::VectorXcd c;

  explicit ModeExpansion(Eigen::VectorXcd coeffs);
  int max_mode() const { return static_cast<int>(c.size()); }
};

/// Equal-amplitude superposition of the listed modes.
ModeExpansion equal_superposition(const std::vector<int>& modes);

/// Grid wavefunction phi(y_j), y_j = j/(N+1), j = 1..N (Dirichlet walls
/// implicit). `width`/`width_rate` are the instantaneous a(t), adot(t).
struct WaveFunction {
  Eigen::VectorXcd values;
  double time = 0.0;
  double width = 1.0;
  double width_rate = 0.0;

  int grid_size() const { return static_cast<int>(values.size()); }
  double grid_step() const { return 1.0 / (grid_size() + 1); }
  /// L2 norm of the lab wavefunction, by trapezoidal quadrature.
  double norm() const;
};

/// Instantaneous box eigenstate Psi_n(x; a) = sqrt(2/a) sin(n pi x / a)
/// as a WaveFunction of width a. Energies E_n(a) = n^2 pi^2 / (2 a^2).
WaveFunction eigenstate(int n, double a, int grid_size = 512);

double eigen_energy(int n, double a);

/// Samples an arbitrary lab-frame wavefunction psi(x) on the scaled grid of
/// the given width (width_rate metadata 0).
WaveFunction from_lab_function(const std::function<Complex(double)>& psi, double width,
                               int grid_size = 512);

/// Exact solution of the auxiliary-potential Schrodinger equation:
/// phi(y) = sum_n c_n exp(-i phase_integrals[n-1]) sqrt(2) sin(n pi y),
/// where phase_integrals[n-1] = \int_0^t E_n dt'. The quadratic-phase and
/// width factors are carried by the metadata.
WaveFunction exact_state(const ModeExpansion& modes, double wall, double wall_rate,
                         const Eigen::VectorXd& phase_integrals, int grid_size = 512);

/// Rescaled time s(t) = \int_0^t dt'/a^2 along a plan: exact per-segment
/// closed forms for bang-bang schedules, Simpson quadrature otherwise.
/// Phase integrals follow as \int E_n dt' = n^2 pi^2 s / 2.
double rescaled_time(const ExpansionPlan& plan, double t, int quad_samples = 4096);

Eigen::VectorXd mode_phase_integrals(const ExpansionPlan& plan, int n_max, double t,
                                     int quad_samples = 4096);

/// Lab-frame overlap <a|b>. Requires matching grid size and width; the
/// quadratic phases from differing width rates are included.
Complex overlap(const WaveFunction& a, const WaveFunction& b);

/// |<a|b>|^2 in [0, 1].
double fidelity(const WaveFunction& a, const WaveFunction& b);

/// Lab-frame overlap <Psi_n(.; box_width)|psi> with the analytic eigenstate
/// of a (possibly different) box width; integrand is truncated where the
/// target vanishes, so mismatched widths are handled exactly.
Complex overlap_with_eigenstate(const WaveFunction& psi, int n, double box_width);

double fidelity_vs_eigenstate(const WaveFunction& psi, int n, double box_width);

/// Populations |<Psi_n(.; width)|psi>|^2 of the instantaneous box modes,
/// n = 1..n_max.
Eigen::VectorXd mode_populations(const WaveFunction& psi, int n_max);

/// Mean box energy sum_n p_n E_n(width) over n = 1..n_max; `captured`
/// reports the accounted population mass (tail diagnostics).
double mean_energy(const WaveFunction& psi, int n_max = 32, double* captured = nullptr);

/// Time-dependent coefficients of the lab Hamiltonian: wall motion a(t)
/// (with rate and acceleration) and auxiliary stiffness k(t).
struct SchrodingerProblem {
  std::function<double(double)> wall;
  std::function<double(double)> wall_rate;
  std::function<double(double)> wall_accel;
  std::function<double(double)> stiffness;
};

/// Stiffness slaved to the plan's wall motion (k = u in normalized units);
/// the scaled-frame residual potential vanishes identically.
SchrodingerProblem slaved_problem(const ExpansionPlan& plan);

/// Same wall motion with the stiffness scaled by (1 + eps): the residual
/// potential w(t) y^2 no longer vanishes.
SchrodingerProblem perturbed_problem(const ExpansionPlan& plan, double eps);

struct EvolveOptions {
  double dt = 1e-4;
  int observer_stride = 0;  // call the observer every this many steps (0: off)
};

struct EvolveStats {
  double norm_drift = 0.0;    // |norm(final) - norm(initial)|
  bool resolution_ok = true;  // dt * max tracked frequency <= 0.1
  double max_dt_omega = 0.0;
  double suggested_dt = 0.0;  // populated when the resolution guard trips
  long steps = 0;
};

/// Unitary Crank-Nicolson (Cayley form) propagation of the scaled-frame
/// equation from psi.time to t_final. Midpoint coefficients per step; the
/// tridiagonal Hamiltonian keeps the update norm-preserving to roundoff.
/// Throws std::domain_error if the wall is not strictly positive.
WaveFunction evolve_pde(const WaveFunction& psi, const SchrodingerProblem& problem,
                        double t_final, const EvolveOptions& opts = {},
                        EvolveStats* stats = nullptr,
                        const std::function<void(const WaveFunction&)>& observer = {});

}  // namespace qpiston
