#pragma once

/// \file
/// Dirichlet-to-Neumann maps for the velocity potential on the free
/// surface: the closed-form flat-bottom multiplier and the Galerkin-
/// corrected operator over variable bottom depth.
///
/// The variable-depth construction follows the harmonic expansion
///   phi(x,z) = q_hat(0) + sum_k e^{ik.x} [ q_hat(k) cosh(mu k (z+1))/cosh(mu k)
///                                        + X_k sinh(mu k z)/(k cosh^2(mu k)) ]
/// whose surface normal derivative is
///   phi_z|_0 (k) = q_hat(k) mu k tanh(mu k) + mu X_k sech^2(mu k).
/// The unknown coefficients X_k absorb the bottom boundary condition: the
/// depth profile turns the per-mode condition into coupled divergence-form
/// source (A) and response (B) operators, truncated and projected onto the
/// retained test modes, leaving one square linear system per topography.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pw/spectral.hpp"
#include "pw/topography.hpp"

namespace pw {

/// How the depth samples enter the hyperbolic source/response factors.
/// `deviation` (default): source sinh(mu k (H-1)), response cosh(mu k H);
/// the source vanishes identically on flat reference depth. `total` keeps
/// the depth samples un-shifted inside both factors; it exists as a debug
/// switch because it fails the flat-reduction property and is useful only
/// for demonstrating that failure.
enum class topo_convention { deviation, total };

/// Solved topographic correction coefficients on the retained mode set.
struct topo_coefficients {
	std::vector<std::size_t> mode_index; // flat dual-lattice index per entry
	cfield x;                            // X_k, same order as mode_index
};

/// Flat-bottom map: out(k) = q_hat(k) * mu*|k| * tanh(mu*|k|), zero mode
/// excluded (a constant potential has no normal flux).
cfield dtn_flat(const fourier_basis &b, const cfield &q_hat, double mu);

/// condition-number ceiling for the projected response system
inline constexpr double k_condition_limit = 1e12;

class dtn_operator {
public:
	/// Assemble the projected source/response matrices for one topography.
	/// m_galerkin is the largest retained |k| for the correction (pass 0 to
	/// take the N/3 dealias-compatible shell). Emits a warning line through
	/// `warn` (may be null) when the topography looks under-smoothed.
	/// Throws numerical_error when the response matrix condition number
	/// exceeds k_condition_limit; config_error when m_galerkin exceeds the
	/// grid's resolved band.
	dtn_operator(const fourier_basis &b, const topography &topo, double mu,
	             double m_galerkin = 0.0,
	             topo_convention convention = topo_convention::deviation,
	             std::vector<std::string> *warnings = nullptr);

	const fourier_basis &basis() const { return *basis_; }
	double mu() const { return mu_; }
	double m_galerkin() const { return m_galerkin_; }
	std::size_t retained() const { return retained_.size(); }
	const std::vector<std::size_t> &retained_modes() const { return retained_; }

	/// Solve the projected system for the correction coefficients of one
	/// Dirichlet datum.
	topo_coefficients solve_coefficients(const cfield &q_hat) const;

	/// Full variable-depth map: flat multiplier plus mu*sech^2(mu k) X_k on
	/// the retained set.
	cfield apply(const cfield &q_hat) const;

	/// Sample the reconstructed potential on the grid at depth z (z in
	/// [-H_max, 0]; z = 0 returns the Dirichlet datum itself).
	cfield potential_at_depth(const cfield &q_hat, const topo_coefficients &coeffs,
	                          double z) const;

	/// reported 1/rcond of the factored response matrix
	double condition_estimate() const { return condition_; }

	// assembled matrices, exposed for cross-checks and debug export
	const Eigen::MatrixXcd &matrix_a() const { return a_; }
	const Eigen::MatrixXcd &matrix_b() const { return b_; }

	/// Precompute B^{-1} A so apply() skips the per-call backsolve. Costs
	/// one dense solve per source mode; worth it for long time loops.
	void precombine();

private:
	const fourier_basis *basis_;
	double mu_ = 0.0;
	double m_galerkin_ = 0.0;
	double condition_ = 0.0;
	topo_convention convention_ = topo_convention::deviation;

	std::vector<std::size_t> retained_;      // test/trial set (|k| <= M, k != 0)
	std::vector<double> flat_mult_;          // mu|k|tanh(mu|k|) per lattice mode
	std::vector<double> sech2_;              // sech^2(mu|k|) per retained mode

	Eigen::MatrixXcd a_; // retained x (N^2-1) source projection
	Eigen::MatrixXcd b_; // retained x retained response projection
	Eigen::PartialPivLU<Eigen::MatrixXcd> b_lu_;
	Eigen::MatrixXcd combined_; // B^{-1} A, filled by precombine()
	bool combined_ready_ = false;

	std::vector<std::size_t> source_modes_; // column order of a_ (all k != 0)
};

} // namespace pw
