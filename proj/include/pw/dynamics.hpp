#pragma once

/// \file
/// Coupled droplet/wave time stepping in nondimensional units: lengths in
/// Faraday wavelengths, time in Faraday periods. The wave pair (phi_hat,
/// eta_hat) lives on the dual lattice; the droplet is a point (x_p, v)
/// that exchanges momentum with the surface only during the contact window
/// at the start of each period.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pw/dtn.hpp"
#include "pw/params.hpp"
#include "pw/spectral.hpp"
#include "pw/topography.hpp"

namespace pw {

struct wave_state {
	cfield phi_hat; // surface velocity potential modes
	cfield eta_hat; // surface elevation modes
	double t = 0.0; // nondimensional time (Faraday periods)
};

struct droplet_state {
	double x = 0.0, y = 0.0;   // position on the periodic domain
	double vx = 0.0, vy = 0.0; // horizontal velocity
	double tau = 0.0;          // contact-phase clock in [0,1)
	bool in_contact = false;
};

enum class scheme { pseudo_spectral, central_difference };
enum class integrator { rk4, leapfrog };
enum class interp { fourier, bilinear };

struct step_config {
	double dt = 1.0 / 64.0;        // substep, must divide 1 evenly
	scheme sch = scheme::pseudo_spectral;
	integrator integ = integrator::rk4;
	double contact_fraction = 0.25; // leading fraction of the period in contact
	double impact_phase = 0.0;      // offset of the contact window within the period
	double cfl_safety = 0.5;
	bool dealias = false;
	interp eval_interp = interp::fourier;
	int dtn_sign = +1;              // debug: -1 selects the unstable branch
	double m_galerkin = 0.0;        // depth-correction truncation, 0 = auto
	topo_convention convention = topo_convention::deviation;
};

/// Contact-force profile over the phase clock: a half-sine pulse of peak
/// groups.f_peak over the leading contact window, zero elsewhere.
double forcing_f(double tau, const nondim_groups &groups,
                 double contact_fraction = 0.25, double impact_phase = 0.0);

struct cfl_report {
	bool ok = true;
	double dt_limit = 0.0;   // C * dx / c_max
	double c_max = 0.0;      // fastest resolved phase speed
	double k_limiting = 0.0; // wavenumber attaining it
};

/// Fastest resolved gravity-capillary phase speed vs. the advective limit.
cfl_report cfl_check(const fourier_basis &b, const nondim_groups &groups,
                     const step_config &sc);

/// One evolution engine per (grid, topography, groups) triple. Owns the
/// transforms and the assembled depth operator when the bottom is not flat.
class simulator {
public:
	simulator(const fourier_basis &b, const topography &topo,
	          const nondim_groups &groups, const step_config &sc,
	          std::vector<std::string> *warnings = nullptr);

	const fourier_basis &basis() const { return *basis_; }
	const nondim_groups &groups() const { return groups_; }
	const step_config &config() const { return sc_; }
	bool variable_depth() const { return dtn_op_.has_value(); }
	const dtn_operator *depth_operator() const {
		return dtn_op_ ? &*dtn_op_ : nullptr;
	}

	/// Wave-pair right-hand side at time t (parametric forcing phase) with
	/// the droplet pressure term applied when `drop` is non-null and in
	/// contact. Outputs are written into dphi/deta.
	void rhs_wave(const wave_state &w, const droplet_state *drop,
	              cfield &dphi, cfield &deta) const;

	/// Droplet acceleration from the local surface gradient plus contact
	/// drag; meaningful only while in contact.
	void rhs_droplet(const droplet_state &drop, const wave_state &w,
	                 double &ax, double &ay) const;

	/// Advance one substep dt. During contact: half-step the wave pair,
	/// update v (midpoint-evaluated), advance x_p with the new v, second
	/// half-step. Out of contact the wave evolves alone and the droplet
	/// drifts ballistically. Throws numerical_error when the state goes
	/// non-finite.
	void step(wave_state &w, droplet_state *drop);

	/// Plain full-dt wave-pair step (no droplet), exposed for convergence
	/// and dispersion studies.
	void wave_step(wave_state &w);

	/// drop integrator history (leapfrog restarts with an RK4 bootstrap)
	void reset_history();

	/// fold B^{-1}A once so long droplet runs skip the per-call backsolve
	void precombine_depth_operator();

	wave_state make_state() const;

private:
	void rk4_wave(wave_state &w, const droplet_state *drop, double dt);
	void leapfrog_wave(wave_state &w, double dt);
	void post_step(wave_state &w);
	void deposit_delta(const droplet_state &drop, double amp, cfield &dphi) const;
	void surface_gradient(const wave_state &w, double x, double y,
	                      double &gx, double &gy) const;
	cfield apply_dtn(const cfield &phi_hat) const;

	const fourier_basis *basis_;
	topography topo_;
	nondim_groups groups_;
	step_config sc_;
	fft_engine fft_;
	std::optional<dtn_operator> dtn_op_;
	std::vector<double> flat_mult_; // flat-bottom DtN diagonal

	// leapfrog two-level history
	bool have_prev_ = false;
	cfield prev_phi_, prev_eta_;
};

struct trajectory_row {
	double t = 0.0;
	double x = 0.0, y = 0.0;
	double vx = 0.0, vy = 0.0;
	int in_contact = 0;
	int cavity = 0;
};

struct run_config; // full run description lives in pw/config.hpp

struct run_artifacts {
	std::vector<trajectory_row> trajectory;
	std::string out_dir;
	std::string trajectory_path;
	std::vector<std::string> snapshot_paths;
	std::string events_path;
	std::string stats_path;
	std::vector<std::string> warnings;
	double mean_speed_last10 = 0.0; // mean |v| over the trailing 10 periods
};

} // namespace pw
