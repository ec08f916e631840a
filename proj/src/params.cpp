#include "pw/params.hpp"

#include <cmath>
#include <sstream>

#include "pw/config.hpp"
#include "pw/errors.hpp"

namespace pw {

namespace {

void require_positive(double v, const char *name) {
	if (!(v > 0.0) || !std::isfinite(v)) {
		std::ostringstream msg;
		msg << name << " must be positive and finite, got " << v;
		throw config_error(msg.str());
	}
}

// residual of the finite-depth gravity-capillary relation at the
// subharmonic frequency: (g k + sigma k^3/rho) tanh(k h) - (pi omega)^2
double dispersion_residual(double k, const fluid_params &fl, double omega_hz,
                           double g, double h) {
	const double target = M_PI * omega_hz * M_PI * omega_hz;
	return (g * k + fl.surface_tension * k * k * k / fl.density) *
	           std::tanh(k * h) -
	       target;
}

} // namespace

faraday_scales compute_faraday_scales(const fluid_params &fluid,
                                      const forcing_params &forcing,
                                      double depth_h) {
	require_positive(fluid.density, "fluid.density");
	require_positive(fluid.surface_tension, "fluid.surface_tension");
	require_positive(forcing.frequency_hz, "forcing.frequency_hz");
	require_positive(forcing.gravity, "forcing.gravity");
	require_positive(depth_h, "domain.depth");

	// The residual is strictly increasing in k (every factor grows), so a
	// doubling search brackets the single positive root.
	double lo = 0.0;
	double hi = 1.0;
	while (dispersion_residual(hi, fluid, forcing.frequency_hz, forcing.gravity,
	                           depth_h) < 0.0) {
		hi *= 2.0;
		if (hi > 1e12) {
			throw numerical_error("dispersion root bracketing ran away");
		}
	}
	for (int iter = 0; iter < 400; ++iter) {
		const double mid = 0.5 * (lo + hi);
		if (dispersion_residual(mid, fluid, forcing.frequency_hz, forcing.gravity,
		                        depth_h) < 0.0) {
			lo = mid;
		} else {
			hi = mid;
		}
		if (hi - lo <= 1e-12 * hi) break;
	}
	faraday_scales scales;
	scales.k_f = 0.5 * (lo + hi);
	scales.lambda_f = 2.0 * M_PI / scales.k_f;
	scales.t_f = 2.0 / forcing.frequency_hz;
	return scales;
}

nondim_groups compute_nondim_groups(const fluid_params &fluid,
                                    const forcing_params &forcing,
                                    const faraday_scales &scales,
                                    double depth_h) {
	require_positive(fluid.density, "fluid.density");
	require_positive(fluid.surface_tension, "fluid.surface_tension");
	require_positive(fluid.kinematic_viscosity, "fluid.kinematic_viscosity");
	require_positive(fluid.drop_mass, "fluid.drop_mass");
	require_positive(fluid.drop_damping, "fluid.drop_damping");
	require_positive(forcing.frequency_hz, "forcing.frequency_hz");
	require_positive(forcing.gravity, "forcing.gravity");
	require_positive(scales.t_f, "faraday t_f");
	require_positive(scales.lambda_f, "faraday lambda_f");
	require_positive(depth_h, "domain.depth");
	if (forcing.gamma < 0.0 || !std::isfinite(forcing.gamma)) {
		throw config_error("forcing.gamma must be >= 0");
	}

	const double tf = scales.t_f, lam = scales.lambda_f;
	const double g = forcing.gravity, omega = forcing.frequency_hz;
	const double pi2 = M_PI * M_PI;

	nondim_groups groups;
	groups.mu = depth_h / lam;
	groups.g_group = g * tf * tf / lam;
	groups.bo = fluid.surface_tension * tf * tf / (fluid.density * lam * lam * lam);
	groups.re = 2.0 * fluid.kinematic_viscosity * tf / (lam * lam);
	groups.m_group = fluid.drop_mass / (fluid.density * lam * lam * lam);
	groups.gamma = forcing.gamma;
	groups.c = fluid.drop_damping;
	groups.f_peak = 8.0 * pi2 / (omega * tf);
	groups.drop_force_coeff = 8.0 * tf * g * pi2 / (lam * omega);
	groups.drop_damp_coeff = 8.0 * fluid.drop_damping * g * pi2 / omega;
	groups.t_f_seconds = tf;
	return groups;
}

namespace {

bool power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

void check_positive(validation_report &rep, double v, const char *name) {
	if (!(v > 0.0) || !std::isfinite(v)) {
		std::ostringstream msg;
		msg << name << " must be positive, got " << v;
		rep.errors.push_back(msg.str());
	}
}

} // namespace

validation_report validate(const sim_config &cfg) {
	validation_report rep;

	check_positive(rep, cfg.fluid.density, "fluid.density");
	check_positive(rep, cfg.fluid.surface_tension, "fluid.surface_tension");
	check_positive(rep, cfg.fluid.kinematic_viscosity, "fluid.kinematic_viscosity");
	check_positive(rep, cfg.forcing.frequency_hz, "forcing.frequency_hz");
	check_positive(rep, cfg.forcing.gravity, "forcing.gravity");
	check_positive(rep, cfg.depth, "domain.depth");
	check_positive(rep, cfg.domain_size, "domain.size");
	if (cfg.forcing.gamma < 0.0) {
		rep.errors.push_back("forcing.gamma must be >= 0");
	}
	if (cfg.droplet.enabled) {
		check_positive(rep, cfg.fluid.drop_mass, "fluid.drop_mass");
		check_positive(rep, cfg.fluid.drop_damping, "fluid.drop_damping");
	}

	if (!power_of_two(cfg.resolution) || cfg.resolution < 8) {
		rep.errors.push_back("domain.resolution must be a power of two >= 8, got " +
		                     std::to_string(cfg.resolution));
	}

	const double dt = cfg.numerics.dt;
	if (!(dt > 0.0)) {
		rep.errors.push_back("numerics.dt must be positive");
	} else {
		const double steps = 1.0 / dt;
		if (std::abs(steps - std::round(steps)) > 1e-9 * steps) {
			rep.errors.push_back(
			    "numerics.dt must divide one Faraday period evenly (1/dt = " +
			    std::to_string(steps) + ")");
		}
	}
	if (!(cfg.numerics.contact_fraction > 0.0) ||
	    cfg.numerics.contact_fraction >= 1.0) {
		rep.errors.push_back("numerics.contact_fraction must lie in (0,1)");
	}
	if (!(cfg.numerics.cfl_safety > 0.0)) {
		rep.errors.push_back("numerics.cfl_safety must be positive");
	}
	if (cfg.numerics.m_galerkin < 0.0) {
		rep.errors.push_back("numerics.m_galerkin must be >= 0 (0 = auto)");
	}
	if (!(cfg.run.t_max > 0.0)) {
		rep.errors.push_back("run.t_max must be positive");
	}

	if (cfg.topo == topo_kind::cavities) {
		const cavity_spec &cs = cfg.cavity;
		if (cs.rows == 0 || cs.cols == 0) {
			rep.errors.push_back("domain.cavity.rows/cols must be >= 1");
		}
		check_positive(rep, cs.well_width, "domain.cavity.well_width");
		check_positive(rep, cs.deep_depth, "domain.cavity.deep_depth");
		check_positive(rep, cs.shallow_depth, "domain.cavity.shallow_depth");
		check_positive(rep, cs.smoothing, "numerics.smoothing");
		if (cs.barrier_width < 0.0) {
			rep.errors.push_back("domain.cavity.barrier_width must be >= 0");
		}
	}
	if (cfg.topo == topo_kind::file && cfg.topo_file.empty()) {
		rep.errors.push_back("domain.topography = file requires domain.topo_file");
	}

	if (cfg.gamma_threshold_hint > 0.0 &&
	    cfg.forcing.gamma > cfg.gamma_threshold_hint) {
		std::ostringstream msg;
		msg << "forcing.gamma = " << cfg.forcing.gamma
		    << " exceeds the supplied instability-threshold hint "
		    << cfg.gamma_threshold_hint << "; expect supercritical behavior";
		rep.warnings.push_back(msg.str());
	}
	return rep;
}

} // namespace pw
