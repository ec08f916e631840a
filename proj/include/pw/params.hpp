#pragma once

/// \file
/// Physical parameter sets and their reduction to the dimensionless groups
/// the solver actually runs on. Everything dimensional is SI.

#include <string>
#include <vector>

namespace pw {

struct fluid_params {
	double density = 0.0;             // rho [kg/m^3]
	double surface_tension = 0.0;     // sigma [N/m]
	double kinematic_viscosity = 0.0; // nu [m^2/s]
	double drop_mass = 0.0;           // m [kg]
	double drop_damping = 0.0;        // c, dimensionless contact drag constant
};

struct forcing_params {
	double frequency_hz = 0.0; // shaker frequency omega [Hz]
	double gamma = 0.0;        // Gamma, peak shaker acceleration / g
	double gravity = 9.81;     // g [m/s^2]
};

/// Subharmonic response scales of the vibrated bath.
struct faraday_scales {
	double t_f = 0.0;      // Faraday period, 2/omega [s]
	double k_f = 0.0;      // Faraday wavenumber [1/m]
	double lambda_f = 0.0; // Faraday wavelength, 2*pi/k_f [m]
};

/// Dimensionless groups governing the nondimensional evolution, plus the
/// few precomputed redimensionalization constants the droplet equation of
/// motion needs (so the stepping code never sees SI quantities).
struct nondim_groups {
	double mu = 0.0;    // depth ratio h/lambda_f
	double g_group = 0.0; // G = g*t_f^2/lambda_f
	double bo = 0.0;    // Bond-like group sigma*t_f^2/(rho*lambda_f^3)
	double re = 0.0;    // viscous group 2*nu*t_f/lambda_f^2 (damping multiplier)
	double m_group = 0.0; // droplet mass ratio m/(rho*lambda_f^3)
	double gamma = 0.0; // forcing ratio, passed through
	double c = 0.0;     // contact drag constant, passed through

	// contact-force peak 8*pi^2/(omega*t_f) == 4*pi^2 for subharmonic response
	double f_peak = 0.0;
	// droplet acceleration prefactor 8*t_f*g*pi^2/(lambda_f*omega)
	double drop_force_coeff = 0.0;
	// droplet contact-drag prefactor 8*c*g*pi^2/omega
	double drop_damp_coeff = 0.0;
	// Faraday period in seconds, for per-minute rate conversions
	double t_f_seconds = 0.0;
};

/// Finite-depth gravity-capillary root: solves
///   (pi*omega)^2 = (g*k + sigma*k^3/rho) * tanh(k*h)
/// for the unique positive k by bracketed bisection (relative tolerance
/// 1e-12) and derives the subharmonic period and wavelength.
/// depth_h is the reference bath depth in meters. Throws config_error on
/// non-positive inputs.
faraday_scales compute_faraday_scales(const fluid_params &fluid,
                                      const forcing_params &forcing,
                                      double depth_h);

/// Reduce dimensional parameters to the group set above. Throws
/// config_error when any input is non-positive (gamma may be zero).
nondim_groups compute_nondim_groups(const fluid_params &fluid,
                                    const forcing_params &forcing,
                                    const faraday_scales &scales,
                                    double depth_h);

struct validation_report {
	std::vector<std::string> errors;
	std::vector<std::string> warnings;
	bool ok() const { return errors.empty(); }
};

struct sim_config; // defined in pw/config.hpp

/// Range/consistency checks over a full run configuration. Errors are
/// fatal (bad signs, broken grid sizes, missing required values); warnings
/// flag suspicious-but-runnable setups such as forcing above a user-supplied
/// threshold estimate.
validation_report validate(const sim_config &cfg);

} // namespace pw
