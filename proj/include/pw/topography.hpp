#pragma once

/// \file
/// Bottom-depth fields on the periodic mesh. Depth is stored as H(x,y) > 0
/// in units of the reference depth (H == 1 at the reference), so the deep
/// parts of a cavity layout sit near 1 and thin films well below it.

#include <cstddef>

#include "pw/grid.hpp"
#include "pw/spectral.hpp"

namespace pw {

struct topography {
	grid g;
	rfield h;          // depth samples, row-major, strictly positive
	double h_min = 0.0;
	double h_max = 0.0;

	bool is_flat(double tol = 1e-14) const { return h_max - h_min <= tol; }
};

/// Rectangular cavity layout: rows x cols square wells of side well_width,
/// separated by barrier_width, centered in the domain, blended with tanh
/// ramps of width `smoothing`. All lengths in Faraday-wavelength units,
/// depths in reference-depth units.
struct cavity_spec {
	std::size_t rows = 1;
	std::size_t cols = 2;
	double well_width = 2.0;
	double barrier_width = 0.5;
	double deep_depth = 1.0;    // depth inside wells
	double shallow_depth = 0.1; // depth everywhere else
	double smoothing = 0.25;    // tanh ramp width s
};

/// Uniform depth h0 everywhere (h0 > 0).
topography make_flat(const grid &g, double depth = 1.0);

/// Build the blended cavity layout. Throws config_error when the well block
/// does not fit the domain with positive margin, when depths are not
/// positive, or when widths/smoothing are non-positive.
topography make_cavities(const grid &g, const cavity_spec &spec);

/// Wrap an externally supplied depth field (validates positivity).
topography make_from_samples(const grid &g, rfield samples);

/// High-wavenumber contamination diagnostic: the ratio of spectral energy
/// at |k| above two thirds of the per-axis Nyquist to the total energy of
/// the mean-removed field. Smooth, well-resolved topographies sit well
/// below 1e-3; hard-edged ones well above.
double spectral_quality(const topography &topo);

/// threshold above which spectral_quality should trigger a warning
inline constexpr double k_spectral_quality_warn = 1e-3;

/// max |grad H| via centered differences (ramp-steepness diagnostic)
double max_gradient(const topography &topo);

} // namespace pw
