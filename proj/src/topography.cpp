#include "pw/topography.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pw/errors.hpp"

namespace pw {

namespace {

void finalize(topography &topo) {
	auto [mn, mx] = std::minmax_element(topo.h.begin(), topo.h.end());
	topo.h_min = *mn;
	topo.h_max = *mx;
	if (!(topo.h_min > 0.0)) {
		throw config_error("topography depth must stay positive everywhere (min " +
		                   std::to_string(topo.h_min) + ")");
	}
}

// displacement wrapped into [-span/2, span/2): distances measured through
// the nearest periodic image, which keeps the ramps seamless at the domain
// edge
double wrap_disp(double d, double span) {
	d = std::fmod(d, span);
	if (d < -0.5 * span) d += span;
	if (d >= 0.5 * span) d -= span;
	return d;
}

} // namespace

topography make_flat(const grid &g, double depth) {
	if (!(depth > 0.0)) {
		throw config_error("flat topography depth must be positive");
	}
	topography topo;
	topo.g = make_grid(g.n, g.l);
	topo.h.assign(g.n * g.n, depth);
	finalize(topo);
	return topo;
}

topography make_cavities(const grid &g, const cavity_spec &spec) {
	if (spec.rows == 0 || spec.cols == 0) {
		throw config_error("cavity layout needs at least one row and column");
	}
	if (!(spec.well_width > 0.0) || spec.barrier_width < 0.0) {
		throw config_error("cavity widths must be positive (barrier may be zero)");
	}
	if (!(spec.deep_depth > 0.0) || !(spec.shallow_depth > 0.0)) {
		throw config_error("cavity depths must be positive");
	}
	if (!(spec.smoothing > 0.0)) {
		throw config_error("cavity smoothing width must be positive");
	}

	const double block_w = spec.cols * spec.well_width +
	                       (spec.cols - 1) * spec.barrier_width;
	const double block_h = spec.rows * spec.well_width +
	                       (spec.rows - 1) * spec.barrier_width;
	const double margin_x = 0.5 * (g.l - block_w);
	const double margin_y = 0.5 * (g.l - block_h);
	if (margin_x <= 0.0 || margin_y <= 0.0) {
		std::ostringstream msg;
		msg << "cavity block (" << block_w << " x " << block_h
		    << ") does not fit the domain of size " << g.l << " with margin";
		throw config_error(msg.str());
	}

	topography topo;
	topo.g = make_grid(g.n, g.l);
	topo.h.assign(g.n * g.n, spec.shallow_depth);

	const double s = spec.smoothing;
	const double lift = spec.deep_depth - spec.shallow_depth;
	const double pitch = spec.well_width + spec.barrier_width;
	const std::size_t n = g.n;
	const double dx = g.dx();

	for (std::size_t r = 0; r < spec.rows; ++r) {
		for (std::size_t c = 0; c < spec.cols; ++c) {
			const double cx = margin_x + c * pitch + 0.5 * spec.well_width;
			const double cy = margin_y + r * pitch + 0.5 * spec.well_width;
			for (std::size_t iy = 0; iy < n; ++iy) {
				const double dyw = wrap_disp(iy * dx - cy, g.l);
				const double ramp_y = 0.5 * (std::tanh((dyw + 0.5 * spec.well_width) / s) -
				                             std::tanh((dyw - 0.5 * spec.well_width) / s));
				for (std::size_t ix = 0; ix < n; ++ix) {
					const double dxw = wrap_disp(ix * dx - cx, g.l);
					const double ramp_x =
					    0.5 * (std::tanh((dxw + 0.5 * spec.well_width) / s) -
					           std::tanh((dxw - 0.5 * spec.well_width) / s));
					topo.h[iy * n + ix] += lift * ramp_x * ramp_y;
				}
			}
		}
	}
	finalize(topo);
	return topo;
}

topography make_from_samples(const grid &g, rfield samples) {
	if (samples.size() != g.n * g.n) {
		throw config_error("topography sample count does not match the grid");
	}
	topography topo;
	topo.g = make_grid(g.n, g.l);
	topo.h = std::move(samples);
	finalize(topo);
	return topo;
}

double spectral_quality(const topography &topo) {
	const fourier_basis basis(topo.g);
	fft_engine fft(topo.g.n);
	spectral_field spec = forward(fft, topo.h);

	const double k_cut = (2.0 / 3.0) * basis.kmax_axis();
	double total = 0.0, tail = 0.0;
	for (std::size_t m = 0; m < spec.modes.size(); ++m) {
		if (m == 0) continue; // the mean carries no roughness information
		const double e = std::norm(spec.modes[m]);
		total += e;
		if (basis.kabs(m) > k_cut) tail += e;
	}
	if (total <= 0.0) return 0.0; // perfectly flat
	return tail / total;
}

double max_gradient(const topography &topo) {
	const std::size_t n = topo.g.n;
	const double inv2dx = 1.0 / (2.0 * topo.g.dx());
	double worst = 0.0;
	for (std::size_t iy = 0; iy < n; ++iy) {
		const std::size_t up = (iy + 1) % n, dn = (iy + n - 1) % n;
		for (std::size_t ix = 0; ix < n; ++ix) {
			const std::size_t rt = (ix + 1) % n, lt = (ix + n - 1) % n;
			const double gx = (topo.h[iy * n + rt] - topo.h[iy * n + lt]) * inv2dx;
			const double gy = (topo.h[up * n + ix] - topo.h[dn * n + ix]) * inv2dx;
			worst = std::max(worst, std::hypot(gx, gy));
		}
	}
	return worst;
}

} // namespace pw
