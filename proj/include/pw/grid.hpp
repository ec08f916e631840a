#pragma once

#include <cstddef>

namespace pw {

/// Uniform periodic square mesh on [0,L)^2, lengths in Faraday-wavelength
/// units. Points are x_i = i*dx with dx = L/N; the right/top edges wrap.
struct grid {
	std::size_t n = 0; // points per side, power of two, >= 8
	double l = 0.0;    // domain side length

	double dx() const { return l / static_cast<double>(n); }
	std::size_t cells() const { return n * n; }

	// row-major index of (ix, iy); iy is the row (y), ix the column (x)
	std::size_t idx(std::size_t ix, std::size_t iy) const { return iy * n + ix; }
};

grid make_grid(std::size_t n, double l);

} // namespace pw
