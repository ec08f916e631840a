#pragma once

/// \file
/// Fourier-side plumbing shared by every solver component: the dual lattice
/// bookkeeping, normalized transforms, spectral/stencil Laplacians and
/// off-grid evaluation of band-limited fields.
///
/// Transform convention (fixed across the code base): the forward transform
/// carries the 1/N^2 factor, so f_hat(0) is the mean of the field and
/// f(x_j) = sum_k f_hat(k) exp(+i k.x_j) with no further scaling.

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "pw/grid.hpp"

namespace pw {

using cplx = std::complex<double>;
using cfield = std::vector<cplx>;  // N*N modes or samples, row-major (iy*n+ix)
using rfield = std::vector<double>;

/// Dual-lattice description for a periodic square grid. Mode (ix,iy) at
/// flat index iy*n+ix carries the integer frequency pair (nx,ny) where
/// nx = ix for ix < n/2 and ix-n otherwise (Nyquist column maps to -n/2),
/// and the physical wavevector k = (2*pi/l)*(nx,ny).
class fourier_basis {
public:
	explicit fourier_basis(const grid &g);

	const grid &g() const { return grid_; }
	std::size_t n() const { return grid_.n; }
	std::size_t modes() const { return grid_.cells(); }

	int freq(std::size_t i) const { return freq_[i]; }       // per-axis integer frequency
	double kx(std::size_t m) const { return k1_[m % grid_.n]; }
	double ky(std::size_t m) const { return k1_[m / grid_.n]; }
	double ksq(std::size_t m) const { return ksq_[m]; }
	double kabs(std::size_t m) const { return kabs_[m]; }

	/// flat index of the conjugate mode (-nx,-ny)
	std::size_t conj_index(std::size_t m) const;

	/// largest resolved |k| (corner of the dual lattice)
	double kmax() const;
	/// largest per-axis |k| (Nyquist)
	double kmax_axis() const;

private:
	grid grid_;
	std::vector<int> freq_;    // length n
	std::vector<double> k1_;   // per-axis wavenumber, length n
	std::vector<double> ksq_;  // |k|^2 per mode
	std::vector<double> kabs_; // |k| per mode
};

/// Modal coefficients plus the claim that they came from (and return to) a
/// real-valued field. The claim is an assertion of intent, checked by
/// hermitian_error where the invariant matters.
struct spectral_field {
	cfield modes;
	bool real_parity = true;
};

/// FFT engine bound to one grid size. Plans are created once (FFTW_ESTIMATE,
/// so planning is deterministic run to run) and reused; creation is guarded
/// internally so independent engines can be built from worker threads.
class fft_engine {
public:
	explicit fft_engine(std::size_t n);
	~fft_engine();
	fft_engine(const fft_engine &) = delete;
	fft_engine &operator=(const fft_engine &) = delete;

	std::size_t n() const { return n_; }

	/// physical samples -> modes, including the 1/N^2 normalization
	void forward(const cfield &in, cfield &out) const;
	/// modes -> physical samples (plain conjugate-exponent sum)
	void inverse(const cfield &in, cfield &out) const;

private:
	struct impl;
	std::size_t n_;
	std::unique_ptr<impl> impl_;
};

// real-field conveniences built on the engine above
spectral_field forward(const fft_engine &fft, const rfield &f);
rfield inverse_real(const fft_engine &fft, const spectral_field &f);
rfield inverse_real(const fft_engine &fft, const cfield &modes);
cfield inverse(const fft_engine &fft, const cfield &modes);
cfield forward_c(const fft_engine &fft, const cfield &samples);

/// multiply by -|k|^2 in place semantics: returns the transformed copy
cfield laplacian_spectral(const fourier_basis &b, const cfield &modes);

/// 5-point periodic stencil (f[i+1]+f[i-1]+f[j+1]+f[j-1]-4f)/dx^2
rfield laplacian_cd2(const grid &g, const rfield &f);

/// Trigonometric-interpolant value of a real field at an off-grid point.
/// Direct mode sum, O(N^2); exact (to roundoff) at grid points.
double eval_at(const fourier_basis &b, const cfield &modes, double x, double y);

/// Gradient of the trigonometric interpolant at (x,y).
void grad_at(const fourier_basis &b, const cfield &modes, double x, double y,
             double &gx, double &gy);

/// Bilinear fallback for eval/grad on materialized real-space samples.
double eval_bilinear(const grid &g, const rfield &f, double x, double y);
void grad_bilinear(const grid &g, const rfield &f, double x, double y,
                   double &gx, double &gy);

/// max_k |f(-k) - conj(f(k))|, the deviation from real-field parity
double hermitian_error(const fourier_basis &b, const cfield &modes);

/// zero every mode with max(|nx|,|ny|) > n/3 (2/3-rule mask)
void dealias(const fourier_basis &b, cfield &modes);

/// sum_k |modes|^2 (Parseval partner of the mean-square of samples)
double spectral_energy(const cfield &modes);

} // namespace pw
