#include "pw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "pw/errors.hpp"

namespace pw {

namespace {

// FFTW planning touches global state; serialize it. Execution through
// fftw_execute is safe concurrently on distinct plans/buffers.
std::mutex &planner_mutex() {
	static std::mutex m;
	return m;
}

bool power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

} // namespace

grid make_grid(std::size_t n, double l) {
	if (!power_of_two(n) || n < 8) {
		throw config_error("grid resolution must be a power of two >= 8, got " +
		                   std::to_string(n));
	}
	if (!(l > 0.0)) {
		throw config_error("domain size must be positive");
	}
	return grid{n, l};
}

fourier_basis::fourier_basis(const grid &g) : grid_(make_grid(g.n, g.l)) {
	const std::size_t n = grid_.n;
	freq_.resize(n);
	k1_.resize(n);
	const double dk = 2.0 * M_PI / grid_.l;
	for (std::size_t i = 0; i < n; ++i) {
		const int f = (i + n / 2 < n) ? static_cast<int>(i)
		                              : static_cast<int>(i) - static_cast<int>(n);
		freq_[i] = f;
		k1_[i] = dk * f;
	}
	ksq_.resize(n * n);
	kabs_.resize(n * n);
	for (std::size_t iy = 0; iy < n; ++iy) {
		for (std::size_t ix = 0; ix < n; ++ix) {
			const double kx = k1_[ix], ky = k1_[iy];
			const std::size_t m = iy * n + ix;
			ksq_[m] = kx * kx + ky * ky;
			kabs_[m] = std::sqrt(ksq_[m]);
		}
	}
}

std::size_t fourier_basis::conj_index(std::size_t m) const {
	const std::size_t n = grid_.n;
	const std::size_t ix = m % n, iy = m / n;
	return ((n - iy) % n) * n + (n - ix) % n;
}

double fourier_basis::kmax() const {
	return *std::max_element(kabs_.begin(), kabs_.end());
}

double fourier_basis::kmax_axis() const {
	const double dk = 2.0 * M_PI / grid_.l;
	return dk * static_cast<double>(grid_.n / 2);
}

struct fft_engine::impl {
	fftw_plan fwd = nullptr;
	fftw_plan bwd = nullptr;
	fftw_complex *in = nullptr;
	fftw_complex *out = nullptr;
};

fft_engine::fft_engine(std::size_t n) : n_(n), impl_(new impl) {
	if (!power_of_two(n) || n < 8) {
		throw config_error("fft size must be a power of two >= 8");
	}
	std::lock_guard<std::mutex> lock(planner_mutex());
	impl_->in = fftw_alloc_complex(n * n);
	impl_->out = fftw_alloc_complex(n * n);
	if (!impl_->in || !impl_->out) {
		throw std::bad_alloc();
	}
	const int ni = static_cast<int>(n);
	impl_->fwd = fftw_plan_dft_2d(ni, ni, impl_->in, impl_->out, FFTW_FORWARD,
	                              FFTW_ESTIMATE);
	impl_->bwd = fftw_plan_dft_2d(ni, ni, impl_->in, impl_->out, FFTW_BACKWARD,
	                              FFTW_ESTIMATE);
}

fft_engine::~fft_engine() {
	std::lock_guard<std::mutex> lock(planner_mutex());
	if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
	if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
	fftw_free(impl_->in);
	fftw_free(impl_->out);
}

void fft_engine::forward(const cfield &in, cfield &out) const {
	const std::size_t total = n_ * n_;
	if (in.size() != total) {
		throw std::invalid_argument("fft forward: field size mismatch");
	}
	std::memcpy(impl_->in, in.data(), total * sizeof(fftw_complex));
	fftw_execute(impl_->fwd);
	out.resize(total);
	const double scale = 1.0 / static_cast<double>(total);
	const auto *src = reinterpret_cast<const cplx *>(impl_->out);
	for (std::size_t i = 0; i < total; ++i) {
		out[i] = src[i] * scale;
	}
}

void fft_engine::inverse(const cfield &in, cfield &out) const {
	const std::size_t total = n_ * n_;
	if (in.size() != total) {
		throw std::invalid_argument("fft inverse: field size mismatch");
	}
	std::memcpy(impl_->in, in.data(), total * sizeof(fftw_complex));
	fftw_execute(impl_->bwd);
	out.resize(total);
	// std::complex<double> is layout-compatible with fftw_complex
	std::memcpy(static_cast<void *>(out.data()), impl_->out,
	            total * sizeof(fftw_complex));
}

spectral_field forward(const fft_engine &fft, const rfield &f) {
	cfield tmp(f.size());
	for (std::size_t i = 0; i < f.size(); ++i) tmp[i] = cplx(f[i], 0.0);
	spectral_field result;
	result.real_parity = true;
	fft.forward(tmp, result.modes);
	return result;
}

rfield inverse_real(const fft_engine &fft, const spectral_field &f) {
	return inverse_real(fft, f.modes);
}

rfield inverse_real(const fft_engine &fft, const cfield &modes) {
	cfield tmp;
	fft.inverse(modes, tmp);
	rfield out(tmp.size());
	for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
	return out;
}

cfield inverse(const fft_engine &fft, const cfield &modes) {
	cfield out;
	fft.inverse(modes, out);
	return out;
}

cfield forward_c(const fft_engine &fft, const cfield &samples) {
	cfield out;
	fft.forward(samples, out);
	return out;
}

cfield laplacian_spectral(const fourier_basis &b, const cfield &modes) {
	cfield out(modes.size());
	for (std::size_t m = 0; m < modes.size(); ++m) {
		out[m] = -b.ksq(m) * modes[m];
	}
	return out;
}

rfield laplacian_cd2(const grid &g, const rfield &f) {
	const std::size_t n = g.n;
	if (f.size() != n * n) {
		throw std::invalid_argument("laplacian_cd2: field size mismatch");
	}
	const double inv_dx2 = 1.0 / (g.dx() * g.dx());
	rfield out(n * n);
	for (std::size_t iy = 0; iy < n; ++iy) {
		const std::size_t up = (iy + 1) % n, dn = (iy + n - 1) % n;
		for (std::size_t ix = 0; ix < n; ++ix) {
			const std::size_t rt = (ix + 1) % n, lt = (ix + n - 1) % n;
			out[iy * n + ix] = (f[iy * n + rt] + f[iy * n + lt] + f[up * n + ix] +
			                    f[dn * n + ix] - 4.0 * f[iy * n + ix]) *
			                   inv_dx2;
		}
	}
	return out;
}

namespace {

// Phase tables let the O(N^2) mode sums run as two nested axis loops:
// e^{i k.x} = ex[ix-index of k] * ey[iy-index of k].
void phase_tables(const fourier_basis &b, double x, double y,
                  std::vector<cplx> &ex, std::vector<cplx> &ey) {
	const std::size_t n = b.n();
	ex.resize(n);
	ey.resize(n);
	const double dk = 2.0 * M_PI / b.g().l;
	for (std::size_t i = 0; i < n; ++i) {
		const double f = static_cast<double>(b.freq(i));
		ex[i] = std::polar(1.0, dk * f * x);
		ey[i] = std::polar(1.0, dk * f * y);
	}
}

} // namespace

double eval_at(const fourier_basis &b, const cfield &modes, double x, double y) {
	const std::size_t n = b.n();
	std::vector<cplx> ex, ey;
	phase_tables(b, x, y, ex, ey);
	cplx acc(0.0, 0.0);
	for (std::size_t iy = 0; iy < n; ++iy) {
		cplx row(0.0, 0.0);
		const cplx *line = modes.data() + iy * n;
		for (std::size_t ix = 0; ix < n; ++ix) {
			row += line[ix] * ex[ix];
		}
		acc += row * ey[iy];
	}
	return acc.real();
}

void grad_at(const fourier_basis &b, const cfield &modes, double x, double y,
             double &gx, double &gy) {
	const std::size_t n = b.n();
	std::vector<cplx> ex, ey;
	phase_tables(b, x, y, ex, ey);
	const double dk = 2.0 * M_PI / b.g().l;
	cplx accx(0.0, 0.0), accy(0.0, 0.0);
	for (std::size_t iy = 0; iy < n; ++iy) {
		cplx row(0.0, 0.0), rowkx(0.0, 0.0);
		const cplx *line = modes.data() + iy * n;
		for (std::size_t ix = 0; ix < n; ++ix) {
			const cplx term = line[ix] * ex[ix];
			row += term;
			rowkx += (dk * b.freq(ix)) * term;
		}
		accx += cplx(0.0, 1.0) * rowkx * ey[iy];
		accy += cplx(0.0, 1.0) * (dk * b.freq(iy)) * row * ey[iy];
	}
	gx = accx.real();
	gy = accy.real();
}

namespace {

double wrap_unit(double v, double span) {
	v = std::fmod(v, span);
	if (v < 0.0) v += span;
	return v;
}

} // namespace

double eval_bilinear(const grid &g, const rfield &f, double x, double y) {
	const std::size_t n = g.n;
	const double dx = g.dx();
	const double fx = wrap_unit(x, g.l) / dx;
	const double fy = wrap_unit(y, g.l) / dx;
	const std::size_t ix = static_cast<std::size_t>(fx) % n;
	const std::size_t iy = static_cast<std::size_t>(fy) % n;
	const double tx = fx - std::floor(fx), ty = fy - std::floor(fy);
	const std::size_t ix1 = (ix + 1) % n, iy1 = (iy + 1) % n;
	return f[iy * n + ix] * (1 - tx) * (1 - ty) + f[iy * n + ix1] * tx * (1 - ty) +
	       f[iy1 * n + ix] * (1 - tx) * ty + f[iy1 * n + ix1] * tx * ty;
}

void grad_bilinear(const grid &g, const rfield &f, double x, double y,
                   double &gx, double &gy) {
	// centered differences on the mesh, then bilinear interpolation of both
	// derivative fields
	const std::size_t n = g.n;
	const double inv2dx = 1.0 / (2.0 * g.dx());
	rfield dfx(n * n), dfy(n * n);
	for (std::size_t iy = 0; iy < n; ++iy) {
		const std::size_t up = (iy + 1) % n, dn = (iy + n - 1) % n;
		for (std::size_t ix = 0; ix < n; ++ix) {
			const std::size_t rt = (ix + 1) % n, lt = (ix + n - 1) % n;
			dfx[iy * n + ix] = (f[iy * n + rt] - f[iy * n + lt]) * inv2dx;
			dfy[iy * n + ix] = (f[up * n + ix] - f[dn * n + ix]) * inv2dx;
		}
	}
	gx = eval_bilinear(g, dfx, x, y);
	gy = eval_bilinear(g, dfy, x, y);
}

double hermitian_error(const fourier_basis &b, const cfield &modes) {
	double worst = 0.0;
	for (std::size_t m = 0; m < modes.size(); ++m) {
		const cplx mirror = std::conj(modes[b.conj_index(m)]);
		worst = std::max(worst, std::abs(modes[m] - mirror));
	}
	return worst;
}

void dealias(const fourier_basis &b, cfield &modes) {
	const std::size_t n = b.n();
	const int cut = static_cast<int>(n) / 3;
	for (std::size_t iy = 0; iy < n; ++iy) {
		for (std::size_t ix = 0; ix < n; ++ix) {
			if (std::abs(b.freq(ix)) > cut || std::abs(b.freq(iy)) > cut) {
				modes[iy * n + ix] = cplx(0.0, 0.0);
			}
		}
	}
}

double spectral_energy(const cfield &modes) {
	double acc = 0.0;
	for (const cplx &m : modes) acc += std::norm(m);
	return acc;
}

} // namespace pw
