#include "pw/dtn.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "pw/errors.hpp"

namespace pw {

cfield dtn_flat(const fourier_basis &b, const cfield &q_hat, double mu) {
	if (q_hat.size() != b.modes()) {
		throw std::invalid_argument("dtn_flat: mode count mismatch");
	}
	if (!(mu > 0.0)) {
		throw config_error("dtn_flat: depth ratio mu must be positive");
	}
	cfield out(q_hat.size());
	for (std::size_t m = 0; m < q_hat.size(); ++m) {
		const double k = b.kabs(m);
		out[m] = (m == 0) ? cplx(0.0, 0.0)
		                  : q_hat[m] * (mu * k * std::tanh(mu * k));
	}
	return out;
}

namespace {

// Overflow-safe hyperbolic ratios (a >= 0 throughout; arguments can reach
// a few hundred on fine grids, where the naive cosh would overflow).

// cosh(b)/cosh(a)
double cosh_ratio(double b, double a) {
	b = std::abs(b);
	return std::exp(b - a) * (1.0 + std::exp(-2.0 * b)) /
	       (1.0 + std::exp(-2.0 * a));
}

// sinh(b)/cosh(a)
double sinh_over_cosh(double b, double a) {
	const double sign = (b < 0.0) ? -1.0 : 1.0;
	b = std::abs(b);
	return sign * std::exp(b - a) * (1.0 - std::exp(-2.0 * b)) /
	       (1.0 + std::exp(-2.0 * a));
}

// 1/cosh(a)
double sech(double a) {
	return 2.0 * std::exp(-a) / (1.0 + std::exp(-2.0 * a));
}

} // namespace

dtn_operator::dtn_operator(const fourier_basis &b, const topography &topo,
                           double mu, double m_galerkin,
                           topo_convention convention,
                           std::vector<std::string> *warnings)
    : basis_(&b), mu_(mu), convention_(convention) {
	if (!(mu > 0.0)) {
		throw config_error("dtn: depth ratio mu must be positive");
	}
	if (topo.g.n != b.n() || topo.h.size() != b.modes()) {
		throw config_error("dtn: topography grid does not match the basis");
	}

	const std::size_t n = b.n();
	const double auto_m = (2.0 * M_PI / b.g().l) * std::floor(n / 3.0);
	m_galerkin_ = (m_galerkin > 0.0) ? m_galerkin : auto_m;
	// allow tiny slop so a shell sitting exactly on M is retained
	const double m_eff = m_galerkin_ * (1.0 + 1e-12);
	if (m_galerkin_ > b.kmax_axis() * (1.0 + 1e-12)) {
		std::ostringstream msg;
		msg << "m_galerkin = " << m_galerkin_
		    << " exceeds the grid Nyquist wavenumber " << b.kmax_axis();
		throw config_error(msg.str());
	}

	if (warnings) {
		const double q = spectral_quality(topo);
		if (q > k_spectral_quality_warn) {
			std::ostringstream msg;
			msg << "topography spectral tail ratio " << q
			    << " exceeds " << k_spectral_quality_warn
			    << "; consider more smoothing or a finer grid";
			warnings->push_back(msg.str());
		}
	}

	// Source columns cover every oscillating mode that has a negated lattice
	// partner. For even n the -n/2 frequency line is its own mirror with an
	// unpaired sign choice, so admitting it as a source would leak a
	// conjugate-symmetry error the size of the bottom spectrum at that line;
	// those modes sit beyond the dealias shell and carry no resolved content.
	const int nyq = -static_cast<int>(n) / 2;
	const bool has_nyq_line = (n % 2 == 0);
	for (std::size_t m = 0; m < b.modes(); ++m) {
		if (m != 0 && b.kabs(m) <= m_eff) retained_.push_back(m);
		const bool on_nyquist =
		    has_nyq_line && (b.freq(m % n) == nyq || b.freq(m / n) == nyq);
		if (m != 0 && !on_nyquist) source_modes_.push_back(m);
	}

	flat_mult_.resize(b.modes());
	flat_mult_[0] = 0.0;
	for (std::size_t m = 1; m < b.modes(); ++m) {
		const double k = b.kabs(m);
		flat_mult_[m] = mu_ * k * std::tanh(mu_ * k);
	}
	sech2_.resize(retained_.size());
	for (std::size_t r = 0; r < retained_.size(); ++r) {
		const double s = sech(mu_ * b.kabs(retained_[r]));
		sech2_[r] = s * s;
	}

	// Projected operators. For one source mode k the divergence-form field
	// is e^{ik.x} f_k(H(x)) u with a constant vector u, so a single
	// transform of the scalar product e^{ik.x} f_k(H(x)) gives every
	// projection at once: row w picks up i (w.u) P_hat(w).
	fft_engine fft(n);
	const std::size_t rows = retained_.size();
	a_.resize(rows, source_modes_.size());
	b_.resize(rows, rows);

	cfield prod(n * n), prod_hat;
	std::vector<cplx> phase_x(n), phase_y(n);

	auto fill_column = [&](std::size_t mode, bool response, Eigen::MatrixXcd &mat,
	                       std::size_t col) {
		const double ka = b.kabs(mode);
		const double a_arg = mu_ * ka;
		const std::size_t ix0 = mode % n, iy0 = mode / n;
		// exact roots of unity for e^{i k.x} on the mesh
		for (std::size_t i = 0; i < n; ++i) {
			phase_x[i] = std::polar(1.0, 2.0 * M_PI * b.freq(ix0) * double(i) / double(n));
			phase_y[i] = std::polar(1.0, 2.0 * M_PI * b.freq(iy0) * double(i) / double(n));
		}
		const double se = sech(a_arg);
		for (std::size_t iy = 0; iy < n; ++iy) {
			for (std::size_t ix = 0; ix < n; ++ix) {
				const double h = topo.h[iy * n + ix];
				double f;
				if (!response) {
					// source factor: sinh of the depth deviation (vanishes on the
					// reference depth) over cosh(mu k)
					const double arg = (convention_ == topo_convention::deviation)
					                       ? a_arg * (h - 1.0)
					                       : a_arg * h;
					f = sinh_over_cosh(arg, a_arg);
				} else {
					const double arg = (convention_ == topo_convention::deviation)
					                       ? a_arg * h
					                       : a_arg * (1.0 + h);
					f = cosh_ratio(arg, a_arg) * se;
				}
				prod[iy * n + ix] = phase_x[ix] * phase_y[iy] * f;
			}
		}
		fft.forward(prod, prod_hat);
		const double ux = response ? b.kx(mode) / (ka * ka) : b.kx(mode) / ka;
		const double uy = response ? b.ky(mode) / (ka * ka) : b.ky(mode) / ka;
		for (std::size_t r = 0; r < rows; ++r) {
			const std::size_t w = retained_[r];
			const double wu = b.kx(w) * ux + b.ky(w) * uy;
			mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
			    cplx(0.0, 1.0) * wu * prod_hat[w];
		}
	};

	for (std::size_t c = 0; c < source_modes_.size(); ++c) {
		fill_column(source_modes_[c], false, a_, c);
	}
	for (std::size_t c = 0; c < rows; ++c) {
		fill_column(retained_[c], true, b_, c);
	}

	b_lu_.compute(b_);
	const double rc = b_lu_.rcond();
	condition_ = (rc > 0.0) ? 1.0 / rc : std::numeric_limits<double>::infinity();
	if (!(condition_ < k_condition_limit)) {
		std::ostringstream msg;
		msg << "projected response system is ill-conditioned (cond ~ "
		    << condition_ << ", limit " << k_condition_limit
		    << "); reduce m_galerkin or smooth the topography";
		throw numerical_error(msg.str());
	}
}

topo_coefficients dtn_operator::solve_coefficients(const cfield &q_hat) const {
	if (q_hat.size() != basis_->modes()) {
		throw std::invalid_argument("dtn solve: mode count mismatch");
	}
	Eigen::VectorXcd src(static_cast<Eigen::Index>(source_modes_.size()));
	for (std::size_t c = 0; c < source_modes_.size(); ++c) {
		src[static_cast<Eigen::Index>(c)] = q_hat[source_modes_[c]];
	}
	Eigen::VectorXcd x;
	if (combined_ready_) {
		x = combined_ * src;
	} else {
		x = b_lu_.solve(a_ * src);
	}
	topo_coefficients out;
	out.mode_index.assign(retained_.begin(), retained_.end());
	out.x.resize(retained_.size());
	for (std::size_t r = 0; r < retained_.size(); ++r) {
		out.x[r] = x[static_cast<Eigen::Index>(r)];
	}
	return out;
}

cfield dtn_operator::apply(const cfield &q_hat) const {
	topo_coefficients coeffs = solve_coefficients(q_hat);
	cfield out(q_hat.size());
	for (std::size_t m = 0; m < q_hat.size(); ++m) {
		out[m] = q_hat[m] * flat_mult_[m];
	}
	for (std::size_t r = 0; r < retained_.size(); ++r) {
		out[retained_[r]] += mu_ * sech2_[r] * coeffs.x[r];
	}
	out[0] = cplx(0.0, 0.0);
	return out;
}

cfield dtn_operator::potential_at_depth(const cfield &q_hat,
                                        const topo_coefficients &coeffs,
                                        double z) const {
	// Mode coefficients of the harmonic continuation at height z (z = 0 is
	// the surface; small positive overshoot is fine for finite differencing,
	// the expressions are entire in z).
	const fourier_basis &b = *basis_;
	cfield out(q_hat.size());
	out[0] = q_hat[0];
	for (std::size_t m = 1; m < q_hat.size(); ++m) {
		const double a = mu_ * b.kabs(m);
		out[m] = q_hat[m] * cosh_ratio(a * (z + 1.0), a);
	}
	for (std::size_t r = 0; r < coeffs.mode_index.size(); ++r) {
		const std::size_t m = coeffs.mode_index[r];
		const double k = b.kabs(m);
		const double a = mu_ * k;
		const double s = sech(a);
		out[m] += coeffs.x[r] * (sinh_over_cosh(a * z, a) * s / k);
	}
	return out;
}

void dtn_operator::precombine() {
	if (combined_ready_) return;
	combined_ = b_lu_.solve(a_);
	combined_ready_ = true;
}

} // namespace pw
