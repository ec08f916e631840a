#include "pw/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "pw/errors.hpp"

namespace pw {

namespace {

double frac(double v) {
	v = std::fmod(v, 1.0);
	if (v < 0.0) v += 1.0;
	return v;
}

double wrap_domain(double v, double l) {
	v = std::fmod(v, l);
	if (v < 0.0) v += l;
	return v;
}

// analytic free-wave frequency of the nondimensional pair at wavenumber k
double omega_sq(double k, const nondim_groups &g) {
	return (g.g_group * k + g.bo * k * k * k) * std::tanh(g.mu * k);
}

} // namespace

double forcing_f(double tau, const nondim_groups &groups,
                 double contact_fraction, double impact_phase) {
	const double rel = frac(tau - impact_phase);
	if (rel >= contact_fraction) return 0.0;
	return groups.f_peak * std::sin(4.0 * M_PI * rel);
}

cfl_report cfl_check(const fourier_basis &b, const nondim_groups &groups,
                     const step_config &sc) {
	cfl_report rep;
	for (std::size_t m = 1; m < b.modes(); ++m) {
		const double k = b.kabs(m);
		const double c = std::sqrt(omega_sq(k, groups)) / k;
		if (c > rep.c_max) {
			rep.c_max = c;
			rep.k_limiting = k;
		}
	}
	rep.dt_limit = sc.cfl_safety * b.g().dx() / rep.c_max;
	rep.ok = sc.dt <= rep.dt_limit * (1.0 + 1e-12);
	return rep;
}

simulator::simulator(const fourier_basis &b, const topography &topo,
                     const nondim_groups &groups, const step_config &sc,
                     std::vector<std::string> *warnings)
    : basis_(&b), topo_(topo), groups_(groups), sc_(sc), fft_(b.n()) {
	if (topo.g.n != b.n()) {
		throw config_error("simulator: topography grid does not match the basis");
	}
	if (sc_.dtn_sign != 1 && sc_.dtn_sign != -1) {
		throw config_error("numerics.dtn_sign must be +1 or -1");
	}
	const double steps = 1.0 / sc_.dt;
	if (!(sc_.dt > 0.0) || std::abs(steps - std::round(steps)) > 1e-9 * steps) {
		throw config_error("numerics.dt must divide one Faraday period evenly");
	}
	flat_mult_.resize(b.modes(), 0.0);
	for (std::size_t m = 1; m < b.modes(); ++m) {
		const double k = b.kabs(m);
		flat_mult_[m] = groups_.mu * k * std::tanh(groups_.mu * k);
	}
	if (!topo.is_flat()) {
		dtn_op_.emplace(b, topo, groups_.mu, sc_.m_galerkin, sc_.convention,
		                warnings);
	}
}

wave_state simulator::make_state() const {
	wave_state w;
	w.phi_hat.assign(basis_->modes(), cplx(0.0, 0.0));
	w.eta_hat.assign(basis_->modes(), cplx(0.0, 0.0));
	return w;
}

cfield simulator::apply_dtn(const cfield &phi_hat) const {
	if (dtn_op_) return dtn_op_->apply(phi_hat);
	cfield out(phi_hat.size());
	for (std::size_t m = 0; m < phi_hat.size(); ++m) {
		out[m] = phi_hat[m] * flat_mult_[m];
	}
	return out;
}

void simulator::deposit_delta(const droplet_state &drop, double amp,
                              cfield &dphi) const {
	// unit-mass point source: coefficients e^{-i k.x_p} / L^2 across every
	// resolved mode (the central-difference scheme snaps to the nearest
	// cell, which is exactly the transform of the single-cell spike)
	const std::size_t n = basis_->n();
	const double l = basis_->g().l;
	double px = drop.x, py = drop.y;
	if (sc_.sch == scheme::central_difference) {
		const double dx = basis_->g().dx();
		px = wrap_domain(std::round(px / dx) * dx, l);
		py = wrap_domain(std::round(py / dx) * dx, l);
	}
	const double scale = amp / (l * l);
	const double dk = 2.0 * M_PI / l;
	std::vector<cplx> phase_x(n), phase_y(n);
	for (std::size_t i = 0; i < n; ++i) {
		phase_x[i] = std::polar(1.0, -dk * basis_->freq(i) * px);
		phase_y[i] = std::polar(1.0, -dk * basis_->freq(i) * py);
	}
	if (n % 2 == 0) {
		// the -n/2 frequency line has no negated partner; the conjugate-
		// symmetric band-limited spike carries the cosine there (identical to
		// the complex phase at snapped grid positions, where the sine is zero)
		phase_x[n / 2] = cplx(std::cos(dk * 0.5 * double(n) * px), 0.0);
		phase_y[n / 2] = cplx(std::cos(dk * 0.5 * double(n) * py), 0.0);
	}
	for (std::size_t iy = 0; iy < n; ++iy) {
		const cplx row = scale * phase_y[iy];
		cplx *line = dphi.data() + iy * n;
		for (std::size_t ix = 0; ix < n; ++ix) {
			line[ix] += row * phase_x[ix];
		}
	}
}

void simulator::rhs_wave(const wave_state &w, const droplet_state *drop,
                         cfield &dphi, cfield &deta) const {
	const std::size_t total = basis_->modes();
	dphi.assign(total, cplx(0.0, 0.0));
	deta.assign(total, cplx(0.0, 0.0));

	const cfield phi_z = apply_dtn(w.phi_hat);
	const double par_g =
	    groups_.g_group * (1.0 + groups_.gamma * std::cos(4.0 * M_PI * w.t));
	const double re = groups_.re;
	const double inv_mu = 1.0 / groups_.mu;
	const double sign = static_cast<double>(sc_.dtn_sign);

	if (sc_.sch == scheme::pseudo_spectral) {
		for (std::size_t m = 0; m < total; ++m) {
			const double ksq = basis_->ksq(m);
			dphi[m] = -par_g * w.eta_hat[m] - re * ksq * w.phi_hat[m] -
			          groups_.bo * ksq * w.eta_hat[m];
			deta[m] = sign * inv_mu * phi_z[m] - re * ksq * w.eta_hat[m];
		}
	} else {
		// stencil route: the Laplacian terms ride through real space on the
		// 5-point operator instead of the exact -|k|^2 multiplier
		const cfield phi_x = inverse(fft_, w.phi_hat);
		const cfield eta_x = inverse(fft_, w.eta_hat);
		const grid &g = basis_->g();
		const std::size_t n = g.n;
		rfield tmp_re(total), tmp_im(total);
		auto cd2_complex = [&](const cfield &f, cfield &out) {
			for (std::size_t i = 0; i < total; ++i) {
				tmp_re[i] = f[i].real();
				tmp_im[i] = f[i].imag();
			}
			const rfield lre = laplacian_cd2(g, tmp_re);
			const rfield lim = laplacian_cd2(g, tmp_im);
			out.resize(total);
			for (std::size_t i = 0; i < total; ++i) out[i] = cplx(lre[i], lim[i]);
		};
		cfield lap_phi_x, lap_eta_x;
		cd2_complex(phi_x, lap_phi_x);
		cd2_complex(eta_x, lap_eta_x);
		const cfield lap_phi = forward_c(fft_, lap_phi_x);
		const cfield lap_eta = forward_c(fft_, lap_eta_x);
		(void)n;
		for (std::size_t m = 0; m < total; ++m) {
			dphi[m] = -par_g * w.eta_hat[m] + re * lap_phi[m] +
			          groups_.bo * lap_eta[m];
			deta[m] = sign * inv_mu * phi_z[m] + re * lap_eta[m];
		}
	}

	if (drop) {
		const double f = forcing_f(frac(w.t), groups_, sc_.contact_fraction,
		                           sc_.impact_phase);
		if (f != 0.0) {
			const double amp = -groups_.g_group * groups_.m_group * f;
			deposit_delta(*drop, amp, dphi);
		}
	}
}

void simulator::surface_gradient(const wave_state &w, double x, double y,
                                 double &gx, double &gy) const {
	if (sc_.eval_interp == interp::fourier) {
		grad_at(*basis_, w.eta_hat, x, y, gx, gy);
	} else {
		const cfield eta_x = inverse(fft_, w.eta_hat);
		rfield eta(eta_x.size());
		for (std::size_t i = 0; i < eta_x.size(); ++i) eta[i] = eta_x[i].real();
		grad_bilinear(basis_->g(), eta, x, y, gx, gy);
	}
}

void simulator::rhs_droplet(const droplet_state &drop, const wave_state &w,
                            double &ax, double &ay) const {
	double gx = 0.0, gy = 0.0;
	surface_gradient(w, drop.x, drop.y, gx, gy);
	const double rel = frac(frac(w.t) - sc_.impact_phase);
	const double drag = groups_.drop_damp_coeff * std::sin(4.0 * M_PI * rel);
	ax = -groups_.drop_force_coeff * gx - drag * drop.vx;
	ay = -groups_.drop_force_coeff * gy - drag * drop.vy;
}

void simulator::rk4_wave(wave_state &w, const droplet_state *drop, double dt) {
	const std::size_t total = basis_->modes();
	cfield k1p, k1e, k2p, k2e, k3p, k3e, k4p, k4e;
	wave_state tmp = w;

	rhs_wave(w, drop, k1p, k1e);
	for (std::size_t m = 0; m < total; ++m) {
		tmp.phi_hat[m] = w.phi_hat[m] + 0.5 * dt * k1p[m];
		tmp.eta_hat[m] = w.eta_hat[m] + 0.5 * dt * k1e[m];
	}
	tmp.t = w.t + 0.5 * dt;
	rhs_wave(tmp, drop, k2p, k2e);
	for (std::size_t m = 0; m < total; ++m) {
		tmp.phi_hat[m] = w.phi_hat[m] + 0.5 * dt * k2p[m];
		tmp.eta_hat[m] = w.eta_hat[m] + 0.5 * dt * k2e[m];
	}
	rhs_wave(tmp, drop, k3p, k3e);
	for (std::size_t m = 0; m < total; ++m) {
		tmp.phi_hat[m] = w.phi_hat[m] + dt * k3p[m];
		tmp.eta_hat[m] = w.eta_hat[m] + dt * k3e[m];
	}
	tmp.t = w.t + dt;
	rhs_wave(tmp, drop, k4p, k4e);

	const double w6 = dt / 6.0;
	for (std::size_t m = 0; m < total; ++m) {
		w.phi_hat[m] += w6 * (k1p[m] + 2.0 * k2p[m] + 2.0 * k3p[m] + k4p[m]);
		w.eta_hat[m] += w6 * (k1e[m] + 2.0 * k2e[m] + 2.0 * k3e[m] + k4e[m]);
	}
	w.t += dt;
}

void simulator::leapfrog_wave(wave_state &w, double dt) {
	if (!have_prev_) {
		// two-level scheme needs a second level; one RK4 step provides it
		prev_phi_ = w.phi_hat;
		prev_eta_ = w.eta_hat;
		rk4_wave(w, nullptr, dt);
		have_prev_ = true;
		return;
	}
	cfield dphi, deta;
	rhs_wave(w, nullptr, dphi, deta);
	const std::size_t total = basis_->modes();
	cfield next_phi(total), next_eta(total);
	for (std::size_t m = 0; m < total; ++m) {
		next_phi[m] = prev_phi_[m] + 2.0 * dt * dphi[m];
		next_eta[m] = prev_eta_[m] + 2.0 * dt * deta[m];
	}
	prev_phi_ = std::move(w.phi_hat);
	prev_eta_ = std::move(w.eta_hat);
	w.phi_hat = std::move(next_phi);
	w.eta_hat = std::move(next_eta);
	w.t += dt;
}

void simulator::reset_history() { have_prev_ = false; }

void simulator::precombine_depth_operator() {
	if (dtn_op_) dtn_op_->precombine();
}

void simulator::post_step(wave_state &w) {
	if (sc_.dealias) {
		dealias(*basis_, w.phi_hat);
		dealias(*basis_, w.eta_hat);
	}
	for (std::size_t m = 0; m < w.phi_hat.size(); ++m) {
		const cplx &p = w.phi_hat[m];
		const cplx &e = w.eta_hat[m];
		if (!std::isfinite(p.real()) || !std::isfinite(p.imag()) ||
		    !std::isfinite(e.real()) || !std::isfinite(e.imag())) {
			std::ostringstream msg;
			msg << "non-finite wave state at t = " << w.t << " (mode " << m << ")";
			throw numerical_error(msg.str());
		}
	}
}

void simulator::wave_step(wave_state &w) {
	if (sc_.integ == integrator::rk4) {
		rk4_wave(w, nullptr, sc_.dt);
	} else {
		leapfrog_wave(w, sc_.dt);
	}
	post_step(w);
}

void simulator::step(wave_state &w, droplet_state *drop) {
	const double dt = sc_.dt;
	const double l = basis_->g().l;

	bool contact = false;
	if (drop) {
		drop->tau = frac(w.t);
		const double rel = frac(drop->tau - sc_.impact_phase);
		contact = rel < sc_.contact_fraction;
		drop->in_contact = contact;
	}

	if (drop && contact) {
		// contact split: wave half-step, droplet momentum/position update
		// with midpoint-evaluated gradient and drag, wave half-step
		rk4_wave(w, drop, 0.5 * dt);
		double ax = 0.0, ay = 0.0;
		rhs_droplet(*drop, w, ax, ay);
		drop->vx += dt * ax;
		drop->vy += dt * ay;
		drop->x = wrap_domain(drop->x + dt * drop->vx, l);
		drop->y = wrap_domain(drop->y + dt * drop->vy, l);
		rk4_wave(w, drop, 0.5 * dt);
		// contact substeps invalidate the two-level history
		have_prev_ = false;
	} else {
		if (sc_.integ == integrator::rk4) {
			rk4_wave(w, nullptr, dt);
		} else {
			leapfrog_wave(w, dt);
		}
		if (drop) {
			drop->x = wrap_domain(drop->x + dt * drop->vx, l);
			drop->y = wrap_domain(drop->y + dt * drop->vy, l);
		}
	}
	if (drop) {
		drop->tau = frac(w.t);
		if (!std::isfinite(drop->x) || !std::isfinite(drop->y) ||
		    !std::isfinite(drop->vx) || !std::isfinite(drop->vy)) {
			throw numerical_error("non-finite droplet state at t = " +
			                      std::to_string(w.t));
		}
	}
	post_step(w);
}

} // namespace pw
