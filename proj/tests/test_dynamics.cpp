#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pw/dynamics.hpp"
#include "pw/errors.hpp"
#include "pw/spectral.hpp"
#include "pw/topography.hpp"

using namespace pw;

namespace {

// frozen benchmark groups (80 Hz silicone bath), entered literally so the
// stepping tests do not depend on the parameter pipeline
nondim_groups bench_groups(double gamma) {
	nondim_groups g;
	g.mu = 1.2636321623957778;
	g.g_group = 1.2912741159481858;
	g.bo = 0.12644662805087653;
	g.re = 0.045963334537738335;
	g.gamma = gamma;
	g.m_group = 0.0025168324052231889;
	g.f_peak = 4.0 * M_PI * M_PI;
	const double t_f = 0.025, grav = 9.81;
	const double lam = 0.0047482172253548267, f_hz = 80.0;
	g.drop_force_coeff = 8.0 * t_f * grav * M_PI * M_PI / (lam * f_hz);
	g.drop_damp_coeff = 8.0 * 0.5 * grav * M_PI * M_PI / f_hz;
	return g;
}

void seed_mode(const fourier_basis &b, cfield &f, int fx, int fy, cplx amp) {
	const int n = static_cast<int>(b.n());
	const std::size_t ix = static_cast<std::size_t>(((fx % n) + n) % n);
	const std::size_t iy = static_cast<std::size_t>(((fy % n) + n) % n);
	f[iy * b.n() + ix] += amp;
	const std::size_t jx = (b.n() - ix) % b.n(), jy = (b.n() - iy) % b.n();
	f[jy * b.n() + jx] += std::conj(amp);
}

// quadratic invariant of the undamped pair: (G + Bo k^2)|eta|^2 weighs the
// restoring side, k tanh(mu k) |phi|^2 the kinetic side
double pair_energy(const fourier_basis &b, const wave_state &w,
                   const nondim_groups &g) {
	double e = 0.0;
	for (std::size_t m = 1; m < b.modes(); ++m) {
		const double k = b.kabs(m);
		e += (g.g_group + g.bo * k * k) * std::norm(w.eta_hat[m]) +
		     k * std::tanh(g.mu * k) * std::norm(w.phi_hat[m]);
	}
	return 0.5 * e;
}

double max_abs(const cfield &f) {
	double worst = 0.0;
	for (const cplx &v : f) worst = std::max(worst, std::abs(v));
	return worst;
}

double max_abs_diff(const cfield &a, const cfield &b) {
	double worst = 0.0;
	for (std::size_t i = 0; i < a.size(); ++i) {
		worst = std::max(worst, std::abs(a[i] - b[i]));
	}
	return worst;
}

} // namespace

TEST_CASE("contact pulse is a clipped half-sine on the phase clock") {
	const nondim_groups g = bench_groups(4.0);
	CHECK(forcing_f(0.0, g) == 0.0);                 // sin(0)
	CHECK(forcing_f(0.125, g) == doctest::Approx(g.f_peak).epsilon(1e-14));
	CHECK(forcing_f(0.25, g) == 0.0);
	CHECK(forcing_f(0.9, g) == 0.0);
	CHECK(forcing_f(1.0625, g) ==
	      doctest::Approx(forcing_f(0.0625, g)).epsilon(1e-12));
	CHECK(forcing_f(-0.9375, g) ==
	      doctest::Approx(forcing_f(0.0625, g)).epsilon(1e-12));
	// shifted window moves with the impact phase
	CHECK(forcing_f(0.0625, g, 0.25, 0.5) == 0.0);
	CHECK(forcing_f(0.5625, g, 0.25, 0.5) ==
	      doctest::Approx(forcing_f(0.0625, g)).epsilon(1e-12));
	// pulse integral over one period: f_peak / (2 pi)
	double sum = 0.0;
	const int nq = 200000;
	for (int i = 0; i < nq; ++i) {
		sum += forcing_f((i + 0.5) / nq, g) / nq;
	}
	CHECK(sum == doctest::Approx(g.f_peak / (2.0 * M_PI)).epsilon(1e-8));
}

TEST_CASE("a single damped mode loses energy at exactly twice its decay rate") {
	// with identical damping on both halves of the pair the continuum energy
	// is e^{-2 Re k^2 t} times the undamped invariant -- a closed form the
	// integrator must track to its own order
	const grid g = make_grid(16, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(0.0);
	step_config sc;
	sc.dt = 1.0 / 256.0;
	simulator sim(b, topo, gr, sc);
	wave_state w = sim.make_state();
	seed_mode(b, w.eta_hat, 3, 0, cplx(0.3, 0.1));
	seed_mode(b, w.phi_hat, 3, 0, cplx(-0.05, 0.2));

	const double e0 = pair_energy(b, w, gr);
	const int steps = 512; // two periods
	for (int i = 0; i < steps; ++i) sim.wave_step(w);
	const double k = b.kabs(g.idx(3, 0));
	const double expected = e0 * std::exp(-2.0 * gr.re * k * k * w.t);
	CHECK(pair_energy(b, w, gr) ==
	      doctest::Approx(expected).epsilon(5e-8));
	CHECK(w.t == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("undriven multimode energy decays monotonically step by step") {
	const grid g = make_grid(32, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(0.0);
	step_config sc;
	simulator sim(b, topo, gr, sc);
	wave_state w = sim.make_state();

	std::mt19937 rng(5);
	std::uniform_real_distribution<double> dist(-1.0, 1.0);
	const int band = static_cast<int>(g.n) / 3;
	for (int fx = -band; fx <= band; ++fx) {
		for (int fy = -band; fy <= 0; ++fy) {
			if (fx == 0 && fy == 0) continue;
			seed_mode(b, w.eta_hat, fx, fy, 0.1 * cplx(dist(rng), dist(rng)));
			seed_mode(b, w.phi_hat, fx, fy, 0.1 * cplx(dist(rng), dist(rng)));
		}
	}
	double e = pair_energy(b, w, gr);
	const double e0 = e;
	for (int i = 0; i < 256; ++i) {
		sim.wave_step(w);
		const double e_next = pair_energy(b, w, gr);
		CHECK(e_next <= e * (1.0 + 1e-13));
		e = e_next;
	}
	CHECK(e < 0.9 * e0);
}

TEST_CASE("parametric drive brackets the subharmonic instability threshold") {
	// the resonant lattice mode (wavelength 1) decays below the Faraday
	// threshold and grows above it; bath alone, no droplet
	const grid g = make_grid(32, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const std::size_t at = g.idx(8, 0); // k = 2 pi exactly on this grid

	auto final_amp = [&](double gamma) {
		const nondim_groups gr = bench_groups(gamma);
		step_config sc;
		simulator sim(b, topo, gr, sc);
		wave_state w = sim.make_state();
		seed_mode(b, w.eta_hat, 8, 0, cplx(5e-7, 0.0));
		for (int i = 0; i < 20 * 64; ++i) sim.wave_step(w);
		return std::abs(w.eta_hat[at]);
	};

	CHECK(final_amp(5.0) < 0.5 * 5e-7);
	CHECK(final_amp(6.5) > 5.0 * 5e-7);
}

TEST_CASE("droplet pressure enters as the transform of a moving point source") {
	const grid g = make_grid(16, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(5.2);
	step_config sc;
	simulator sim(b, topo, gr, sc);

	wave_state w = sim.make_state();
	std::mt19937 rng(11);
	std::uniform_real_distribution<double> dist(-1.0, 1.0);
	for (int fx = -4; fx <= 4; ++fx) {
		for (int fy = -4; fy <= 0; ++fy) {
			if (fx == 0 && fy == 0) continue;
			seed_mode(b, w.eta_hat, fx, fy, 0.05 * cplx(dist(rng), dist(rng)));
		}
	}
	w.t = 1.0 / 16.0; // inside the contact window

	droplet_state drop;
	drop.x = 1.37;
	drop.y = 5.91;
	drop.in_contact = true;

	cfield dphi0, deta0, dphi1, deta1;
	sim.rhs_wave(w, nullptr, dphi0, deta0);
	sim.rhs_wave(w, &drop, dphi1, deta1);

	const double f = gr.f_peak * std::sin(4.0 * M_PI * w.t);
	const double amp = -gr.g_group * gr.m_group * f;
	const double l = g.l;
	const double dk = 2.0 * M_PI / l;
	// real band-limited spike: complex phase per axis, except the unpaired
	// -n/2 frequency which carries the cosine
	auto axis_factor = [&](int f_int, double p) {
		if (f_int == -static_cast<int>(g.n) / 2) {
			return cplx(std::cos(dk * 0.5 * double(g.n) * p), 0.0);
		}
		return std::polar(1.0, -dk * f_int * p);
	};
	for (std::size_t m = 0; m < b.modes(); ++m) {
		const cplx want = amp / (l * l) * axis_factor(b.freq(m % g.n), drop.x) *
		                  axis_factor(b.freq(m / g.n), drop.y);
		CHECK(std::abs((dphi1[m] - dphi0[m]) - want) < 1e-13);
		CHECK(std::abs(deta1[m] - deta0[m]) == 0.0);
	}
	// the deposit preserves conjugate symmetry of the drift
	CHECK(hermitian_error(b, dphi1) < 1e-12);
}

TEST_CASE("droplet feels the surface slope and the contact drag") {
	const grid g = make_grid(32, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(5.2);
	step_config sc;
	simulator sim(b, topo, gr, sc);

	// eta = A cos(k x): slope is -A k sin(k x)
	const double a_amp = 0.01;
	const double k1 = 2.0 * M_PI / g.l;
	wave_state w = sim.make_state();
	seed_mode(b, w.eta_hat, 1, 0, cplx(a_amp / 2.0, 0.0));
	w.t = 0.125; // drag factor sin(4 pi t) = 1

	droplet_state drop;
	drop.x = 1.1;
	drop.y = 3.7;
	drop.vx = 0.4;
	drop.vy = -0.2;
	drop.in_contact = true;

	double ax = 0.0, ay = 0.0;
	sim.rhs_droplet(drop, w, ax, ay);
	const double slope = -a_amp * k1 * std::sin(k1 * drop.x);
	CHECK(ax == doctest::Approx(-gr.drop_force_coeff * slope -
	                            gr.drop_damp_coeff * drop.vx)
	                .epsilon(1e-10));
	CHECK(ay == doctest::Approx(-gr.drop_damp_coeff * drop.vy).epsilon(1e-10));

	// bilinear evaluation stays close to the spectral slope
	step_config sc2 = sc;
	sc2.eval_interp = interp::bilinear;
	simulator sim2(b, topo, gr, sc2);
	double bx = 0.0, by = 0.0;
	sim2.rhs_droplet(drop, w, bx, by);
	CHECK(bx == doctest::Approx(ax).epsilon(0.05));
}

TEST_CASE("contact bookkeeping covers exactly the leading quarter period") {
	const grid g = make_grid(32, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(5.2);
	step_config sc;
	simulator sim(b, topo, gr, sc);
	wave_state w = sim.make_state();
	droplet_state drop;
	drop.x = 4.0;
	drop.y = 4.0;
	drop.vx = 0.1;

	int in_contact = 0;
	for (int i = 0; i < 128; ++i) {
		sim.step(w, &drop);
		if (i < 16) CHECK(drop.in_contact);
		in_contact += drop.in_contact ? 1 : 0;
	}
	CHECK(in_contact == 32); // two periods, quarter window each
	CHECK(w.t == doctest::Approx(2.0).epsilon(1e-12));

	// a shifted impact phase delays the window
	step_config sc2;
	sc2.impact_phase = 0.5;
	simulator sim2(b, topo, gr, sc2);
	wave_state w2 = sim2.make_state();
	droplet_state drop2 = drop;
	int first_contact = -1, contacts = 0;
	for (int i = 0; i < 64; ++i) {
		sim2.step(w2, &drop2);
		if (drop2.in_contact) {
			if (first_contact < 0) first_contact = i;
			++contacts;
		}
	}
	CHECK(first_contact == 32);
	CHECK(contacts == 16);
}

TEST_CASE("mean elevation is pinned while a walker runs") {
	const grid g = make_grid(32, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(5.2);
	step_config sc;
	simulator sim(b, topo, gr, sc);
	wave_state w = sim.make_state();
	droplet_state drop;
	drop.x = 4.0;
	drop.y = 4.0;
	drop.vx = 0.05;

	for (int i = 0; i < 192; ++i) sim.step(w, &drop);
	CHECK(w.eta_hat[0] == cplx(0.0, 0.0)); // identically conserved
	CHECK(hermitian_error(b, w.eta_hat) < 1e-11);
	CHECK(hermitian_error(b, w.phi_hat) < 1e-11);
	CHECK(max_abs(w.eta_hat) > 0.0);
	CHECK(std::isfinite(drop.x));
}

TEST_CASE("out of contact the droplet drifts and the wave ignores it") {
	const grid g = make_grid(16, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(5.2);
	step_config sc;
	simulator sim_a(b, topo, gr, sc), sim_b(b, topo, gr, sc);

	wave_state wa = sim_a.make_state();
	seed_mode(b, wa.eta_hat, 2, 1, cplx(0.02, 0.01));
	wa.t = 0.5; // mid-period: outside the window
	wave_state wb = wa;

	droplet_state drop;
	drop.x = 1.0;
	drop.y = 2.0;
	drop.vx = 0.3;
	drop.vy = -0.1;

	sim_a.step(wa, &drop);
	sim_b.wave_step(wb);
	CHECK(!drop.in_contact);
	CHECK(max_abs_diff(wa.eta_hat, wb.eta_hat) == 0.0);
	CHECK(max_abs_diff(wa.phi_hat, wb.phi_hat) == 0.0);
	CHECK(drop.x == doctest::Approx(1.0 + sc.dt * 0.3).epsilon(1e-14));
	CHECK(drop.y == doctest::Approx(2.0 - sc.dt * 0.1).epsilon(1e-14));
}

TEST_CASE("time stepping converges at fourth order") {
	const grid g = make_grid(16, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(5.4); // keep the drive on

	auto evolve = [&](double dt) {
		step_config sc;
		sc.dt = dt;
		simulator sim(b, topo, gr, sc);
		wave_state w = sim.make_state();
		seed_mode(b, w.eta_hat, 1, 0, cplx(0.1, 0.0));
		seed_mode(b, w.eta_hat, 2, 1, cplx(0.0, 0.05));
		seed_mode(b, w.phi_hat, 1, 1, cplx(0.03, -0.02));
		const int steps = static_cast<int>(std::llround(1.0 / dt));
		for (int i = 0; i < steps; ++i) sim.wave_step(w);
		return w;
	};

	const wave_state ref = evolve(1.0 / 2048.0);
	const double e32 = max_abs_diff(evolve(1.0 / 32.0).eta_hat, ref.eta_hat);
	const double e64 = max_abs_diff(evolve(1.0 / 64.0).eta_hat, ref.eta_hat);
	const double e128 = max_abs_diff(evolve(1.0 / 128.0).eta_hat, ref.eta_hat);
	const double p1 = std::log2(e32 / e64);
	const double p2 = std::log2(e64 / e128);
	CHECK(p1 > 3.6);
	CHECK(p1 < 4.4);
	CHECK(p2 > 3.6);
	CHECK(p2 < 4.4);
}

TEST_CASE("stencil route converges at second order toward the exact operator") {
	// same band-limited initial data on finer and finer grids; at fixed n the
	// gap between the 5-point route and the exact multiplier route isolates
	// the stencil truncation error, which must shrink like dx^2
	const nondim_groups gr = bench_groups(0.0);
	const double l = 8.0;

	auto gap_at = [&](std::size_t n) {
		const grid g = make_grid(n, l);
		const fourier_basis b(g);
		const topography topo = make_flat(g, 1.0);
		step_config ps, cd;
		ps.dt = cd.dt = 1.0 / 64.0;
		cd.sch = scheme::central_difference;
		simulator sim_ps(b, topo, gr, ps), sim_cd(b, topo, gr, cd);
		wave_state wp = sim_ps.make_state();
		seed_mode(b, wp.eta_hat, 1, 0, cplx(0.1, 0.0));
		seed_mode(b, wp.eta_hat, 2, 1, cplx(0.0, 0.05));
		seed_mode(b, wp.eta_hat, 0, 3, cplx(0.02, 0.02));
		seed_mode(b, wp.phi_hat, 1, 1, cplx(0.03, -0.02));
		wave_state wc = wp;
		for (int i = 0; i < 32; ++i) {
			sim_ps.wave_step(wp);
			sim_cd.wave_step(wc);
		}
		// compare the seeded low modes, indexed per grid
		double worst = 0.0;
		const int pairs[4][2] = {{1, 0}, {2, 1}, {0, 3}, {1, 1}};
		for (const auto &p : pairs) {
			const std::size_t m =
			    static_cast<std::size_t>(p[1]) * n + static_cast<std::size_t>(p[0]);
			worst = std::max(worst, std::abs(wp.eta_hat[m] - wc.eta_hat[m]));
		}
		return worst;
	};

	const double g16 = gap_at(16), g32 = gap_at(32), g64 = gap_at(64);
	const double p1 = std::log2(g16 / g32);
	const double p2 = std::log2(g32 / g64);
	CHECK(p1 > 1.7);
	CHECK(p1 < 2.3);
	CHECK(p2 > 1.7);
	CHECK(p2 < 2.3);
}

TEST_CASE("two-level scheme bootstraps from the one-step integrator") {
	const grid g = make_grid(16, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(0.0);
	step_config rk, lf;
	rk.dt = lf.dt = 1.0 / 128.0;
	lf.integ = integrator::leapfrog;
	simulator sim_rk(b, topo, gr, rk), sim_lf(b, topo, gr, lf);

	wave_state wr = sim_rk.make_state();
	seed_mode(b, wr.eta_hat, 2, 0, cplx(0.1, 0.0));
	seed_mode(b, wr.phi_hat, 2, 0, cplx(0.05, 0.0));
	wave_state wl = wr;

	sim_rk.wave_step(wr);
	sim_lf.wave_step(wl);
	CHECK(max_abs_diff(wr.eta_hat, wl.eta_hat) == 0.0); // bootstrap step

	sim_rk.wave_step(wr);
	sim_lf.wave_step(wl);
	CHECK(max_abs_diff(wr.eta_hat, wl.eta_hat) > 0.0); // genuinely two-level

	// low-mode evolution stays close and bounded over five periods
	for (int i = 2; i < 5 * 128; ++i) {
		sim_rk.wave_step(wr);
		sim_lf.wave_step(wl);
	}
	const double scale = max_abs(wr.eta_hat);
	CHECK(max_abs(wl.eta_hat) < 0.12);               // no parasitic growth
	CHECK(max_abs_diff(wr.eta_hat, wl.eta_hat) < 0.05 * (scale + 0.01));

	sim_lf.reset_history(); // restart must re-bootstrap without throwing
	sim_lf.wave_step(wl);
	CHECK(std::isfinite(max_abs(wl.eta_hat)));
}

TEST_CASE("flipping the flux sign selects the runaway branch") {
	const grid g = make_grid(16, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(0.0);
	step_config sc;
	sc.dtn_sign = -1;
	simulator sim(b, topo, gr, sc);
	wave_state w = sim.make_state();
	seed_mode(b, w.eta_hat, 3, 0, cplx(1e-3, 0.0));

	bool blew_up = false;
	try {
		for (int i = 0; i < 10 * 64; ++i) sim.wave_step(w);
	} catch (const numerical_error &) {
		blew_up = true;
	}
	CHECK((blew_up || max_abs(w.eta_hat) > 1.0));
}

TEST_CASE("band filter strips everything beyond the resolved shell") {
	const grid g = make_grid(16, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const nondim_groups gr = bench_groups(0.0);
	step_config off, on;
	on.dealias = true;
	simulator sim_off(b, topo, gr, off), sim_on(b, topo, gr, on);

	wave_state w = sim_on.make_state();
	seed_mode(b, w.eta_hat, 6, 0, cplx(0.1, 0.0)); // outside the n/3 shell
	seed_mode(b, w.eta_hat, 2, 0, cplx(0.1, 0.0));
	wave_state w2 = w;

	sim_on.wave_step(w);
	CHECK(std::abs(w.eta_hat[g.idx(6, 0)]) == 0.0);
	CHECK(std::abs(w.eta_hat[g.idx(2, 0)]) > 0.0);
	sim_off.wave_step(w2);
	CHECK(std::abs(w2.eta_hat[g.idx(6, 0)]) > 0.0);
}

TEST_CASE("advective limit report matches an independent scan") {
	const grid g = make_grid(64, 8.0);
	const fourier_basis b(g);
	const nondim_groups gr = bench_groups(4.0);
	step_config sc;
	const cfl_report rep = cfl_check(b, gr, sc);

	double c_max = 0.0, k_at = 0.0;
	for (std::size_t m = 1; m < b.modes(); ++m) {
		const double k = b.kabs(m);
		const double om =
		    std::sqrt((gr.g_group * k + gr.bo * k * k * k) * std::tanh(gr.mu * k));
		if (om / k > c_max) {
			c_max = om / k;
			k_at = k;
		}
	}
	CHECK(rep.c_max == doctest::Approx(c_max).epsilon(1e-12));
	CHECK(rep.k_limiting == doctest::Approx(k_at).epsilon(1e-12));
	CHECK(rep.dt_limit == doctest::Approx(0.5 * g.dx() / c_max).epsilon(1e-12));
	CHECK(rep.ok == (sc.dt <= rep.dt_limit * (1.0 + 1e-12)));

	step_config coarse;
	coarse.dt = 0.5; // far beyond any plausible limit at this resolution
	CHECK(!cfl_check(b, gr, coarse).ok);
}

TEST_CASE("construction rejects inconsistent stepping setups") {
	const grid g = make_grid(16, 8.0);
	const fourier_basis b(g);
	const topography topo = make_flat(g, 1.0);
	const grid g_other = make_grid(32, 8.0);
	const topography topo_other = make_flat(g_other, 1.0);
	const nondim_groups gr = bench_groups(4.0);

	step_config bad_dt;
	bad_dt.dt = 0.3; // does not divide the period
	CHECK_THROWS_AS(simulator(b, topo, gr, bad_dt), config_error);

	step_config bad_sign;
	bad_sign.dtn_sign = 2;
	CHECK_THROWS_AS(simulator(b, topo, gr, bad_sign), config_error);

	step_config ok;
	CHECK_THROWS_AS(simulator(b, topo_other, gr, ok), config_error);
}
