#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pw/errors.hpp"
#include "pw/topography.hpp"

using namespace pw;

namespace {

cavity_spec two_wells() {
	cavity_spec spec;
	spec.rows = 1;
	spec.cols = 2;
	spec.well_width = 3.0;
	spec.barrier_width = 0.6;
	spec.deep_depth = 1.0;
	spec.shallow_depth = 0.3;
	spec.smoothing = 0.25;
	return spec;
}

} // namespace

TEST_CASE("flat construction fills a uniform positive depth") {
	const grid g = make_grid(32, 8.0);
	const topography topo = make_flat(g, 1.0);
	CHECK(topo.is_flat());
	CHECK(topo.h_min == 1.0);
	CHECK(topo.h_max == 1.0);
	CHECK_THROWS_AS(make_flat(g, 0.0), config_error);
}

TEST_CASE("well construction degenerates to flat when depths coincide") {
	const grid g = make_grid(64, 8.0);
	cavity_spec spec = two_wells();
	spec.shallow_depth = spec.deep_depth;
	const topography topo = make_cavities(g, spec);
	CHECK(topo.h_max - topo.h_min < 1e-14);
	CHECK(topo.is_flat());
}

TEST_CASE("well floors and barrier top sit at the requested depths") {
	const grid g = make_grid(64, 8.0);
	const cavity_spec spec = two_wells();
	const topography topo = make_cavities(g, spec);

	// left well center: x = margin + well/2 = 0.7 + 1.5 = 2.2, y = 4
	const auto at = [&](double x, double y) {
		const auto ix = static_cast<std::size_t>(std::lround(x / g.dx()));
		const auto iy = static_cast<std::size_t>(std::lround(y / g.dx()));
		return topo.h[g.idx(ix % g.n, iy % g.n)];
	};
	CHECK(at(2.2, 4.0) == doctest::Approx(spec.deep_depth).epsilon(1e-4));
	CHECK(at(5.8, 4.0) == doctest::Approx(spec.deep_depth).epsilon(1e-4));
	// barrier midpoint between the wells
	CHECK(at(4.0, 4.0) < 0.45);
	// far corner outside the block
	CHECK(at(0.0, 0.0) == doctest::Approx(spec.shallow_depth).epsilon(1e-3));
	CHECK(topo.h_max <= spec.deep_depth + 1e-12);
	CHECK(topo.h_min >= spec.shallow_depth - 1e-12);
}

TEST_CASE("centered layout is mirror symmetric in both axes") {
	const grid g = make_grid(64, 8.0);
	const topography topo = make_cavities(g, two_wells());
	for (std::size_t iy = 0; iy < g.n; ++iy) {
		for (std::size_t ix = 0; ix < g.n; ++ix) {
			const double v = topo.h[g.idx(ix, iy)];
			const double mx = topo.h[g.idx((g.n - ix) % g.n, iy)];
			const double my = topo.h[g.idx(ix, (g.n - iy) % g.n)];
			CHECK(std::abs(v - mx) < 1e-12);
			CHECK(std::abs(v - my) < 1e-12);
		}
	}
}

TEST_CASE("oversized well blocks are rejected") {
	const grid g = make_grid(64, 8.0);
	cavity_spec spec = two_wells();
	spec.well_width = 4.0; // 2*4 + 0.6 > 8
	CHECK_THROWS_AS(make_cavities(g, spec), config_error);
}

TEST_CASE("sharper ramps raise the slope monotonically") {
	const grid g = make_grid(128, 8.0);
	double prev = 0.0;
	for (double s : {0.6, 0.3, 0.15}) {
		cavity_spec spec = two_wells();
		spec.smoothing = s;
		const double worst = max_gradient(make_cavities(g, spec));
		CHECK(worst > prev);
		prev = worst;
	}
}

TEST_CASE("roughness score flags under-resolved ramps only") {
	const grid g = make_grid(64, 8.0);
	cavity_spec spec = two_wells();
	spec.smoothing = 0.5;
	const double smooth_q = spectral_quality(make_cavities(g, spec));
	spec.smoothing = 0.02; // far below the cell size: spectrally rough
	const double rough_q = spectral_quality(make_cavities(g, spec));
	CHECK(smooth_q < k_spectral_quality_warn);
	CHECK(rough_q > 10.0 * smooth_q);

	const topography flat = make_flat(g, 1.0);
	CHECK(spectral_quality(flat) == 0.0);
}

TEST_CASE("sample import checks the grid size and positivity") {
	const grid g = make_grid(32, 8.0);
	rfield wrong(10, 1.0);
	CHECK_THROWS_AS(make_from_samples(g, wrong), config_error);
	rfield bad(g.cells(), 1.0);
	bad[5] = -0.25;
	CHECK_THROWS_AS(make_from_samples(g, bad), config_error);
	rfield good(g.cells(), 0.8);
	good[3] = 0.9;
	const topography topo = make_from_samples(g, good);
	CHECK(topo.h_min == doctest::Approx(0.8));
	CHECK(topo.h_max == doctest::Approx(0.9));
}
