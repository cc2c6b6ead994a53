#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sbs/dynamics.hpp"
#include "sbs/linalg.hpp"
#include "sbs/ring.hpp"

#include <cmath>
#include <numbers>

using namespace sbs;

namespace
{

Matrix cyclic_shift(Index D)
{
	Matrix x = Matrix::Zero(D, D);
	for(Index k = 0; k < D; ++k)
	{
		x(ring_mod(k + 1, D), k) = 1.0;
	}
	return x;
}

Matrix expm_hermitian(const Matrix& h, double t)
{
	Eigen::SelfAdjointEigenSolver<Matrix> es(h);
	Eigen::VectorXcd ph(h.rows());
	for(Index k = 0; k < h.rows(); ++k)
	{
		ph(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * t));
	}
	return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

CaseConfig small_case(const std::string& id, Index D)
{
	CaseConfig cfg = make_case_config(id, Preset::desk, 0, D);
	cfg.time_grid_short = {0.0, 0.25, 0.5, 0.75, 1.0};
	cfg.time_grid_long = {2.0, 10.0, 50.0, 100.0};
	cfg.window = {10.0, 100.0};
	return cfg;
}

} // namespace

TEST_CASE("shift generator exponentiates to the shift")
{
	for(Index D : {2, 3, 5, 12})
	{
		const Matrix x = cyclic_shift(D);
		Matrix xs = Matrix::Identity(D, D);
		for(Index s = 0; s < D; ++s)
		{
			const Matrix g = shift_generator(D, s);
			CHECK((g - g.adjoint()).norm() < 1e-13);
			CHECK((expm_hermitian(g, 1.0) - xs).norm() < 1e-11);
			const auto ev = oracle::eigenvalues(g);
			CHECK(ev.minCoeff() > -std::numbers::pi - 1e-12);
			CHECK(ev.maxCoeff() <= std::numbers::pi + 1e-12);
			xs = x * xs;
		}
		CHECK(shift_generator(D, 0).norm() < 1e-14);
	}
}

TEST_CASE("D = 2 swap")
{
	const Matrix g = shift_generator(2, 1);
	Eigen::VectorXcd zero(2);
	zero << 1.0, 0.0;
	const Eigen::VectorXcd out = expm_hermitian(g, 1.0) * zero;
	CHECK(std::abs(out(0)) < 1e-12);
	CHECK(std::abs(out(1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("central interaction writes the system position at t = 1")
{
	const Index D = 4;
	const auto h = build_central_hamiltonian(D);
	const DensityMatrix rho = evolve(initial_state("1.1", D), h, 1.0);
	Matrix expected = Matrix::Zero(D * D * D, D * D * D);
	for(Index s = 0; s < D; ++s)
	{
		const Index a = (s * D + s) * D + s;
		expected(a, a) = 1.0 / D;
	}
	CHECK((rho.matrix() - expected).norm() < 1e-9);
}

TEST_CASE("self hopping")
{
	const Index D = 12;
	const double c = 0.01;
	const Matrix h = build_self_hamiltonian(D, c).matrix();
	for(Index r = 0; r < D; ++r)
	{
		int nonzero = 0;
		for(Index col = 0; col < D; ++col)
		{
			if(h(r, col) != Complex(0.0))
			{
				++nonzero;
				CHECK(h(r, col) == Complex(c));
			}
		}
		CHECK(nonzero == 2);
	}
	const Matrix x = cyclic_shift(D);
	CHECK((h * x - x * h).norm() < 1e-14);

	const double t = 1.0;
	const Matrix u = expm_hermitian(h, t);
	const double leak = 1.0 - std::norm(u(0, 0));
	CHECK(leak == doctest::Approx(2.0 * c * c * t * t).epsilon(1e-3));
}

TEST_CASE("environment interaction")
{
	const Index D = 12;
	const Matrix h = build_env_interaction(D).matrix();
	CHECK((h - h.adjoint()).norm() < 1e-14);
	auto idx = [D](Index k, Index l) { return ring_mod(k, D) * D + ring_mod(l, D); };
	CHECK(h(idx(1, 0), idx(0, 1)) == Complex(0.005));
	CHECK(h(idx(0, 1), idx(1, 0)) == Complex(0.005));
	// r = 3: both step inwards, rate 0.01 / 4
	CHECK(h(idx(1, 2), idx(0, 3)) == Complex(0.0025));
	// antipodal pair: both directions at half amplitude
	CHECK(h(idx(1, 5), idx(0, 6)) == Complex(0.5 * 0.01 / 7));
	CHECK(h(idx(11, 7), idx(0, 6)) == Complex(0.5 * 0.01 / 7));
	// a pair at r = 0 is only reached from r = 2, never left on its own
	CHECK(h(idx(1, 1), idx(0, 2)) == Complex(0.01 / 3));
	for(Index b = 0; b < D * D; ++b)
	{
		if(h(idx(4, 4), b) != Complex(0.0))
		{
			CHECK(ring_distance(b / D, b % D, D) == 2);
		}
	}
	// simultaneous translation
	for(Index a = 0; a < D * D; ++a)
	{
		for(Index b = 0; b < D * D; ++b)
		{
			const Index a2 = idx(a / D + 1, a % D + 1);
			const Index b2 = idx(b / D + 1, b % D + 1);
			CHECK_MESSAGE(h(a, b) == h(a2, b2), "entry ", a, ",", b);
		}
	}
}

TEST_CASE("global random term")
{
	const Index D = 4;
	Rng r1(5, "case-4", "global-random");
	Rng r2(5, "case-4", "global-random");
	const Matrix a = build_global_random(D, r1).matrix();
	const Matrix b = build_global_random(D, r2).matrix();
	CHECK((a - b).norm() == 0.0);
	CHECK((a - a.transpose()).norm() == 0.0);
	CHECK(a.imag().norm() == 0.0);
	CHECK(a.real().minCoeff() >= 0.0);
	CHECK(a.real().maxCoeff() <= 0.001);
	CHECK(a.diagonal().norm() == 0.0);
	const auto ev = oracle::eigenvalues(a);
	CHECK(ev.cwiseAbs().maxCoeff() <= 0.001 * D * D * D);

	Rng r3(6, "case-4", "global-random");
	CHECK((build_global_random(D, r3).matrix() - a).norm() > 0.0);
}

TEST_CASE("initial states")
{
	const Index D = 12;
	const auto layout = SubsystemLayout::uniform({"S", "E1", "E2"}, D);
	const DensityMatrix r11 = initial_state("1.1", D);
	CHECK(r11.matrix().trace().real() == doctest::Approx(1.0));
	const Matrix s = partial_trace(r11.matrix(), layout, {"S"});
	CHECK((s - Matrix::Identity(D, D) / 12.0).norm() < 1e-14);
	CHECK(partial_trace(r11.matrix(), layout, {"E1"})(0, 0) == Complex(1.0));

	const Matrix e13 = partial_trace(initial_state("1.3", D).matrix(), layout, {"E1"});
	CHECK((e13 - Matrix::Identity(D, D) / 12.0).norm() < 1e-14);

	const Matrix e12 = partial_trace(initial_state("1.2", D).matrix(), layout, {"E2"});
	CHECK(e12(0, 0).real() == doctest::Approx(0.8));
	CHECK(e12(1, 1).real() == doctest::Approx(0.1));
	CHECK(e12(11, 11).real() == doctest::Approx(0.1));

	CHECK_THROWS_AS(initial_state("9.9", D), std::invalid_argument);
}

TEST_CASE("config validation")
{
	CaseConfig cfg = make_case_config("4", Preset::desk);
	CHECK_NOTHROW(validate(cfg));
	cfg.couplings.local = 0.5;
	CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
	cfg = make_case_config("4", Preset::desk);
	cfg.time_grid_short.push_back(1.5);
	CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
	CHECK_THROWS_AS(make_case_config("9.9", Preset::desk), std::invalid_argument);
	CHECK(known_cases().size() == 10);
	CHECK_THROWS(parse_preset("huge"));
}

TEST_CASE("phase-two generator is phase one minus the central term")
{
	CaseConfig cfg = small_case("4", 3);
	const auto plan = build_plan(cfg);
	const Matrix central = build_central_hamiltonian(3).matrix();
	CHECK((plan.h_phase1.matrix() - central - plan.h_phase2.matrix()).norm() < 1e-15);
}

TEST_CASE("run_case invariants on a small ring")
{
	const Index D = 5;
	for(const std::string id : {"1.1", "2.1", "3.1", "4"})
	{
		CAPTURE(id);
		const CaseConfig cfg = small_case(id, D);
		RealVector spectrum0;
		const auto result = run_case(cfg, [&](double t, const DensityMatrix& c, const DensityMatrix& e1) {
			const RealVector ev_c = oracle::eigenvalues(c.matrix());
			CHECK((ev_c - oracle::eigenvalues(e1.matrix())).cwiseAbs().maxCoeff() < 1e-12);
			CHECK(c.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-10));
			if(t == 0.0)
			{
				spectrum0 = ev_c;
			}
			else
			{
				CHECK((ev_c - spectrum0).cwiseAbs().maxCoeff() < 1e-10);
			}
		});
		REQUIRE(result.times.size() == 9);
		for(std::size_t k = 0; k < result.times.size(); ++k)
		{
			CHECK(result.frame_e1[k].i_mean >= -1e-9);
		}
		// t = 0 and t = 1 carry no conditional correlation in frame E1; the
		// E1-E2 coupling of case 3.1 leaves a residue of a few 1e-6 at t = 1
		CHECK(std::abs(result.frame_e1[0].i_mean) < 1e-6);
		if(id != "4")
		{
			CHECK(std::abs(result.frame_e1[4].i_mean) < (id == "3.1" ? 1e-5 : 1e-6));
		}
		if(id == "1.1")
		{
			CHECK(result.frame_e1[4].p[0] == doctest::Approx(1.0).epsilon(1e-9));
			const auto& c1 = result.frame_c[4];
			CHECK((c1.observers[0].fidelity - c1.observers[1].fidelity).norm() < 1e-10);
			CHECK((c1.observers[0].fidelity - Eigen::MatrixXd::Identity(D, D)).norm() < 1e-9);
		}
		CHECK(result.has_saturation);
	}
}

TEST_CASE("cases 1.1 and 1.5 broadcast the same spectrum in frame E1")
{
	const auto a = run_case(small_case("1.1", 4));
	const auto b = run_case(small_case("1.5", 4));
	for(std::size_t k = 0; k < a.times.size(); ++k)
	{
		for(std::size_t i = 0; i < a.frame_e1[k].p.size(); ++i)
		{
			CHECK(std::abs(a.frame_e1[k].p[i] - b.frame_e1[k].p[i]) < 1e-9);
		}
	}
}
