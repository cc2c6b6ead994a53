#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sbs/linalg.hpp"
#include "sbs/ring.hpp"

using namespace sbs;

TEST_CASE("ring arithmetic")
{
	CHECK(ring_mod(-1, 12) == 11);
	CHECK(ring_mod(25, 12) == 1);
	CHECK(ring_distance(1, 11, 12) == 2);
	CHECK(ring_distance(0, 6, 12) == 6);
}

TEST_CASE("cycle structure of the three-party frame change")
{
	for(Index d = 2; d <= 25; ++d)
	{
		const CycleStructure cs = cycle_structure(d);
		CHECK(cs.fixed == d * d);
		CHECK(cs.two_cycles == (d * d * d - d * d) / 2);
		CHECK(cs.longer == 0);
		CHECK(permutation_character(d) == d * d);
	}
	CHECK(permutation_character(12) == 144);
	CHECK(cycle_structure(12).two_cycles == 792);
}

TEST_CASE("frame change is an involution on basis states")
{
	const auto layout = SubsystemLayout::uniform({"S", "E1", "E2"}, 5);
	const auto perm = build_frame_permutation(5, layout, "E1");
	CHECK(perm.result.labels() == std::vector<std::string>{"S", "C", "E2"});
	for(Index a = 0; a < perm.dim(); ++a)
	{
		CHECK(perm.map[perm.map[a]] == a);
	}
	// explicit tuple (2, 3, 1) -> (2-3, -3, 1-3) = (4, 2, 3)
	const std::vector<Index> in{2, 3, 1};
	const std::vector<Index> out{4, 2, 3};
	CHECK(perm.map[layout.flatten(in)] == layout.flatten(out));
}

TEST_CASE("D = 2 example")
{
	// |x_S, x_E1, x_E2> = |1, 1, 0> seen from E1 is |0, 1, 1>
	const auto layout = SubsystemLayout::uniform({"S", "E1", "E2"}, 2);
	const auto perm = build_frame_permutation(2, layout, "E1");
	Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
	psi(6) = 1.0;
	const DensityMatrix out = apply_frame_transform(DensityMatrix::pure(psi), perm);
	CHECK(out(3, 3) == Complex(1.0));
}

TEST_CASE("frame transform preserves the spectrum")
{
	Rng rng(11, "ring", "spectrum");
	const auto layout = SubsystemLayout::uniform({"S", "E1", "E2"}, 4);
	const Matrix rho = oracle::random_state(64, rng, 5);
	for(const std::string target : {"S", "E1", "E2"})
	{
		const auto perm = build_frame_permutation(4, layout, target);
		const Matrix out = apply_frame_transform(rho, perm);
		CHECK((oracle::eigenvalues(out) - oracle::eigenvalues(rho)).norm() < 1e-12);
		CHECK((apply_frame_transform(out, perm) - rho).norm() == 0.0);
	}
}
