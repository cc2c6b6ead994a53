#pragma once

// Branch specs shared by the checker tests and the acceptance suite.

#include "sbs/checks.hpp"

#include <algorithm>
#include <vector>

namespace fixture
{

using sbs::BranchSpec;
using sbs::Complex;
using sbs::EnvConditional;
using sbs::Index;
using sbs::Matrix;
using sbs::Wavefunction;

inline EnvConditional localized(double x)
{
	return {{x}, Matrix::Ones(1, 1)};
}

inline EnvConditional mixture(std::vector<double> xs, std::vector<double> w)
{
	EnvConditional c;
	c.positions = std::move(xs);
	c.table = Matrix::Zero(static_cast<Index>(w.size()), static_cast<Index>(w.size()));
	for(std::size_t k = 0; k < w.size(); ++k)
	{
		c.table(static_cast<Index>(k), static_cast<Index>(k)) = w[k];
	}
	return c;
}

inline Wavefunction at(double x)
{
	return {{x}, {Complex(1.0)}};
}

/// Incoherent GHZ: positions[i] = (x_S, x_E1, ..., x_EN), localized everywhere.
inline BranchSpec ghz_spec(const std::vector<std::vector<double>>& positions, std::vector<double> p)
{
	BranchSpec spec;
	spec.p = std::move(p);
	for(const auto& row : positions)
	{
		spec.system.push_back(at(row[0]));
		std::vector<EnvConditional> envs;
		for(std::size_t j = 1; j < row.size(); ++j)
		{
			envs.push_back(localized(row[j]));
		}
		spec.env.push_back(std::move(envs));
	}
	return spec;
}

/// Two system branches, E1 spread over two sites per branch with weights
/// t0..t3 = 0.3, 0.7, 0.5, 0.5, E2 localized.
inline BranchSpec fig6_spec()
{
	BranchSpec spec;
	spec.p = {0.4, 0.6};
	spec.system = {at(0.0), at(6.0)};
	spec.env = {{mixture({0.0, 1.0}, {0.3, 0.7}), localized(0.0)},
		{mixture({3.0, 4.0}, {0.5, 0.5}), localized(5.0)}};
	return spec;
}

inline std::vector<double> sorted_nonzero(std::vector<double> v, double floor = 1e-12)
{
	std::erase_if(v, [&](double x) { return x < floor; });
	std::sort(v.begin(), v.end());
	return v;
}

} // namespace fixture
