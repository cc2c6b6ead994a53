#include "sbs/gaussian.hpp"

#include "sbs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sbs
{

namespace
{

void require_positive(const GaussianBranch& b)
{
	if(!(b.sigma > 0.0) || !std::isfinite(b.sigma))
	{
		throw std::invalid_argument("Gaussian sigma must be positive");
	}
}

} // namespace

double gaussian_pdf(double x, const GaussianBranch& b)
{
	const double z = (x - b.mu) / b.sigma;
	return std::exp(-0.5 * z * z) / (b.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double fidelity_incoherent_pair(const GaussianBranch& b1, const GaussianBranch& b2)
{
	require_positive(b1);
	require_positive(b2);
	const double s2 = b1.sigma * b1.sigma + b2.sigma * b2.sigma;
	const double dmu = b1.mu - b2.mu;
	return std::sqrt(2.0 * b1.sigma * b2.sigma / s2) * std::exp(-dmu * dmu / (4.0 * s2));
}

double fidelity_transformed_env(const GaussianBranch& e1_i, const GaussianBranch& e1_ip, const GaussianBranch& ej_i,
	const GaussianBranch& ej_ip)
{
	for(const auto* b : {&e1_i, &e1_ip, &ej_i, &ej_ip})
	{
		require_positive(*b);
	}
	const double a_i = e1_i.sigma * e1_i.sigma + ej_i.sigma * ej_i.sigma;
	const double a_ip = e1_ip.sigma * e1_ip.sigma + ej_ip.sigma * ej_ip.sigma;
	const double total = a_i + a_ip;
	const double shift = e1_i.mu - e1_ip.mu - ej_i.mu + ej_ip.mu;
	return std::sqrt(2.0) * std::pow(a_i * a_ip, 0.25) / std::sqrt(total) * std::exp(-shift * shift / (4.0 * total));
}

double fidelity_transformed_system(double x_i, double x_ip, const GaussianBranch& e1_i, const GaussianBranch& e1_ip)
{
	return fidelity_incoherent_pair({x_i - e1_i.mu, e1_i.sigma}, {x_ip - e1_ip.mu, e1_ip.sigma});
}

double linear_fidelity_coherent_system(const GaussianBranch& s_i, const GaussianBranch& s_ip,
	const GaussianBranch& e1_i, const GaussianBranch& e1_ip)
{
	for(const auto* b : {&s_i, &s_ip, &e1_i, &e1_ip})
	{
		require_positive(*b);
	}
	const double ss = s_i.sigma * s_i.sigma + s_ip.sigma * s_ip.sigma;
	const double total = ss + e1_i.sigma * e1_i.sigma + e1_ip.sigma * e1_ip.sigma;
	const double shift = e1_i.mu - s_i.mu - e1_ip.mu + s_ip.mu;
	return 2.0 * s_i.sigma * s_ip.sigma / std::sqrt(ss * total) * std::exp(-shift * shift / (2.0 * total));
}

double macrofraction_fidelity(const MacrofractionSpec& spec)
{
	if(spec.environments.empty())
	{
		throw std::invalid_argument("macrofraction needs at least one environment");
	}
	double f = 1.0;
	for(const auto& [b_i, b_ip] : spec.environments)
	{
		f *= fidelity_transformed_env(spec.frame_i, spec.frame_ip, b_i, b_ip);
	}
	return f;
}

std::vector<SweepCell> sweep_localisation_vs_fraction(const SweepConfig& cfg)
{
	if(cfg.sigmas.empty() || cfg.fraction_sizes.empty())
	{
		throw std::invalid_argument("sweep grids must be nonempty");
	}
	if(cfg.samples < 1)
	{
		throw std::invalid_argument("sweep needs at least one sample");
	}
	if(!(cfg.hi > cfg.lo))
	{
		throw std::invalid_argument("sweep interval is empty");
	}
	for(double s : cfg.sigmas)
	{
		if(!(s > 0.0))
		{
			throw std::invalid_argument("sigma must be positive");
		}
	}
	for(int f : cfg.fraction_sizes)
	{
		if(f < 1)
		{
			throw std::invalid_argument("fraction size must be at least 1");
		}
	}
	const int max_f = *std::max_element(cfg.fraction_sizes.begin(), cfg.fraction_sizes.end());

	std::vector<double> sums(cfg.sigmas.size() * cfg.fraction_sizes.size(), 0.0);
	const Rng master(cfg.seed, "gaussian-sweep", "means");
	for(int s = 0; s < cfg.samples; ++s)
	{
		Rng rng = master.fork(static_cast<std::uint64_t>(s));
		const double frame_mu0 = rng.uniform(cfg.lo, cfg.hi);
		const double frame_mu1 = rng.uniform(cfg.lo, cfg.hi);
		std::vector<std::pair<double, double>> env_mu(static_cast<std::size_t>(max_f));
		for(auto& [m0, m1] : env_mu)
		{
			m0 = rng.uniform(cfg.lo, cfg.hi);
			m1 = rng.uniform(cfg.lo, cfg.hi);
		}
		for(std::size_t a = 0; a < cfg.sigmas.size(); ++a)
		{
			const double sigma = cfg.sigmas[a];
			for(std::size_t b = 0; b < cfg.fraction_sizes.size(); ++b)
			{
				MacrofractionSpec spec;
				spec.frame_i = {frame_mu0, sigma};
				spec.frame_ip = {frame_mu1, sigma};
				for(int j = 0; j < cfg.fraction_sizes[b]; ++j)
				{
					spec.environments.emplace_back(GaussianBranch{env_mu[j].first, sigma},
						GaussianBranch{env_mu[j].second, sigma});
				}
				sums[a * cfg.fraction_sizes.size() + b] += macrofraction_fidelity(spec);
			}
		}
	}

	std::vector<SweepCell> cells;
	for(std::size_t a = 0; a < cfg.sigmas.size(); ++a)
	{
		for(std::size_t b = 0; b < cfg.fraction_sizes.size(); ++b)
		{
			cells.push_back({cfg.sigmas[a], cfg.fraction_sizes[b],
				sums[a * cfg.fraction_sizes.size() + b] / cfg.samples, cfg.samples, cfg.seed});
		}
	}
	return cells;
}

} // namespace sbs
