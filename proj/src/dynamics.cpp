#include "sbs/dynamics.hpp"

#include "sbs/ring.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace sbs
{

namespace
{

std::vector<double> short_grid()
{
	std::vector<double> t;
	for(int k = 0; k <= 20; ++k)
	{
		t.push_back(k * 0.05);
	}
	return t;
}

std::vector<double> long_grid(Preset preset)
{
	std::vector<double> t{1.5, 2, 3, 5, 7, 10, 15, 20, 30, 50, 70, 100, 150, 200, 300};
	if(preset == Preset::desk)
	{
		for(int k = 1; k <= 20; ++k)
		{
			t.push_back(500.0 * k);
		}
		return t;
	}
	for(double x : {500.0, 700.0, 1000.0, 2000.0, 5000.0, 10000.0, 20000.0})
	{
		t.push_back(x);
	}
	for(int k = 1; k <= 20; ++k)
	{
		t.push_back(50000.0 * k);
	}
	return t;
}

Matrix identity(Index d)
{
	return Matrix::Identity(d, d);
}

Matrix pure_projector(Index D, Index k)
{
	Matrix m = Matrix::Zero(D, D);
	m(k, k) = 1.0;
	return m;
}

} // namespace

const std::vector<std::string>& known_cases()
{
	static const std::vector<std::string> ids{"1.1", "1.2", "1.3", "1.4", "1.5", "2.1", "2.2", "3.1", "3.2", "4"};
	return ids;
}

bool is_known_case(const std::string& case_id)
{
	const auto& ids = known_cases();
	return std::find(ids.begin(), ids.end(), case_id) != ids.end();
}

CaseTerms case_terms(const std::string& case_id)
{
	if(!is_known_case(case_id))
	{
		throw std::invalid_argument("unknown case " + case_id);
	}
	CaseTerms t;
	if(case_id == "2.1")
	{
		t.self_hopping = true;
	}
	else if(case_id == "2.2")
	{
		t.self_random = true;
	}
	else if(case_id == "3.1")
	{
		t.env_interaction = true;
	}
	else if(case_id == "3.2")
	{
		t.env_random = true;
	}
	else if(case_id == "4")
	{
		t.self_hopping = true;
		t.env_interaction = true;
		t.global_random = true;
	}
	return t;
}

Preset parse_preset(const std::string& name)
{
	if(name == "desk")
	{
		return Preset::desk;
	}
	if(name == "paper")
	{
		return Preset::paper;
	}
	throw std::invalid_argument("unknown preset " + name);
}

void apply_preset(CaseConfig& cfg, Preset preset)
{
	cfg.time_grid_short = short_grid();
	cfg.time_grid_long = long_grid(preset);
	cfg.window = preset == Preset::desk ? std::pair{500.0, 10000.0} : std::pair{50000.0, 1000000.0};
}

CaseConfig make_case_config(const std::string& case_id, Preset preset, std::uint64_t seed, Index D)
{
	CaseConfig cfg;
	cfg.case_id = case_id;
	cfg.seed = seed;
	cfg.D = D;
	apply_preset(cfg, preset);
	validate(cfg);
	return cfg;
}

void validate(const CaseConfig& cfg)
{
	if(!is_known_case(cfg.case_id))
	{
		throw std::invalid_argument("unknown case " + cfg.case_id);
	}
	if(cfg.D < 2)
	{
		throw std::invalid_argument("D must be at least 2");
	}
	const auto& c = cfg.couplings;
	if(!(c.central > 0.0 && c.local > 0.0 && c.global > 0.0))
	{
		throw std::invalid_argument("couplings must be positive");
	}
	if(c.central < 100.0 * c.local || 100.0 * c.local < 10.0 * c.global)
	{
		throw std::invalid_argument("couplings break the central >= 100 local >= 10 global ordering");
	}
	for(double t : cfg.time_grid_short)
	{
		if(t < 0.0 || t > 1.0)
		{
			throw std::invalid_argument("short grid times must lie in [0, 1]");
		}
	}
	for(double t : cfg.time_grid_long)
	{
		if(!(t > 1.0) || !std::isfinite(t))
		{
			throw std::invalid_argument("long grid times must exceed 1");
		}
	}
	if(cfg.time_grid_short.empty() && cfg.time_grid_long.empty())
	{
		throw std::invalid_argument("time grid is empty");
	}
	if(cfg.window.first > cfg.window.second)
	{
		throw std::invalid_argument("saturation window is reversed");
	}
}

Matrix shift_generator(Index D, Index s)
{
	Matrix fourier(D, D);
	const double norm = 1.0 / std::sqrt(static_cast<double>(D));
	for(Index k = 0; k < D; ++k)
	{
		for(Index m = 0; m < D; ++m)
		{
			fourier(k, m) = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>((m * k) % D) / D);
		}
	}
	// X |f_m> = w^{-m} |f_m>, so X^s has phase exp(-i theta) with theta = 2 pi m s / D.
	RealVector theta(D);
	for(Index m = 0; m < D; ++m)
	{
		const Index r = (m * s) % D;
		double th = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(D);
		if(2 * r > D)
		{
			th -= 2.0 * std::numbers::pi;
		}
		theta(m) = th;
	}
	Matrix g = fourier * theta.asDiagonal() * fourier.adjoint();
	return 0.5 * (g + g.adjoint());
}

HermitianOperator build_central_hamiltonian(Index D, double coupling)
{
	if(D < 2)
	{
		throw std::invalid_argument("D must be at least 2");
	}
	const Index n = D * D * D;
	Matrix h = Matrix::Zero(n, n);
	const Matrix id = identity(D);
	for(Index s = 0; s < D; ++s)
	{
		const Matrix g = shift_generator(D, s);
		const Matrix pair = tensor(g, id) + tensor(id, g);
		h.block(s * D * D, s * D * D, D * D, D * D) = coupling * pair;
	}
	return HermitianOperator(std::move(h));
}

HermitianOperator build_self_hamiltonian(Index D, double coupling)
{
	if(D < 2)
	{
		throw std::invalid_argument("D must be at least 2");
	}
	Matrix h = Matrix::Zero(D, D);
	for(Index k = 0; k < D; ++k)
	{
		const Index next = ring_mod(k + 1, D);
		h(next, k) += coupling;
		h(k, next) += coupling;
	}
	return HermitianOperator(std::move(h));
}

HermitianOperator build_env_interaction(Index D, double coupling)
{
	if(D < 2)
	{
		throw std::invalid_argument("D must be at least 2");
	}
	Matrix h = Matrix::Zero(D * D, D * D);
	auto connect = [&](Index k, Index l, Index k2, Index l2, double amp) {
		const Index src = k * D + l;
		const Index dst = ring_mod(k2, D) * D + ring_mod(l2, D);
		h(dst, src) = amp;
		h(src, dst) = amp;
	};
	for(Index k = 0; k < D; ++k)
	{
		for(Index l = 0; l < D; ++l)
		{
			const Index ahead = ring_mod(l - k, D); // l sits `ahead` steps after k
			if(ahead == 0)
			{
				continue;
			}
			const Index r = std::min(ahead, D - ahead);
			const double amp = coupling / (1.0 + static_cast<double>(r));
			if(2 * ahead < D)
			{
				connect(k, l, k + 1, l - 1, amp);
			}
			else if(2 * ahead > D)
			{
				connect(k, l, k - 1, l + 1, amp);
			}
			else
			{
				connect(k, l, k + 1, l - 1, 0.5 * amp);
				connect(k, l, k - 1, l + 1, 0.5 * amp);
			}
		}
	}
	return HermitianOperator(std::move(h));
}

HermitianOperator build_random_symmetric(Index dim, Rng& rng, double max_rate)
{
	Matrix h = Matrix::Zero(dim, dim);
	for(Index a = 0; a < dim; ++a)
	{
		for(Index b = a + 1; b < dim; ++b)
		{
			const double u = rng.uniform(0.0, max_rate);
			h(a, b) = u;
			h(b, a) = u;
		}
	}
	return HermitianOperator(std::move(h));
}

HermitianOperator build_global_random(Index D, Rng& rng, double max_rate)
{
	return build_random_symmetric(D * D * D, rng, max_rate);
}

DensityMatrix initial_state(const std::string& case_id, Index D)
{
	if(!is_known_case(case_id))
	{
		throw std::invalid_argument("unknown case " + case_id);
	}
	const Matrix mix = identity(D) / static_cast<double>(D);
	const Matrix zero = pure_projector(D, 0);
	if(case_id == "1.2")
	{
		Matrix blur = Matrix::Zero(D, D);
		blur(0, 0) += 0.8;
		blur(1 % D, 1 % D) += 0.1;
		blur(D - 1, D - 1) += 0.1;
		return DensityMatrix(tensor(mix, tensor(blur, blur)));
	}
	if(case_id == "1.3")
	{
		Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(D * D);
		for(Index i = 0; i < D; ++i)
		{
			phi(i * D + i) = 1.0 / std::sqrt(static_cast<double>(D));
		}
		return DensityMatrix(tensor(mix, Matrix(phi * phi.adjoint())));
	}
	if(case_id == "1.4")
	{
		return DensityMatrix(tensor(mix, tensor(mix, zero)));
	}
	if(case_id == "1.5")
	{
		return DensityMatrix(tensor(mix, tensor(zero, mix)));
	}
	return DensityMatrix(tensor(mix, tensor(zero, zero)));
}

EvolutionPlan build_plan(const CaseConfig& cfg)
{
	validate(cfg);
	const Index D = cfg.D;
	const auto terms = case_terms(cfg.case_id);
	const Matrix id = identity(D);

	Matrix extras = Matrix::Zero(D * D * D, D * D * D);
	if(terms.self_hopping)
	{
		const Matrix h = build_self_hamiltonian(D, cfg.couplings.local).matrix();
		extras += tensor(id, Matrix(tensor(h, id) + tensor(id, h)));
	}
	if(terms.self_random)
	{
		Rng rng1(cfg.seed, "case-" + cfg.case_id, "self-random-E1");
		Rng rng2(cfg.seed, "case-" + cfg.case_id, "self-random-E2");
		const Matrix h1 = build_random_symmetric(D, rng1, cfg.couplings.local).matrix();
		const Matrix h2 = build_random_symmetric(D, rng2, cfg.couplings.local).matrix();
		extras += tensor(id, Matrix(tensor(h1, id) + tensor(id, h2)));
	}
	if(terms.env_interaction)
	{
		extras += tensor(id, build_env_interaction(D, cfg.couplings.local).matrix());
	}
	if(terms.env_random)
	{
		Rng rng(cfg.seed, "case-" + cfg.case_id, "env-random");
		extras += tensor(id, build_random_symmetric(D * D, rng, cfg.couplings.local).matrix());
	}
	if(terms.global_random)
	{
		Rng rng(cfg.seed, "case-" + cfg.case_id, "global-random");
		extras += build_global_random(D, rng, cfg.couplings.global).matrix();
	}

	EvolutionPlan plan;
	plan.h_phase2 = HermitianOperator(extras);
	plan.h_phase1 = build_central_hamiltonian(D, cfg.couplings.central) + plan.h_phase2;
	return plan;
}

std::vector<double> case_times(const CaseConfig& cfg)
{
	std::vector<double> times = cfg.time_grid_short;
	times.insert(times.end(), cfg.time_grid_long.begin(), cfg.time_grid_long.end());
	std::sort(times.begin(), times.end());
	times.erase(std::unique(times.begin(), times.end()), times.end());
	return times;
}

CaseResult run_case(const CaseConfig& cfg, const StateHook& hook)
{
	const auto plan = build_plan(cfg);
	const Index D = cfg.D;
	const auto layout = SubsystemLayout::uniform({"S", "E1", "E2"}, D);
	const auto perm = build_frame_permutation(D, layout, "E1");

	CaseResult result;
	result.times = case_times(cfg);

	const Propagator phase1(plan.h_phase1, initial_state(cfg.case_id, D));
	std::optional<Propagator> phase2;

	for(double t : result.times)
	{
		DensityMatrix rho;
		if(t <= 1.0)
		{
			rho = phase1.at(t);
		}
		else
		{
			if(!phase2)
			{
				if(phase1.low_rank())
				{
					phase2.emplace(plan.h_phase2, *phase1.factor_at(1.0));
				}
				else
				{
					phase2.emplace(plan.h_phase2, phase1.at(1.0));
				}
			}
			rho = phase2->at(t - 1.0);
		}
		const DensityMatrix rho_e1 = apply_frame_transform(rho, perm);
		if(hook)
		{
			hook(t, rho, rho_e1);
		}
		result.frame_c.push_back(compute_report(rho, layout, "S", "C"));
		result.frame_e1.push_back(compute_report(rho_e1, perm.result, "S", "E1"));
	}

	std::vector<std::pair<double, double>> series_c;
	std::vector<std::pair<double, double>> series_e1;
	for(std::size_t k = 0; k < result.times.size(); ++k)
	{
		series_c.emplace_back(result.times[k], result.frame_c[k].i_mean);
		series_e1.emplace_back(result.times[k], result.frame_e1[k].i_mean);
	}
	const bool has_window = std::any_of(result.times.begin(), result.times.end(),
		[&](double t) { return t >= cfg.window.first && t <= cfg.window.second; });
	if(has_window)
	{
		result.has_saturation = true;
		result.saturation_c = saturation_stats(series_c, cfg.window);
		result.saturation_e1 = saturation_stats(series_e1, cfg.window);
	}
	return result;
}

} // namespace sbs
