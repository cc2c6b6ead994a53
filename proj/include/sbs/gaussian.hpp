#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace sbs
{

struct GaussianBranch
{
	double mu = 0.0;
	double sigma = 1.0;
};

/// Gaussian density f(x | mu, sigma).
double gaussian_pdf(double x, const GaussianBranch& b);

/// B between two position-diagonal Gaussian states.
double fidelity_incoherent_pair(const GaussianBranch& b1, const GaussianBranch& b2);

/// B between the conditional states of E_j seen from E_1, for branches i, i'.
/// In the new frame E_j sits at x_j - x_1, a Gaussian of mean mu_j - mu_1 and
/// variance sigma_j^2 + sigma_1^2.
double fidelity_transformed_env(const GaussianBranch& e1_i, const GaussianBranch& e1_ip, const GaussianBranch& ej_i,
	const GaussianBranch& ej_ip);

/// B between conditional system states (system at x_i, x_ip) seen from E_1.
double fidelity_transformed_system(double x_i, double x_ip, const GaussianBranch& e1_i, const GaussianBranch& e1_ip);

/// Tr[rho_{S|i} rho_{S|i'}] for a coherent Gaussian system wavepacket seen
/// from an incoherently spread E_1.
double linear_fidelity_coherent_system(const GaussianBranch& s_i, const GaussianBranch& s_ip,
	const GaussianBranch& e1_i, const GaussianBranch& e1_ip);

struct MacrofractionSpec
{
	std::vector<std::pair<GaussianBranch, GaussianBranch>> environments; // (i, i') per E_j in F
	GaussianBranch frame_i;
	GaussianBranch frame_ip;
};

/// Product of the per-environment transformed fidelities over F.
double macrofraction_fidelity(const MacrofractionSpec& spec);

struct SweepConfig
{
	std::vector<double> sigmas;
	std::vector<int> fraction_sizes;
	int samples = 400;
	double lo = -1.0;
	double hi = 1.0;
	std::uint64_t seed = 0;
};

struct SweepCell
{
	double sigma = 0.0;
	int fraction_size = 0;
	double mean_fidelity = 0.0;
	int samples = 0;
	std::uint64_t seed = 0;
};

/// Mean macrofraction fidelity on the (sigma, |F|) grid. Each sample draws
/// the means of max|F| environments plus the frame environment once; every
/// grid cell of that sample reuses those draws (the first |F| environments),
/// so cells differ only through sigma and |F|.
std::vector<SweepCell> sweep_localisation_vs_fraction(const SweepConfig& cfg);

} // namespace sbs
