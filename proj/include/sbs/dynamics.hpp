#pragma once

#include "sbs/linalg.hpp"
#include "sbs/metrics.hpp"
#include "sbs/rng.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace sbs
{

struct Couplings
{
	double central = 1.0;
	double local = 0.01;   // self hopping, environment interaction, local random terms
	double global = 0.001; // global random term
};

enum class Preset
{
	desk,
	paper
};

struct CaseConfig
{
	std::string case_id = "1.1";
	Index D = 12;
	std::uint64_t seed = 0;
	std::vector<double> time_grid_short;
	std::vector<double> time_grid_long;
	std::pair<double, double> window{50000.0, 1000000.0};
	Couplings couplings;
};

/// Which Hamiltonian pieces a case switches on, besides the central term.
struct CaseTerms
{
	bool self_hopping = false;
	bool self_random = false;
	bool env_interaction = false;
	bool env_random = false;
	bool global_random = false;
};

const std::vector<std::string>& known_cases();
bool is_known_case(const std::string& case_id);
CaseTerms case_terms(const std::string& case_id);

/// Case config with the grids and window of the given preset.
CaseConfig make_case_config(const std::string& case_id, Preset preset, std::uint64_t seed = 0, Index D = 12);
void apply_preset(CaseConfig& cfg, Preset preset);
Preset parse_preset(const std::string& name);
void validate(const CaseConfig& cfg);

/// Hermitian G_s with exp(-i G_s) = X^s, X the cyclic shift |k> -> |k+1>;
/// principal branch, eigenvalues in (-pi, pi].
Matrix shift_generator(Index D, Index s);

HermitianOperator build_central_hamiltonian(Index D, double coupling = 1.0);
/// Nearest-neighbour ring hopping on one environment (D x D).
HermitianOperator build_self_hamiltonian(Index D, double coupling = 0.01);
/// Distance-dependent attraction on E1 x E2 (D^2 x D^2).
HermitianOperator build_env_interaction(Index D, double coupling = 0.01);
/// Real symmetric matrix with zero diagonal and U[0, max_rate] entries,
/// drawn row by row over the upper triangle.
HermitianOperator build_random_symmetric(Index dim, Rng& rng, double max_rate);
/// Random jumps between all joint basis states of S x E1 x E2.
HermitianOperator build_global_random(Index D, Rng& rng, double max_rate = 0.001);

DensityMatrix initial_state(const std::string& case_id, Index D);

struct EvolutionPlan
{
	HermitianOperator h_phase1; // central + extras, t in [0, 1]
	HermitianOperator h_phase2; // extras only, t > 1
};

EvolutionPlan build_plan(const CaseConfig& cfg);

struct CaseResult
{
	std::vector<double> times;
	std::vector<SbsReport> frame_c;
	std::vector<SbsReport> frame_e1;
	SaturationStats saturation_c;
	SaturationStats saturation_e1;
	bool has_saturation = false; // false when no grid time falls in the window
};

/// Called once per grid time with the state in frame C and in frame E1.
using StateHook = std::function<void(double t, const DensityMatrix& rho_c, const DensityMatrix& rho_e1)>;

CaseResult run_case(const CaseConfig& cfg, const StateHook& hook = {});

/// Merged, sorted grid actually evaluated by run_case.
std::vector<double> case_times(const CaseConfig& cfg);

} // namespace sbs
