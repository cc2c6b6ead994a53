#pragma once

#include "sbs/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sbs
{

inline constexpr double kPositionTol = 1e-9;

/// psi(x | i) on a finite set of real positions.
struct Wavefunction
{
	std::vector<double> positions;
	std::vector<Complex> amplitudes;
};

/// t(x, x' | i, j) on a finite set of real positions.
struct EnvConditional
{
	std::vector<double> positions;
	Matrix table;
};

/// rho = sum_i p_i |psi_i><psi_i| (x) prod_j rho_{E_j|i}
struct BranchSpec
{
	std::vector<double> p;
	std::vector<Wavefunction> system;             // per branch i
	std::vector<std::vector<EnvConditional>> env; // [i][j]

	[[nodiscard]] std::size_t branches() const { return p.size(); }
	[[nodiscard]] std::size_t environments() const { return env.empty() ? 0 : env.front().size(); }
};

/// Throws std::invalid_argument for a malformed spec.
void validate(const BranchSpec& spec);

struct Violation
{
	std::string condition;
	std::vector<Index> indices;
	double magnitude = 0.0;
	std::string detail;
};

struct CheckReport
{
	std::vector<Violation> violations;
	std::vector<std::string> notes;

	[[nodiscard]] bool passed() const { return violations.empty(); }
	[[nodiscard]] bool violates(const std::string& condition) const;
	[[nodiscard]] std::string summary() const;
};

/// Distinctness / differences are taken mod `modulus` when set (ring
/// instances); otherwise on the real line with absolute tolerance.
struct CheckOptions
{
	double tol = kPositionTol;
	std::optional<Index> modulus;
};

struct GhzTransform
{
	std::vector<std::vector<double>> positions; // [i][slot]; target slot holds -x_t
	std::vector<double> p;
	bool objective = false;
	std::vector<std::size_t> degenerate_slots; // slots that collapse to one value
	CheckReport report;
};

/// positions[i] = (x_i^S, x_i^{E1}, ..., x_i^{EN}); target in 1..N.
GhzTransform ghz_frame_transform(const std::vector<std::vector<double>>& positions, const std::vector<double>& p,
	std::size_t target, const CheckOptions& opt = {});

CheckReport check_theorem1(const BranchSpec& spec, const CheckOptions& opt = {});

struct Prop1Result
{
	CheckReport report;
	/// Per frame E_j: new objective information p_i t(x | i, j) and its
	/// (i, x) labels, in branch then position order.
	std::vector<std::vector<double>> new_spectrum;
	std::vector<std::vector<std::pair<Index, double>>> new_branches;
};

Prop1Result check_proposition1(const BranchSpec& spec, const CheckOptions& opt = {});

/// Transform to `target_frame` (a label of the layout, or "C"/"lab" for no
/// transform), trace out the old frame slot C and any labels in `trace_out`,
/// then test SBS form: (a) no coherence between system pointer blocks, (b) pairwise B,
/// (c) conditional MI.
CheckReport check_reduced_objectivity(const DensityMatrix& rho, const SubsystemLayout& layout,
	const std::string& target_frame, double tol = 1e-9, const std::vector<std::string>& trace_out = {},
	const std::string& system = "S");

/// Sampled GHZ of Appendix-A type: x_S = x_n, x_{E_j} = phi_j(x_n).
struct InjectivityInput
{
	std::vector<double> x;
	std::vector<std::vector<double>> phi; // phi[j][n], j = 0 is E_1
	std::size_t frame = 0;                // index into phi
};

CheckReport check_injectivity(const InjectivityInput& input, double tol = kPositionTol);

/// Spec positions rounded onto Z_D after scaling by K.
struct RingInstance
{
	Index D = 0;
	double scale = 1.0;
	double offset = 0.0;
	BranchSpec spec; // integer positions in [0, D)
	SubsystemLayout layout;
	DensityMatrix rho;
};

/// Smallest (K, D) with D <= max_dim for which rounding keeps every
/// distinct value distinct and the ring spec passes `which` checks
/// ("theorem1" or "prop1"). Throws std::runtime_error if none exists.
RingInstance instantiate_on_ring(const BranchSpec& spec, Index max_dim, const std::string& which = "theorem1",
	Index max_scale = 64);

/// Joint state of an integer-position spec on Z_D; layout S, E1..EN.
DensityMatrix build_state(const BranchSpec& ring_spec, Index D);

} // namespace sbs
