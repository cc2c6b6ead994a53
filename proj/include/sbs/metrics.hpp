#pragma once

#include "sbs/linalg.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sbs
{

inline constexpr double kConditionalThreshold = 1e-12;

/// Thrown when a conditional state is requested for a branch of
/// (numerically) zero probability.
class UndefinedConditional : public std::domain_error
{
public:
	using std::domain_error::domain_error;
};

/// Orthonormal pointer basis as matrix columns; std::nullopt is the
/// position basis {|i>}.
using PointerBasis = std::optional<Matrix>;

struct ErrorBounds
{
	double lower = 0.0;
	double upper = 0.0;
	bool trivial = false; // upper >= 1
};

struct ObserverReport
{
	std::string label;
	Eigen::MatrixXd fidelity;
	ErrorBounds bounds;
	double holevo = 0.0;
	double qmi = 0.0;
};

struct SbsReport
{
	std::string frame;
	std::string system;
	std::vector<double> p;
	std::vector<ObserverReport> observers;
	double eta = 0.0;
	double gamma = 0.0;
	double i_mean = 0.0; // conditional MI of the first two observers
};

struct SaturationStats
{
	double i_sat = 0.0;
	double sigma_i = 0.0;
	double t_sat = 0.0;
};

std::vector<double> system_spectrum(const DensityMatrix& rho, const SubsystemLayout& layout,
	const std::string& system, const PointerBasis& basis = std::nullopt);

DensityMatrix conditional_state(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& system,
	const std::vector<std::string>& observers, Index i, const PointerBasis& basis = std::nullopt,
	double threshold = kConditionalThreshold);

ErrorBounds error_bounds(const std::vector<double>& p, const Eigen::MatrixXd& fidelity);

/// Sum of |off-diagonal| entries of the reduced system state.
double decoherence_gamma(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& system,
	const PointerBasis& basis = std::nullopt);

/// Gamma + sum_{i != j} sqrt(p_i p_j) sum_k B(rho_{k|i}, rho_{k|j}), k over every
/// non-system subsystem.
double eta_bound(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& system,
	const PointerBasis& basis = std::nullopt);

double conditional_mutual_information(const DensityMatrix& rho, const SubsystemLayout& layout,
	const std::string& system, const std::pair<std::string, std::string>& observers,
	const PointerBasis& basis = std::nullopt);

double holevo_information(const std::vector<double>& p, const std::vector<DensityMatrix>& states);

double quantum_mutual_information(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& a,
	const std::string& b);

SaturationStats saturation_stats(const std::vector<std::pair<double, double>>& series,
	std::pair<double, double> window);

/// Every diagnostic at once; conditional blocks are extracted a single time.
/// Observers default to all non-system labels in layout order.
SbsReport compute_report(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& system,
	const std::string& frame, const PointerBasis& basis = std::nullopt);

} // namespace sbs
