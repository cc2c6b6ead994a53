#include "sbs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sbs
{

namespace
{

std::vector<std::string> others(const SubsystemLayout& layout, const std::string& system)
{
	std::vector<std::string> out;
	for(const auto& label : layout.labels())
	{
		if(label != system)
		{
			out.push_back(label);
		}
	}
	return out;
}

void check_basis(const Matrix& basis, Index dim)
{
	if(basis.rows() != dim || basis.cols() != dim)
	{
		throw std::invalid_argument("pointer basis has wrong dimension");
	}
	const double defect = (basis.adjoint() * basis - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
	if(defect > 1e-10)
	{
		throw std::invalid_argument("pointer basis is not orthonormal");
	}
}

// State expressed with the system slot in the pointer basis. Holds a copy
// only when a rotation is needed.
class PointerFrame
{
public:
	PointerFrame(const Matrix& m, const SubsystemLayout& layout, const std::string& system,
		const PointerBasis& basis)
		: ref_{&m}
	{
		if(m.rows() != layout.total_dim())
		{
			throw std::invalid_argument("layout does not match state dimension");
		}
		const std::size_t pos = layout.position(system);
		if(!basis)
		{
			return;
		}
		check_basis(*basis, layout.dims()[pos]);
		Index left = 1;
		Index right = 1;
		for(std::size_t k = 0; k < layout.size(); ++k)
		{
			if(k < pos)
			{
				left *= layout.dims()[k];
			}
			else if(k > pos)
			{
				right *= layout.dims()[k];
			}
		}
		const Matrix u = tensor(Matrix::Identity(left, left),
			tensor(Matrix(basis->adjoint()), Matrix::Identity(right, right)));
		rotated_ = u * m * u.adjoint();
		ref_ = &rotated_;
	}

	const Matrix& matrix() const { return *ref_; }

private:
	const Matrix* ref_;
	Matrix rotated_;
};

std::vector<Index> branch_indices(const SubsystemLayout& layout, std::size_t pos, Index i)
{
	std::vector<Index> idx;
	for(Index flat = 0; flat < layout.total_dim(); ++flat)
	{
		if(layout.unflatten(flat)[pos] == i)
		{
			idx.push_back(flat);
		}
	}
	return idx;
}

Matrix hermitize(const Matrix& m)
{
	return 0.5 * (m + m.adjoint());
}

double entropy_of(const Matrix& m)
{
	return von_neumann_entropy(DensityMatrix(hermitize(m)));
}

std::vector<double> diagonal_of(const Matrix& marginal)
{
	std::vector<double> p(static_cast<std::size_t>(marginal.rows()));
	for(Index i = 0; i < marginal.rows(); ++i)
	{
		p[i] = marginal(i, i).real();
	}
	return p;
}

double off_diagonal_sum(const Matrix& marginal)
{
	double g = 0.0;
	for(Index r = 0; r < marginal.rows(); ++r)
	{
		for(Index c = 0; c < marginal.cols(); ++c)
		{
			if(r != c)
			{
				g += std::abs(marginal(r, c));
			}
		}
	}
	return g;
}

// Normalised conditional states on the non-system subsystems, one per
// branch; empty optional for branches below threshold.
struct Conditionals
{
	std::vector<double> p;
	Matrix marginal;
	SubsystemLayout rest;
	std::vector<std::optional<Matrix>> states;
};

Conditionals conditionals(const Matrix& m, const SubsystemLayout& layout, const std::string& system,
	double threshold)
{
	Conditionals out;
	out.marginal = partial_trace(m, layout, {system});
	out.p = diagonal_of(out.marginal);
	for(double& v : out.p)
	{
		v = std::max(v, 0.0); // rounding can leave -1e-17 on empty branches
	}
	out.rest = layout.restricted(others(layout, system));
	const std::size_t pos = layout.position(system);
	for(Index i = 0; i < static_cast<Index>(out.p.size()); ++i)
	{
		if(out.p[i] < threshold)
		{
			out.states.emplace_back();
			continue;
		}
		const auto idx = branch_indices(layout, pos, i);
		out.states.emplace_back(hermitize(m(idx, idx)) / out.p[i]);
	}
	return out;
}

double mutual_information_of(const Matrix& m, const SubsystemLayout& layout, const std::string& a,
	const std::string& b)
{
	if(a == b)
	{
		throw std::invalid_argument("quantum_mutual_information: labels must differ");
	}
	const Matrix ab = partial_trace(m, layout, {a, b});
	const auto ab_layout = layout.restricted({a, b});
	return entropy_of(partial_trace(ab, ab_layout, {a})) + entropy_of(partial_trace(ab, ab_layout, {b})) -
		entropy_of(ab);
}

} // namespace

std::vector<double> system_spectrum(const DensityMatrix& rho, const SubsystemLayout& layout,
	const std::string& system, const PointerBasis& basis)
{
	const PointerFrame frame(rho.matrix(), layout, system, basis);
	return diagonal_of(partial_trace(frame.matrix(), layout, {system}));
}

DensityMatrix conditional_state(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& system,
	const std::vector<std::string>& observers, Index i, const PointerBasis& basis, double threshold)
{
	if(observers.empty())
	{
		throw std::invalid_argument("conditional_state: no observer given");
	}
	for(const auto& o : observers)
	{
		if(o == system || !layout.contains(o))
		{
			throw std::invalid_argument("conditional_state: invalid observer " + o);
		}
	}
	const PointerFrame frame(rho.matrix(), layout, system, basis);
	const std::size_t pos = layout.position(system);
	if(i < 0 || i >= layout.dims()[pos])
	{
		throw std::invalid_argument("conditional_state: branch index out of range");
	}
	const auto idx = branch_indices(layout, pos, i);
	const Matrix block = hermitize(frame.matrix()(idx, idx));
	const double p = block.trace().real();
	if(p < threshold)
	{
		throw UndefinedConditional("conditional state undefined for branch " + std::to_string(i));
	}
	const auto rest = layout.restricted(others(layout, system));
	return DensityMatrix(partial_trace(Matrix(block / p), rest, observers));
}

ErrorBounds error_bounds(const std::vector<double>& p, const Eigen::MatrixXd& fidelity)
{
	const auto n = static_cast<Index>(p.size());
	if(fidelity.rows() != n || fidelity.cols() != n)
	{
		throw std::invalid_argument("error_bounds: table size does not match probabilities");
	}
	ErrorBounds b;
	for(Index i = 0; i < n; ++i)
	{
		for(Index j = 0; j < n; ++j)
		{
			if(i == j)
			{
				continue;
			}
			const double f = fidelity(i, j);
			b.upper += std::sqrt(std::max(p[i] * p[j], 0.0)) * f;
			if(i < j)
			{
				b.lower += p[i] * p[j] * f * f;
			}
		}
	}
	b.trivial = b.upper >= 1.0;
	return b;
}

double decoherence_gamma(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& system,
	const PointerBasis& basis)
{
	const PointerFrame frame(rho.matrix(), layout, system, basis);
	return off_diagonal_sum(partial_trace(frame.matrix(), layout, {system}));
}

double eta_bound(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& system,
	const PointerBasis& basis)
{
	return compute_report(rho, layout, system, "", basis).eta;
}

double conditional_mutual_information(const DensityMatrix& rho, const SubsystemLayout& layout,
	const std::string& system, const std::pair<std::string, std::string>& observers, const PointerBasis& basis)
{
	const auto& [a, b] = observers;
	if(a == b || a == system || b == system || !layout.contains(a) || !layout.contains(b))
	{
		throw std::invalid_argument("conditional_mutual_information: need two distinct observers");
	}
	const PointerFrame frame(rho.matrix(), layout, system, basis);
	const auto cond = conditionals(frame.matrix(), layout, system, kConditionalThreshold);
	double total = 0.0;
	for(std::size_t i = 0; i < cond.p.size(); ++i)
	{
		if(!cond.states[i])
		{
			continue;
		}
		const Matrix& s = *cond.states[i];
		const Matrix ab = partial_trace(s, cond.rest, {a, b});
		const auto ab_layout = cond.rest.restricted({a, b});
		const double h_a = entropy_of(partial_trace(ab, ab_layout, {a}));
		const double h_b = entropy_of(partial_trace(ab, ab_layout, {b}));
		total += cond.p[i] * (h_a + h_b - entropy_of(ab));
	}
	return total;
}

double holevo_information(const std::vector<double>& p, const std::vector<DensityMatrix>& states)
{
	if(p.size() != states.size() || states.empty())
	{
		throw std::invalid_argument("holevo_information: mismatched ensemble");
	}
	Matrix avg = Matrix::Zero(states.front().dim(), states.front().dim());
	double mean_entropy = 0.0;
	for(std::size_t i = 0; i < p.size(); ++i)
	{
		avg += p[i] * states[i].matrix();
		mean_entropy += p[i] * von_neumann_entropy(states[i]);
	}
	return entropy_of(avg) - mean_entropy;
}

double quantum_mutual_information(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& a,
	const std::string& b)
{
	return mutual_information_of(rho.matrix(), layout, a, b);
}

SaturationStats saturation_stats(const std::vector<std::pair<double, double>>& series,
	std::pair<double, double> window)
{
	std::vector<double> in_window;
	for(const auto& [t, v] : series)
	{
		if(t >= window.first && t <= window.second)
		{
			in_window.push_back(v);
		}
	}
	if(in_window.empty())
	{
		throw std::invalid_argument("saturation_stats: empty window");
	}
	SaturationStats s;
	for(double v : in_window)
	{
		s.i_sat += v;
	}
	s.i_sat /= static_cast<double>(in_window.size());
	for(double v : in_window)
	{
		s.sigma_i += (v - s.i_sat) * (v - s.i_sat);
	}
	s.sigma_i = std::sqrt(s.sigma_i / static_cast<double>(in_window.size()));
	s.t_sat = series.back().first;
	for(const auto& [t, v] : series)
	{
		if(v >= s.i_sat - s.sigma_i)
		{
			s.t_sat = t;
			break;
		}
	}
	return s;
}

SbsReport compute_report(const DensityMatrix& rho, const SubsystemLayout& layout, const std::string& system,
	const std::string& frame_label, const PointerBasis& basis)
{
	const PointerFrame frame(rho.matrix(), layout, system, basis);
	const auto cond = conditionals(frame.matrix(), layout, system, kConditionalThreshold);
	const auto n = static_cast<Index>(cond.p.size());

	SbsReport report;
	report.frame = frame_label;
	report.system = system;
	report.p = cond.p;
	report.gamma = off_diagonal_sum(cond.marginal);
	report.eta = report.gamma;

	std::vector<std::vector<double>> branch_entropy;
	for(const auto& label : cond.rest.labels())
	{
		ObserverReport obs;
		obs.label = label;
		obs.fidelity = Eigen::MatrixXd::Identity(n, n);

		std::vector<Matrix> roots(static_cast<std::size_t>(n));
		std::vector<double> entropies(static_cast<std::size_t>(n), 0.0);
		const Index d = cond.rest.dim_of(label);
		Matrix avg = Matrix::Zero(d, d);
		double mean_entropy = 0.0;
		for(Index i = 0; i < n; ++i)
		{
			if(!cond.states[i])
			{
				continue;
			}
			const Matrix local = hermitize(partial_trace(*cond.states[i], cond.rest, {label}));
			roots[i] = matrix_sqrt(local);
			entropies[i] = entropy_of(local);
			avg += cond.p[i] * local;
			mean_entropy += cond.p[i] * entropies[i];
		}
		for(Index i = 0; i < n; ++i)
		{
			for(Index j = i + 1; j < n; ++j)
			{
				double f = 0.0;
				if(cond.states[i] && cond.states[j])
				{
					f = std::min(1.0, trace_norm(roots[i] * roots[j]));
				}
				obs.fidelity(i, j) = f;
				obs.fidelity(j, i) = f;
				report.eta += 2.0 * std::sqrt(cond.p[i] * cond.p[j]) * f;
			}
		}
		obs.bounds = error_bounds(cond.p, obs.fidelity);
		obs.holevo = entropy_of(avg) - mean_entropy;
		obs.qmi = mutual_information_of(frame.matrix(), layout, system, label);
		report.observers.push_back(std::move(obs));
		branch_entropy.push_back(std::move(entropies));
	}

	report.i_mean = std::numeric_limits<double>::quiet_NaN();
	if(cond.rest.size() >= 2)
	{
		const std::vector<std::string> pair{cond.rest.labels()[0], cond.rest.labels()[1]};
		const auto pair_layout = cond.rest.restricted(pair);
		double total = 0.0;
		for(Index i = 0; i < n; ++i)
		{
			if(!cond.states[i])
			{
				continue;
			}
			const Matrix ab =
				cond.rest.size() == 2 ? *cond.states[i] : partial_trace(*cond.states[i], cond.rest, pair);
			total += cond.p[i] * (branch_entropy[0][i] + branch_entropy[1][i] - entropy_of(ab));
		}
		report.i_mean = total;
	}
	return report;
}

} // namespace sbs
