#include "sbs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

extern "C" void zheevd_(const char* jobz, const char* uplo, const int* n, std::complex<double>* a, const int* lda,
	double* w, std::complex<double>* work, const int* lwork, double* rwork, const int* lrwork, int* iwork,
	const int* liwork, int* info);

namespace sbs
{

namespace
{

void require_square(const Matrix& m, const char* what)
{
	if(m.rows() != m.cols())
	{
		throw std::invalid_argument(std::string(what) + ": matrix is not square");
	}
}

EigenPairs run_zheevd(Matrix a, bool want_vectors)
{
	const int n = static_cast<int>(a.rows());
	EigenPairs out;
	out.values.resize(n);
	if(n == 0)
	{
		return out;
	}
	const char jobz = want_vectors ? 'V' : 'N';
	const char uplo = 'L';
	int lwork = -1;
	int lrwork = -1;
	int liwork = -1;
	int info = 0;
	std::complex<double> work_query;
	double rwork_query = 0.0;
	int iwork_query = 0;
	zheevd_(&jobz, &uplo, &n, a.data(), &n, out.values.data(), &work_query, &lwork, &rwork_query, &lrwork,
		&iwork_query, &liwork, &info);
	lwork = std::max(1, static_cast<int>(work_query.real()));
	lrwork = std::max(1, static_cast<int>(rwork_query));
	liwork = std::max(1, iwork_query);
	std::vector<std::complex<double>> work(static_cast<std::size_t>(lwork));
	std::vector<double> rwork(static_cast<std::size_t>(lrwork));
	std::vector<int> iwork(static_cast<std::size_t>(liwork));
	zheevd_(&jobz, &uplo, &n, a.data(), &n, out.values.data(), work.data(), &lwork, rwork.data(), &lrwork,
		iwork.data(), &liwork, &info);
	if(info != 0)
	{
		throw NumericalError("zheevd failed with info=" + std::to_string(info));
	}
	if(want_vectors)
	{
		out.vectors = std::move(a);
	}
	return out;
}

// Connected components of the nonzero pattern of a square matrix, each
// sorted ascending, ordered by smallest member.
std::vector<std::vector<Index>> nonzero_components(const Matrix& m)
{
	const Index n = m.rows();
	std::vector<Index> parent(static_cast<std::size_t>(n));
	std::iota(parent.begin(), parent.end(), Index{0});
	auto find = [&](Index x) {
		while(parent[x] != x)
		{
			parent[x] = parent[parent[x]];
			x = parent[x];
		}
		return x;
	};
	for(Index c = 0; c < n; ++c)
	{
		for(Index r = c + 1; r < n; ++r)
		{
			if(m(r, c) != Complex(0.0, 0.0) || m(c, r) != Complex(0.0, 0.0))
			{
				const Index a = find(r);
				const Index b = find(c);
				if(a != b)
				{
					parent[std::max(a, b)] = std::min(a, b);
				}
			}
		}
	}
	std::vector<std::vector<Index>> groups;
	std::vector<Index> slot(static_cast<std::size_t>(n), -1);
	for(Index i = 0; i < n; ++i)
	{
		const Index root = find(i);
		if(slot[root] < 0)
		{
			slot[root] = static_cast<Index>(groups.size());
			groups.emplace_back();
		}
		groups[slot[root]].push_back(i);
	}
	return groups;
}

} // namespace

double hermiticity_defect(const Matrix& m)
{
	require_square(m, "hermiticity_defect");
	if(m.size() == 0)
	{
		return 0.0;
	}
	return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(Matrix entries, double tol)
	: entries_{std::move(entries)}
{
	require_square(entries_, "HermitianOperator");
	const double defect = hermiticity_defect(entries_);
	if(defect > tol)
	{
		std::ostringstream msg;
		msg << "operator is not Hermitian (defect " << defect << ")";
		throw NumericalError(msg.str());
	}
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other)
{
	if(other.dim() != dim())
	{
		throw std::invalid_argument("HermitianOperator: dimension mismatch in sum");
	}
	entries_ += other.entries_;
	return *this;
}

HermitianOperator HermitianOperator::zero(Index dim)
{
	return HermitianOperator(Matrix::Zero(dim, dim));
}

DensityMatrix::DensityMatrix(Matrix entries)
	: entries_{std::move(entries)}
{
	require_square(entries_, "DensityMatrix");
	if(entries_.rows() == 0)
	{
		throw std::invalid_argument("DensityMatrix: empty matrix");
	}
	const double defect = hermiticity_defect(entries_);
	if(defect > kHermitianTol)
	{
		std::ostringstream msg;
		msg << "density matrix is not Hermitian (defect " << defect << ")";
		throw NumericalError(msg.str());
	}
	const double tr_defect = std::abs(entries_.trace() - Complex(1.0, 0.0));
	if(tr_defect > kTraceTol)
	{
		std::ostringstream msg;
		msg << "density matrix trace differs from 1 by " << tr_defect;
		throw NumericalError(msg.str());
	}
}

DensityMatrix DensityMatrix::checked(Matrix entries)
{
	DensityMatrix rho(std::move(entries));
	const double min_eval = hermitian_eigenvalues_blockwise(rho.entries_).minCoeff();
	if(min_eval < -kPsdTol)
	{
		std::ostringstream msg;
		msg << "density matrix has negative eigenvalue " << min_eval;
		throw NumericalError(msg.str());
	}
	return rho;
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi)
{
	const double norm = psi.norm();
	if(norm == 0.0)
	{
		throw std::invalid_argument("DensityMatrix::pure: zero vector");
	}
	const Eigen::VectorXcd v = psi / norm;
	return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> weights)
{
	Matrix m = Matrix::Zero(static_cast<Index>(weights.size()), static_cast<Index>(weights.size()));
	for(std::size_t i = 0; i < weights.size(); ++i)
	{
		if(weights[i] < 0.0)
		{
			throw std::invalid_argument("DensityMatrix::diagonal: negative weight");
		}
		m(static_cast<Index>(i), static_cast<Index>(i)) = weights[i];
	}
	return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim)
{
	return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

SubsystemLayout::SubsystemLayout(std::vector<std::string> labels, std::vector<Index> dims)
	: labels_{std::move(labels)}
	, dims_{std::move(dims)}
{
	if(labels_.size() != dims_.size())
	{
		throw std::invalid_argument("SubsystemLayout: labels and dims differ in length");
	}
	for(std::size_t i = 0; i < labels_.size(); ++i)
	{
		if(dims_[i] <= 0)
		{
			throw std::invalid_argument("SubsystemLayout: non-positive dimension for " + labels_[i]);
		}
		for(std::size_t j = i + 1; j < labels_.size(); ++j)
		{
			if(labels_[i] == labels_[j])
			{
				throw std::invalid_argument("SubsystemLayout: duplicate label " + labels_[i]);
			}
		}
	}
}

SubsystemLayout SubsystemLayout::uniform(std::vector<std::string> labels, Index d)
{
	std::vector<Index> dims(labels.size(), d);
	return SubsystemLayout(std::move(labels), std::move(dims));
}

Index SubsystemLayout::total_dim() const
{
	Index total = 1;
	for(Index d : dims_)
	{
		total *= d;
	}
	return total;
}

std::size_t SubsystemLayout::position(const std::string& label) const
{
	const auto it = std::find(labels_.begin(), labels_.end(), label);
	if(it == labels_.end())
	{
		throw std::invalid_argument("unknown subsystem label: " + label);
	}
	return static_cast<std::size_t>(it - labels_.begin());
}

bool SubsystemLayout::contains(const std::string& label) const
{
	return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::vector<Index> SubsystemLayout::unflatten(Index flat) const
{
	std::vector<Index> digits(dims_.size());
	for(std::size_t k = dims_.size(); k-- > 0;)
	{
		digits[k] = flat % dims_[k];
		flat /= dims_[k];
	}
	return digits;
}

Index SubsystemLayout::flatten(std::span<const Index> digits) const
{
	Index flat = 0;
	for(std::size_t k = 0; k < dims_.size(); ++k)
	{
		flat = flat * dims_[k] + digits[k];
	}
	return flat;
}

SubsystemLayout SubsystemLayout::restricted(const std::vector<std::string>& keep) const
{
	std::vector<std::string> labels;
	std::vector<Index> dims;
	for(std::size_t k = 0; k < labels_.size(); ++k)
	{
		if(std::find(keep.begin(), keep.end(), labels_[k]) != keep.end())
		{
			labels.push_back(labels_[k]);
			dims.push_back(dims_[k]);
		}
	}
	return SubsystemLayout(std::move(labels), std::move(dims));
}

SubsystemLayout SubsystemLayout::relabeled(const std::string& from, const std::string& to) const
{
	auto labels = labels_;
	labels[position(from)] = to;
	return SubsystemLayout(std::move(labels), dims_);
}

Matrix tensor(const Matrix& a, const Matrix& b)
{
	require_square(a, "tensor");
	require_square(b, "tensor");
	Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
	for(Index i = 0; i < a.rows(); ++i)
	{
		for(Index j = 0; j < a.cols(); ++j)
		{
			out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
		}
	}
	return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b)
{
	return DensityMatrix(tensor(a.matrix(), b.matrix()));
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b)
{
	return HermitianOperator(tensor(a.matrix(), b.matrix()));
}

Matrix partial_trace(const Matrix& m, const SubsystemLayout& layout, const std::vector<std::string>& keep)
{
	require_square(m, "partial_trace");
	if(m.rows() != layout.total_dim())
	{
		throw std::invalid_argument("partial_trace: layout does not match matrix dimension");
	}
	if(keep.empty())
	{
		throw std::invalid_argument("partial_trace: empty keep set");
	}
	std::vector<bool> kept(layout.size(), false);
	for(const auto& label : keep)
	{
		kept[layout.position(label)] = true;
	}

	Index kept_dim = 1;
	Index traced_dim = 1;
	for(std::size_t k = 0; k < layout.size(); ++k)
	{
		(kept[k] ? kept_dim : traced_dim) *= layout.dims()[k];
	}

	// Split every flat index into (kept, traced) mixed-radix parts.
	const Index n = m.rows();
	std::vector<std::vector<std::pair<Index, Index>>> by_traced(static_cast<std::size_t>(traced_dim));
	for(Index flat = 0; flat < n; ++flat)
	{
		const auto digits = layout.unflatten(flat);
		Index ki = 0;
		Index ti = 0;
		for(std::size_t k = 0; k < layout.size(); ++k)
		{
			if(kept[k])
			{
				ki = ki * layout.dims()[k] + digits[k];
			}
			else
			{
				ti = ti * layout.dims()[k] + digits[k];
			}
		}
		by_traced[ti].emplace_back(flat, ki);
	}

	Matrix out = Matrix::Zero(kept_dim, kept_dim);
	for(const auto& group : by_traced)
	{
		for(const auto& [col, kc] : group)
		{
			for(const auto& [row, kr] : group)
			{
				out(kr, kc) += m(row, col);
			}
		}
	}
	return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemLayout& layout,
	const std::vector<std::string>& keep)
{
	return DensityMatrix(partial_trace(rho.matrix(), layout, keep));
}

EigenPairs hermitian_eigen(const Matrix& m)
{
	require_square(m, "hermitian_eigen");
	return run_zheevd(m, true);
}

RealVector hermitian_eigenvalues(const Matrix& m)
{
	require_square(m, "hermitian_eigenvalues");
	return run_zheevd(m, false).values;
}

RealVector hermitian_eigenvalues_blockwise(const Matrix& m)
{
	require_square(m, "hermitian_eigenvalues_blockwise");
	std::vector<double> all;
	all.reserve(static_cast<std::size_t>(m.rows()));
	for(const auto& group : nonzero_components(m))
	{
		const RealVector vals = hermitian_eigenvalues(m(group, group));
		all.insert(all.end(), vals.data(), vals.data() + vals.size());
	}
	std::sort(all.begin(), all.end());
	return Eigen::Map<RealVector>(all.data(), static_cast<Index>(all.size()));
}

Matrix matrix_sqrt(const Matrix& m)
{
	require_square(m, "matrix_sqrt");
	auto eig = hermitian_eigen(m);
	// Eigenvalues at rounding level are zero; their square roots (~1e-8)
	// would otherwise leak into fidelities of orthogonal states.
	const double scale = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
	const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
	for(Index i = 0; i < eig.values.size(); ++i)
	{
		double& v = eig.values(i);
		if(v < -kPsdTol)
		{
			std::ostringstream msg;
			msg << "matrix_sqrt: negative eigenvalue " << v;
			throw NumericalError(msg.str());
		}
		v = v <= floor ? 0.0 : std::sqrt(v);
	}
	return eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
}

double trace_norm(const Matrix& m)
{
	require_square(m, "trace_norm");
	Eigen::BDCSVD<Matrix> svd(m);
	return svd.singularValues().sum();
}

double fidelity_b(const DensityMatrix& rho, const DensityMatrix& sigma)
{
	if(rho.dim() != sigma.dim())
	{
		throw std::invalid_argument("fidelity_b: dimension mismatch");
	}
	return trace_norm(matrix_sqrt(rho.matrix()) * matrix_sqrt(sigma.matrix()));
}

double overlap_l(const DensityMatrix& rho, const DensityMatrix& sigma)
{
	if(rho.dim() != sigma.dim())
	{
		throw std::invalid_argument("overlap_l: dimension mismatch");
	}
	// Tr[AB] = sum_ij A_ij B_ji
	return (rho.matrix().cwiseProduct(sigma.matrix().transpose())).sum().real();
}

double shannon_entropy_bits(std::span<const double> p)
{
	double h = 0.0;
	for(double v : p)
	{
		if(v > 0.0)
		{
			h -= v * std::log2(v);
		}
	}
	return h;
}

double von_neumann_entropy(const DensityMatrix& rho)
{
	const RealVector vals = hermitian_eigenvalues_blockwise(rho.matrix());
	if(vals.size() > 0 && vals.minCoeff() < -kPsdTol)
	{
		std::ostringstream msg;
		msg << "von_neumann_entropy: negative eigenvalue " << vals.minCoeff();
		throw NumericalError(msg.str());
	}
	return shannon_entropy_bits(std::span<const double>(vals.data(), static_cast<std::size_t>(vals.size())));
}

SpectralDecomposition::SpectralDecomposition(const HermitianOperator& h)
{
	const Matrix& m = h.matrix();
	values_.resize(m.rows());
	order_.reserve(static_cast<std::size_t>(m.rows()));
	const auto groups = nonzero_components(m);
	for(const auto& group : groups)
	{
		if(group.size() < 2)
		{
			continue;
		}
		Block block;
		block.offset = static_cast<Index>(order_.size());
		auto eig = hermitian_eigen(m(group, group));
		values_.segment(block.offset, eig.values.size()) = eig.values;
		block.values = std::move(eig.values);
		block.vectors = std::move(eig.vectors);
		order_.insert(order_.end(), group.begin(), group.end());
		blocks_.push_back(std::move(block));
	}
	isolated_offset_ = static_cast<Index>(order_.size());
	for(const auto& group : groups)
	{
		if(group.size() == 1)
		{
			values_(static_cast<Index>(order_.size())) = m(group[0], group[0]).real();
			order_.push_back(group[0]);
		}
	}
}

Eigen::VectorXcd SpectralDecomposition::phases(double t) const
{
	Eigen::VectorXcd phase(dim());
	for(Index a = 0; a < dim(); ++a)
	{
		phase(a) = std::polar(1.0, -values_(a) * t);
	}
	return phase;
}

namespace
{

// x <- L^dagger x R on every nonzero block pair (a, b), where L, R are the
// block-diagonal factors given by `left`/`right` (identity on the isolated
// tail). `adjoint_left` selects L^dagger versus L.
void sandwich(Matrix& x, const std::vector<SpectralDecomposition::Block>& blocks, Index isolated_offset,
	bool adjoint_left)
{
	const Index n = x.rows();
	const Index tail = n - isolated_offset;
	for(const auto& a : blocks)
	{
		const Index na = a.vectors.rows();
		const Matrix left = adjoint_left ? Matrix(a.vectors.adjoint()) : a.vectors;
		const Matrix right = adjoint_left ? a.vectors : Matrix(a.vectors.adjoint());
		for(const auto& b : blocks)
		{
			const Index nb = b.vectors.rows();
			auto sub = x.block(a.offset, b.offset, na, nb);
			if(sub.isZero(0.0))
			{
				continue;
			}
			const Matrix rb = adjoint_left ? b.vectors : Matrix(b.vectors.adjoint());
			sub = (left * sub * rb).eval();
		}
		if(tail > 0)
		{
			auto row = x.block(a.offset, isolated_offset, na, tail);
			if(!row.isZero(0.0))
			{
				row = (left * row).eval();
			}
			auto col = x.block(isolated_offset, a.offset, tail, na);
			if(!col.isZero(0.0))
			{
				col = (col * right).eval();
			}
		}
	}
}

} // namespace

Matrix SpectralDecomposition::to_eigenbasis(const Matrix& m) const
{
	if(m.rows() != dim() || m.cols() != dim())
	{
		throw std::invalid_argument("SpectralDecomposition: dimension mismatch");
	}
	Matrix out = m(order_, order_);
	sandwich(out, blocks_, isolated_offset_, true);
	return out;
}

Matrix SpectralDecomposition::evolve_from_eigenbasis(const Matrix& m_tilde, double t) const
{
	const Eigen::VectorXcd phase = phases(t);
	Matrix x = phase.asDiagonal() * m_tilde * phase.conjugate().asDiagonal();
	sandwich(x, blocks_, isolated_offset_, false);
	Matrix out(dim(), dim());
	out(order_, order_) = x;
	return out;
}

Matrix SpectralDecomposition::rows_to_eigenbasis(const Matrix& f) const
{
	if(f.rows() != dim())
	{
		throw std::invalid_argument("SpectralDecomposition: dimension mismatch");
	}
	Matrix out = f(order_, Eigen::all);
	for(const auto& b : blocks_)
	{
		auto rows = out.middleRows(b.offset, b.vectors.rows());
		rows = (b.vectors.adjoint() * rows).eval();
	}
	return out;
}

Matrix SpectralDecomposition::rows_from_eigenbasis(const Matrix& g, double t) const
{
	Matrix x = phases(t).asDiagonal() * g;
	for(const auto& b : blocks_)
	{
		auto rows = x.middleRows(b.offset, b.vectors.rows());
		rows = (b.vectors * rows).eval();
	}
	Matrix out(g.rows(), g.cols());
	out(order_, Eigen::all) = x;
	return out;
}

Matrix psd_factor(const Matrix& rho, double cutoff)
{
	require_square(rho, "psd_factor");
	std::vector<Eigen::VectorXcd> columns;
	for(const auto& group : nonzero_components(rho))
	{
		const auto eig = hermitian_eigen(rho(group, group));
		for(Index k = 0; k < eig.values.size(); ++k)
		{
			const double v = eig.values(k);
			if(v < -kPsdTol)
			{
				std::ostringstream msg;
				msg << "psd_factor: negative eigenvalue " << v;
				throw NumericalError(msg.str());
			}
			if(v <= cutoff)
			{
				continue;
			}
			Eigen::VectorXcd col = Eigen::VectorXcd::Zero(rho.rows());
			col(group) = std::sqrt(v) * eig.vectors.col(k);
			columns.push_back(std::move(col));
		}
	}
	Matrix out(rho.rows(), static_cast<Index>(columns.size()));
	for(std::size_t k = 0; k < columns.size(); ++k)
	{
		out.col(static_cast<Index>(k)) = columns[k];
	}
	return out;
}

Propagator::Propagator(const HermitianOperator& h, const DensityMatrix& rho0)
	: spectral_{h}
{
	if(rho0.dim() != h.dim())
	{
		throw std::invalid_argument("Propagator: dimension mismatch");
	}
	// Low-rank path only pays off well below full rank.
	const Matrix factor = psd_factor(rho0.matrix());
	if(factor.cols() * 8 <= rho0.dim())
	{
		factor_tilde_ = spectral_.rows_to_eigenbasis(factor);
	}
	else
	{
		rho_tilde_ = spectral_.to_eigenbasis(rho0.matrix());
	}
}

Propagator::Propagator(const HermitianOperator& h, const Matrix& factor)
	: spectral_{h}
	, factor_tilde_{spectral_.rows_to_eigenbasis(factor)}
{
}

std::optional<Matrix> Propagator::factor_at(double t) const
{
	if(!factor_tilde_)
	{
		return std::nullopt;
	}
	return spectral_.rows_from_eigenbasis(*factor_tilde_, t);
}

DensityMatrix Propagator::at(double t) const
{
	Matrix m;
	if(factor_tilde_)
	{
		const Matrix phi = spectral_.rows_from_eigenbasis(*factor_tilde_, t);
		m = phi * phi.adjoint();
	}
	else
	{
		m = spectral_.evolve_from_eigenbasis(rho_tilde_, t);
	}
	// Restore exact Hermiticity lost to rounding in the products.
	m = (0.5 * (m + m.adjoint())).eval();
	return DensityMatrix(std::move(m));
}

DensityMatrix evolve(const DensityMatrix& rho, const HermitianOperator& h, double t)
{
	if(rho.dim() != h.dim())
	{
		throw std::invalid_argument("evolve: dimension mismatch");
	}
	return Propagator(h, rho).at(t);
}

} // namespace sbs
