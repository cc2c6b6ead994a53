#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbs
{

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

/// Raised when a state or operator violates a numerical invariant
/// (negative eigenvalue beyond tolerance, non-Hermitian generator, ...).
class NumericalError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

double hermiticity_defect(const Matrix& m);

/// Dense Hermitian operator; Hermiticity is checked on construction.
class HermitianOperator
{
public:
	HermitianOperator() = default;
	explicit HermitianOperator(Matrix entries, double tol = kHermitianTol);

	[[nodiscard]] Index dim() const { return entries_.rows(); }
	[[nodiscard]] const Matrix& matrix() const& { return entries_; }
	[[nodiscard]] Matrix matrix() && { return std::move(entries_); }

	HermitianOperator& operator+=(const HermitianOperator& other);
	friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b)
	{
		a += b;
		return a;
	}
	friend HermitianOperator operator*(double s, HermitianOperator a)
	{
		a.entries_ *= s;
		return a;
	}

	static HermitianOperator zero(Index dim);

private:
	Matrix entries_;
};

/// Unit-trace Hermitian matrix. Construction checks Hermiticity and trace;
/// positivity is checked by `checked()` and by every spectral operation.
class DensityMatrix
{
public:
	DensityMatrix() = default;
	explicit DensityMatrix(Matrix entries);

	/// Full validation including the PSD test (one eigendecomposition).
	static DensityMatrix checked(Matrix entries);
	static DensityMatrix pure(const Eigen::VectorXcd& psi);
	static DensityMatrix diagonal(std::span<const double> weights);
	static DensityMatrix maximally_mixed(Index dim);

	[[nodiscard]] Index dim() const { return entries_.rows(); }
	[[nodiscard]] const Matrix& matrix() const& { return entries_; }
	[[nodiscard]] Matrix matrix() && { return std::move(entries_); }
	[[nodiscard]] Complex operator()(Index r, Index c) const { return entries_(r, c); }

private:
	Matrix entries_;
};

/// Ordered subsystem labels with local dimensions. The first label is the
/// slowest (most significant) tensor index.
class SubsystemLayout
{
public:
	SubsystemLayout() = default;
	SubsystemLayout(std::vector<std::string> labels, std::vector<Index> dims);

	/// n copies of local dimension d.
	static SubsystemLayout uniform(std::vector<std::string> labels, Index d);

	[[nodiscard]] std::size_t size() const { return labels_.size(); }
	[[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
	[[nodiscard]] const std::vector<Index>& dims() const { return dims_; }
	[[nodiscard]] Index total_dim() const;
	[[nodiscard]] std::size_t position(const std::string& label) const;
	[[nodiscard]] bool contains(const std::string& label) const;
	[[nodiscard]] Index dim_of(const std::string& label) const { return dims_[position(label)]; }

	/// Flat index -> per-slot digits (layout order).
	[[nodiscard]] std::vector<Index> unflatten(Index flat) const;
	[[nodiscard]] Index flatten(std::span<const Index> digits) const;

	/// Sub-layout of the given labels, in layout order.
	[[nodiscard]] SubsystemLayout restricted(const std::vector<std::string>& keep) const;
	[[nodiscard]] SubsystemLayout relabeled(const std::string& from, const std::string& to) const;

	bool operator==(const SubsystemLayout&) const = default;

private:
	std::vector<std::string> labels_;
	std::vector<Index> dims_;
};

Matrix tensor(const Matrix& a, const Matrix& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

/// Reduced matrix on `keep` (kept subsystems stay in layout order).
Matrix partial_trace(const Matrix& m, const SubsystemLayout& layout, const std::vector<std::string>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemLayout& layout,
	const std::vector<std::string>& keep);

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
struct EigenPairs
{
	RealVector values;
	Matrix vectors;
};

EigenPairs hermitian_eigen(const Matrix& m);
RealVector hermitian_eigenvalues(const Matrix& m);

/// Eigenvalues computed per connected component of the nonzero pattern;
/// identical to `hermitian_eigenvalues` but far cheaper for block structure.
RealVector hermitian_eigenvalues_blockwise(const Matrix& m);

/// Principal square root of a PSD matrix. Eigenvalues in [-kPsdTol, 0) are
/// clamped to zero; anything more negative throws NumericalError.
Matrix matrix_sqrt(const Matrix& m);

double trace_norm(const Matrix& m);

/// B(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1
double fidelity_b(const DensityMatrix& rho, const DensityMatrix& sigma);

/// L(rho, sigma) = Tr[rho sigma]
double overlap_l(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Von Neumann entropy in bits.
double von_neumann_entropy(const DensityMatrix& rho);
double shannon_entropy_bits(std::span<const double> p);

/// Eigendecomposition of a Hermitian generator, split into the connected
/// components of its nonzero pattern. Indices are reordered so that each
/// component is contiguous (components larger than one first, isolated
/// sites last); the eigenvector matrix is then block diagonal and the
/// isolated sites carry identity blocks. Immutable after construction.
class SpectralDecomposition
{
public:
	struct Block
	{
		Index offset = 0;
		RealVector values;
		Matrix vectors;
	};

	SpectralDecomposition() = default;
	explicit SpectralDecomposition(const HermitianOperator& h);

	[[nodiscard]] Index dim() const { return static_cast<Index>(order_.size()); }
	[[nodiscard]] const std::vector<Block>& blocks() const { return blocks_; }
	[[nodiscard]] const RealVector& eigenvalues() const { return values_; }

	/// V^dagger m V, in component order. Exactly-zero blocks are skipped.
	[[nodiscard]] Matrix to_eigenbasis(const Matrix& m) const;

	/// V (m_tilde o phase(t)) V^dagger in the original index order, where
	/// phase(t)_ab = exp(-i (lambda_a - lambda_b) t).
	[[nodiscard]] Matrix evolve_from_eigenbasis(const Matrix& m_tilde, double t) const;

	/// V^dagger f for a tall matrix f (original order in, component order out).
	[[nodiscard]] Matrix rows_to_eigenbasis(const Matrix& f) const;

	/// V exp(-i Lambda t) g, back in the original order.
	[[nodiscard]] Matrix rows_from_eigenbasis(const Matrix& g, double t) const;

private:
	Eigen::VectorXcd phases(double t) const;

	std::vector<Index> order_;
	std::vector<Block> blocks_; // only components with more than one site
	Index isolated_offset_ = 0;
	RealVector values_;
};

/// Caches one initial state in the eigenbasis of H. States of low rank are
/// carried as a factor Phi with rho = Phi Phi^dagger, so each further time
/// point costs O(dim^2 rank); otherwise two block-diagonal products.
class Propagator
{
public:
	Propagator(const HermitianOperator& h, const DensityMatrix& rho0);
	/// Start from rho0 = factor factor^dagger.
	Propagator(const HermitianOperator& h, const Matrix& factor);

	[[nodiscard]] DensityMatrix at(double t) const;
	/// Factor of rho(t) when running in low-rank mode.
	[[nodiscard]] std::optional<Matrix> factor_at(double t) const;
	[[nodiscard]] bool low_rank() const { return factor_tilde_.has_value(); }
	[[nodiscard]] const SpectralDecomposition& spectral() const { return spectral_; }

private:
	SpectralDecomposition spectral_;
	std::optional<Matrix> factor_tilde_;
	Matrix rho_tilde_;
};

/// Phi with rho = Phi Phi^dagger (columns sqrt(lambda) v over eigenvalues
/// above `cutoff`), computed per connected component.
Matrix psd_factor(const Matrix& rho, double cutoff = 1e-14);

/// U rho U^dagger with U = exp(-i H t) (hbar = 1).
DensityMatrix evolve(const DensityMatrix& rho, const HermitianOperator& h, double t);

} // namespace sbs
