#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's spectral code: eigenproblems go through Eigen's own solver and
// index bookkeeping is spelled out with explicit loops.

#include "sbs/gaussian.hpp"
#include "sbs/linalg.hpp"
#include "sbs/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle
{

using sbs::Complex;
using sbs::Index;
using sbs::Matrix;

inline double gaussian(sbs::Rng& rng)
{
	// Box-Muller
	const double u1 = 1.0 - rng.uniform();
	const double u2 = rng.uniform();
	return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline Matrix ginibre(Index rows, Index cols, sbs::Rng& rng)
{
	Matrix g(rows, cols);
	for(Index r = 0; r < rows; ++r)
	{
		for(Index c = 0; c < cols; ++c)
		{
			g(r, c) = Complex(gaussian(rng), gaussian(rng));
		}
	}
	return g;
}

/// Random mixed state of the given rank (full rank by default).
inline Matrix random_state(Index dim, sbs::Rng& rng, Index rank = 0)
{
	const Matrix g = ginibre(dim, rank > 0 ? rank : dim, rng);
	Matrix rho = g * g.adjoint();
	rho /= rho.trace().real();
	return 0.5 * (rho + rho.adjoint());
}

inline Matrix random_unitary(Index dim, sbs::Rng& rng)
{
	Eigen::HouseholderQR<Matrix> qr(ginibre(dim, dim, rng));
	return qr.householderQ();
}

inline Matrix psd_sqrt(const Matrix& m)
{
	Eigen::SelfAdjointEigenSolver<Matrix> es(m);
	Eigen::VectorXd v = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
	return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

/// Tr sqrt(sqrt(rho) sigma sqrt(rho))
inline double uhlmann(const Matrix& rho, const Matrix& sigma)
{
	const Matrix r = psd_sqrt(rho);
	Matrix inner = r * sigma * r;
	inner = 0.5 * (inner + inner.adjoint());
	Eigen::SelfAdjointEigenSolver<Matrix> es(inner);
	// rank-deficient rho leaves rounding-level eigenvalues whose square roots
	// would otherwise add ~1e-9
	const double floor = 1e-13 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
	double total = 0.0;
	for(double v : es.eigenvalues())
	{
		total += v > floor ? std::sqrt(v) : 0.0;
	}
	return total;
}

/// Optimal error of discriminating rho0 (prior p0) from rho1.
inline double helstrom_error(double p0, const Matrix& rho0, double p1, const Matrix& rho1)
{
	const Matrix d = p0 * rho0 - p1 * rho1;
	Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (d + d.adjoint()));
	return 0.5 * (1.0 - es.eigenvalues().cwiseAbs().sum());
}

inline Eigen::VectorXd eigenvalues(const Matrix& m)
{
	Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
	return es.eigenvalues();
}

/// Tr_B of a matrix on A (x) B with explicit index loops.
inline Matrix trace_right(const Matrix& m, Index da, Index db)
{
	Matrix out = Matrix::Zero(da, da);
	for(Index a = 0; a < da; ++a)
	{
		for(Index a2 = 0; a2 < da; ++a2)
		{
			for(Index b = 0; b < db; ++b)
			{
				out(a, a2) += m(a * db + b, a2 * db + b);
			}
		}
	}
	return out;
}

inline Matrix trace_left(const Matrix& m, Index da, Index db)
{
	Matrix out = Matrix::Zero(db, db);
	for(Index b = 0; b < db; ++b)
	{
		for(Index b2 = 0; b2 < db; ++b2)
		{
			for(Index a = 0; a < da; ++a)
			{
				out(b, b2) += m(a * db + b, a * db + b2);
			}
		}
	}
	return out;
}

// ---- Gaussian grid oracles -------------------------------------------------

struct Grid
{
	double lo = 0.0;
	double hi = 0.0;
	int n = 0;
	[[nodiscard]] double step() const { return (hi - lo) / (n - 1); }
	[[nodiscard]] double at(int k) const { return lo + k * step(); }
};

inline double pdf(double x, double mu, double sigma)
{
	const double z = (x - mu) / sigma;
	return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

/// B of two diagonal states sampled on a grid: sum_k sqrt(p_k q_k) after
/// normalising both weight vectors.
inline double diagonal_fidelity(const std::vector<double>& p, const std::vector<double>& q)
{
	double sp = 0.0;
	double sq = 0.0;
	double cross = 0.0;
	for(std::size_t k = 0; k < p.size(); ++k)
	{
		sp += p[k];
		sq += q[k];
		cross += std::sqrt(p[k] * q[k]);
	}
	return cross / std::sqrt(sp * sq);
}

inline double grid_incoherent_pair(const sbs::GaussianBranch& a, const sbs::GaussianBranch& b, int n = 4096)
{
	const Grid g{std::min(a.mu - 8 * a.sigma, b.mu - 8 * b.sigma), std::max(a.mu + 8 * a.sigma, b.mu + 8 * b.sigma), n};
	std::vector<double> p(n);
	std::vector<double> q(n);
	for(int k = 0; k < n; ++k)
	{
		p[k] = pdf(g.at(k), a.mu, a.sigma);
		q[k] = pdf(g.at(k), b.mu, b.sigma);
	}
	return diagonal_fidelity(p, q);
}

/// Density of x_j - x_1 by direct numerical convolution.
inline std::vector<double> relative_density(const Grid& y, const sbs::GaussianBranch& e1,
	const sbs::GaussianBranch& ej, int nx)
{
	const Grid x{e1.mu - 8 * e1.sigma, e1.mu + 8 * e1.sigma, nx};
	std::vector<double> out(y.n, 0.0);
	for(int k = 0; k < y.n; ++k)
	{
		double s = 0.0;
		for(int m = 0; m < nx; ++m)
		{
			s += pdf(y.at(k) + x.at(m), ej.mu, ej.sigma) * pdf(x.at(m), e1.mu, e1.sigma);
		}
		out[k] = s * x.step();
	}
	return out;
}

inline double grid_transformed_env(const sbs::GaussianBranch& e1_i, const sbs::GaussianBranch& e1_ip,
	const sbs::GaussianBranch& ej_i, const sbs::GaussianBranch& ej_ip, int ny = 1024, int nx = 1024)
{
	const double s_i = std::hypot(e1_i.sigma, ej_i.sigma);
	const double s_ip = std::hypot(e1_ip.sigma, ej_ip.sigma);
	const double m_i = ej_i.mu - e1_i.mu;
	const double m_ip = ej_ip.mu - e1_ip.mu;
	const Grid y{std::min(m_i - 8 * s_i, m_ip - 8 * s_ip), std::max(m_i + 8 * s_i, m_ip + 8 * s_ip), ny};
	return diagonal_fidelity(relative_density(y, e1_i, ej_i, nx), relative_density(y, e1_ip, ej_ip, nx));
}

/// System at x_i seen from E1: density of x_i - x_E1.
inline double grid_transformed_system(double x_i, double x_ip, const sbs::GaussianBranch& e1_i,
	const sbs::GaussianBranch& e1_ip, int n = 4096)
{
	const double c_i = x_i - e1_i.mu;
	const double c_ip = x_ip - e1_ip.mu;
	const Grid y{std::min(c_i - 8 * e1_i.sigma, c_ip - 8 * e1_ip.sigma),
		std::max(c_i + 8 * e1_i.sigma, c_ip + 8 * e1_ip.sigma), n};
	std::vector<double> p(n);
	std::vector<double> q(n);
	for(int k = 0; k < n; ++k)
	{
		p[k] = pdf(x_i - y.at(k), e1_i.mu, e1_i.sigma);
		q[k] = pdf(x_ip - y.at(k), e1_ip.mu, e1_ip.sigma);
	}
	return diagonal_fidelity(p, q);
}

/// Tr[rho rho'] with rho = sum_q W_q |phi_q><phi_q|, phi_q(y) = f^{1/2}(y + q | mu_S, sigma_S)
/// sampled on a y grid and q on its own grid.
inline double grid_linear_fidelity(const sbs::GaussianBranch& s_i, const sbs::GaussianBranch& s_ip,
	const sbs::GaussianBranch& e1_i, const sbs::GaussianBranch& e1_ip, int ny = 1024, int nq = 256)
{
	const double w_i = std::hypot(s_i.sigma, e1_i.sigma);
	const double w_ip = std::hypot(s_ip.sigma, e1_ip.sigma);
	const double c_i = s_i.mu - e1_i.mu;
	const double c_ip = s_ip.mu - e1_ip.mu;
	const Grid y{std::min(c_i - 8 * w_i, c_ip - 8 * w_ip), std::max(c_i + 8 * w_i, c_ip + 8 * w_ip), ny};

	auto packets = [&](const sbs::GaussianBranch& s, const sbs::GaussianBranch& e, Eigen::MatrixXd& g,
					   Eigen::VectorXd& w) {
		const Grid q{e.mu - 8 * e.sigma, e.mu + 8 * e.sigma, nq};
		g.resize(ny, nq);
		w.resize(nq);
		for(int c = 0; c < nq; ++c)
		{
			double norm = 0.0;
			for(int r = 0; r < ny; ++r)
			{
				g(r, c) = std::sqrt(pdf(y.at(r) + q.at(c), s.mu, s.sigma));
				norm += g(r, c) * g(r, c);
			}
			g.col(c) /= std::sqrt(norm);
			w(c) = pdf(q.at(c), e.mu, e.sigma);
		}
		w /= w.sum();
	};
	Eigen::MatrixXd g1;
	Eigen::MatrixXd g2;
	Eigen::VectorXd w1;
	Eigen::VectorXd w2;
	packets(s_i, e1_i, g1, w1);
	packets(s_ip, e1_ip, g2, w2);
	const Eigen::MatrixXd o = g1.transpose() * g2;
	return w1.dot(o.cwiseProduct(o) * w2);
}

} // namespace oracle
