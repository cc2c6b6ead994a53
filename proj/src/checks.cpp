#include "sbs/checks.hpp"

#include "sbs/metrics.hpp"
#include "sbs/ring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sbs
{

namespace
{

bool same_position(double a, double b, const CheckOptions& opt)
{
	if(opt.modulus)
	{
		return ring_mod(static_cast<Index>(std::llround(a - b)), *opt.modulus) == 0;
	}
	return std::abs(a - b) <= opt.tol;
}

double difference(double a, double b, const CheckOptions& opt)
{
	if(opt.modulus)
	{
		return static_cast<double>(ring_mod(static_cast<Index>(std::llround(a - b)), *opt.modulus));
	}
	return a - b;
}

// <psi_a shifted by -shift_a | psi_b shifted by -shift_b>
Complex overlap(const Wavefunction& a, double shift_a, const Wavefunction& b, double shift_b,
	const CheckOptions& opt)
{
	Complex s = 0.0;
	for(std::size_t u = 0; u < a.positions.size(); ++u)
	{
		for(std::size_t v = 0; v < b.positions.size(); ++v)
		{
			if(same_position(a.positions[u] - shift_a, b.positions[v] - shift_b, opt))
			{
				s += std::conj(a.amplitudes[u]) * b.amplitudes[v];
			}
		}
	}
	return s;
}

std::vector<double> support(const EnvConditional& c, double tol)
{
	std::vector<double> out;
	for(Index k = 0; k < c.table.rows(); ++k)
	{
		if(c.table(k, k).real() > tol)
		{
			out.push_back(c.positions[k]);
		}
	}
	return out;
}

bool supports_overlap(const std::vector<double>& a, double shift_a, const std::vector<double>& b, double shift_b,
	const CheckOptions& opt)
{
	for(double x : a)
	{
		for(double y : b)
		{
			if(same_position(x - shift_a, y - shift_b, opt))
			{
				return true;
			}
		}
	}
	return false;
}

double largest_off_diagonal(const Matrix& m)
{
	double worst = 0.0;
	for(Index r = 0; r < m.rows(); ++r)
	{
		for(Index c = 0; c < m.cols(); ++c)
		{
			if(r != c)
			{
				worst = std::max(worst, std::abs(m(r, c)));
			}
		}
	}
	return worst;
}

void add(CheckReport& report, std::string condition, std::vector<Index> indices, double magnitude,
	std::string detail)
{
	report.violations.push_back({std::move(condition), std::move(indices), magnitude, std::move(detail)});
}

Index as_index(std::size_t v)
{
	return static_cast<Index>(v);
}

// Sum of |entries| coupling different system pointer states, i.e. the weight
// of the blocks <i|rho|j>_S with i != j. Zero iff rho is block diagonal in
// the system basis; unlike Gamma it also sees coherence held jointly with
// the environments (pure GHZ).
double block_coherence(const Matrix& rho, const SubsystemLayout& layout, const std::string& system)
{
	const std::size_t pos = layout.position(system);
	Index stride = 1;
	for(std::size_t k = pos + 1; k < layout.size(); ++k)
	{
		stride *= layout.dims()[k];
	}
	const Index d = layout.dims()[pos];
	double total = 0.0;
	for(Index c = 0; c < rho.cols(); ++c)
	{
		const Index sc = (c / stride) % d;
		for(Index r = 0; r < rho.rows(); ++r)
		{
			if((r / stride) % d != sc)
			{
				total += std::abs(rho(r, c));
			}
		}
	}
	return total;
}

} // namespace

bool CheckReport::violates(const std::string& condition) const
{
	return std::any_of(violations.begin(), violations.end(),
		[&](const Violation& v) { return v.condition == condition; });
}

std::string CheckReport::summary() const
{
	std::ostringstream out;
	out << (passed() ? "PASS" : "FAIL") << " (" << violations.size() << " violation"
		<< (violations.size() == 1 ? "" : "s") << ")\n";
	for(const auto& v : violations)
	{
		out << "  condition (" << v.condition << ") " << v.detail << " [indices";
		for(Index i : v.indices)
		{
			out << ' ' << i;
		}
		out << "] magnitude " << v.magnitude << '\n';
	}
	for(const auto& n : notes)
	{
		out << "  note: " << n << '\n';
	}
	return out.str();
}

void validate(const BranchSpec& spec)
{
	const std::size_t n = spec.p.size();
	if(n == 0)
	{
		throw std::invalid_argument("branch spec has no branches");
	}
	if(spec.system.size() != n || spec.env.size() != n)
	{
		throw std::invalid_argument("branch spec tables disagree on the number of branches");
	}
	double total = 0.0;
	for(double v : spec.p)
	{
		if(!(v >= 0.0))
		{
			throw std::invalid_argument("branch probabilities must be nonnegative");
		}
		total += v;
	}
	if(std::abs(total - 1.0) > 1e-9)
	{
		throw std::invalid_argument("branch probabilities do not sum to 1");
	}
	const std::size_t envs = spec.env.front().size();
	for(std::size_t i = 0; i < n; ++i)
	{
		const auto& psi = spec.system[i];
		if(psi.positions.empty() || psi.positions.size() != psi.amplitudes.size())
		{
			throw std::invalid_argument("system wavefunction " + std::to_string(i) + " is malformed");
		}
		double norm = 0.0;
		for(const auto& a : psi.amplitudes)
		{
			norm += std::norm(a);
		}
		if(std::abs(norm - 1.0) > 1e-9)
		{
			throw std::invalid_argument("system wavefunction " + std::to_string(i) + " is not normalised");
		}
		if(spec.env[i].size() != envs)
		{
			throw std::invalid_argument("branches disagree on the number of environments");
		}
		for(const auto& c : spec.env[i])
		{
			const auto k = static_cast<Index>(c.positions.size());
			if(k == 0 || c.table.rows() != k || c.table.cols() != k)
			{
				throw std::invalid_argument("environment table size does not match its positions");
			}
			DensityMatrix::checked(c.table);
		}
	}
}

GhzTransform ghz_frame_transform(const std::vector<std::vector<double>>& positions, const std::vector<double>& p,
	std::size_t target, const CheckOptions& opt)
{
	if(positions.empty() || positions.size() != p.size())
	{
		throw std::invalid_argument("ghz_frame_transform: positions and probabilities differ in length");
	}
	const std::size_t slots = positions.front().size();
	if(target == 0 || target >= slots)
	{
		throw std::invalid_argument("ghz_frame_transform: target must name an environment slot");
	}
	GhzTransform out;
	out.p = p;
	for(const auto& tuple : positions)
	{
		if(tuple.size() != slots)
		{
			throw std::invalid_argument("ghz_frame_transform: tuples differ in arity");
		}
		std::vector<double> rel(slots);
		const double xt = tuple[target];
		for(std::size_t k = 0; k < slots; ++k)
		{
			rel[k] = k == target ? -xt : tuple[k] - xt;
			if(opt.modulus)
			{
				rel[k] = static_cast<double>(ring_mod(static_cast<Index>(std::llround(rel[k])), *opt.modulus));
			}
		}
		out.positions.push_back(std::move(rel));
	}
	const std::size_t n = positions.size();
	for(std::size_t k = 0; k < slots; ++k)
	{
		bool all_same = n > 1;
		for(std::size_t i = 0; i < n; ++i)
		{
			for(std::size_t j = i + 1; j < n; ++j)
			{
				if(same_position(out.positions[i][k], out.positions[j][k], opt))
				{
					add(out.report, "distinct", {as_index(k), as_index(i), as_index(j)},
						std::abs(out.positions[i][k] - out.positions[j][k]), "slot values coincide across branches");
				}
				else
				{
					all_same = false;
				}
			}
		}
		if(all_same)
		{
			out.degenerate_slots.push_back(k);
		}
	}
	if(!out.degenerate_slots.empty())
	{
		out.report.notes.push_back("trivially objective and uncorrelated: some slots collapse to a single value");
	}
	out.objective = out.report.passed();
	return out;
}

CheckReport check_theorem1(const BranchSpec& spec, const CheckOptions& opt)
{
	validate(spec);
	CheckReport report;
	const std::size_t n = spec.branches();
	const std::size_t envs = spec.environments();

	// (a) pure, position-localised environment conditionals
	std::vector<std::vector<double>> x(n, std::vector<double>(envs, 0.0));
	for(std::size_t i = 0; i < n; ++i)
	{
		for(std::size_t j = 0; j < envs; ++j)
		{
			const auto& c = spec.env[i][j];
			Index at = 0;
			const double peak = c.table.diagonal().real().maxCoeff(&at);
			x[i][j] = c.positions[at];
			const double defect = std::max(1.0 - peak, largest_off_diagonal(c.table));
			if(defect > opt.tol)
			{
				add(report, "a", {as_index(i), as_index(j)}, defect, "environment conditional is not pure and localised");
			}
		}
	}
	// (b) lab-frame orthogonality of system branches
	for(std::size_t i = 0; i < n; ++i)
	{
		for(std::size_t k = i + 1; k < n; ++k)
		{
			const double o = std::abs(overlap(spec.system[i], 0.0, spec.system[k], 0.0, opt));
			if(o > opt.tol)
			{
				add(report, "b", {as_index(i), as_index(k)}, o, "system branches overlap");
			}
		}
	}
	// (c) environment positions distinct across branches
	for(std::size_t j = 0; j < envs; ++j)
	{
		for(std::size_t i = 0; i < n; ++i)
		{
			for(std::size_t k = i + 1; k < n; ++k)
			{
				if(same_position(x[i][j], x[k][j], opt))
				{
					add(report, "c", {as_index(j), as_index(i), as_index(k)}, 0.0,
						"environment positions coincide across branches");
				}
			}
		}
	}
	// (d) relative environment positions distinct across branches
	for(std::size_t j = 0; j < envs; ++j)
	{
		for(std::size_t l = j + 1; l < envs; ++l)
		{
			for(std::size_t i = 0; i < n; ++i)
			{
				for(std::size_t k = i + 1; k < n; ++k)
				{
					const double ri = difference(x[i][j], x[i][l], opt);
					const double rk = difference(x[k][j], x[k][l], opt);
					if(same_position(ri, rk, opt))
					{
						add(report, "d", {as_index(j), as_index(l), as_index(i), as_index(k)}, std::abs(ri - rk),
							"relative environment positions are degenerate");
					}
				}
			}
		}
	}
	// (e) system states shifted by each environment position stay orthogonal
	for(std::size_t j = 0; j < envs; ++j)
	{
		for(std::size_t i = 0; i < n; ++i)
		{
			for(std::size_t k = i + 1; k < n; ++k)
			{
				const double o = std::abs(overlap(spec.system[i], x[i][j], spec.system[k], x[k][j], opt));
				if(o > opt.tol)
				{
					add(report, "e", {as_index(j), as_index(i), as_index(k)}, o,
						"shifted system states overlap in the environment frame");
				}
			}
		}
	}
	return report;
}

Prop1Result check_proposition1(const BranchSpec& spec, const CheckOptions& opt)
{
	validate(spec);
	Prop1Result out;
	auto& report = out.report;
	const std::size_t n = spec.branches();
	const std::size_t envs = spec.environments();

	for(std::size_t i = 0; i < n; ++i)
	{
		for(std::size_t j = 0; j < envs; ++j)
		{
			const double coh = largest_off_diagonal(spec.env[i][j].table);
			if(coh > opt.tol)
			{
				add(report, "precondition", {as_index(i), as_index(j)}, coh,
					"environment conditional is coherent in position");
			}
		}
	}
	if(!report.passed())
	{
		return out;
	}

	std::vector<std::vector<std::vector<double>>> supp(n, std::vector<std::vector<double>>(envs));
	for(std::size_t i = 0; i < n; ++i)
	{
		for(std::size_t j = 0; j < envs; ++j)
		{
			supp[i][j] = support(spec.env[i][j], opt.tol);
		}
	}

	// lab frame
	for(std::size_t i = 0; i < n; ++i)
	{
		for(std::size_t k = i + 1; k < n; ++k)
		{
			const double o = std::abs(overlap(spec.system[i], 0.0, spec.system[k], 0.0, opt));
			if(o > opt.tol)
			{
				add(report, "lab-orthogonality", {as_index(i), as_index(k)}, o, "system branches overlap");
			}
			for(std::size_t j = 0; j < envs; ++j)
			{
				if(supports_overlap(supp[i][j], 0.0, supp[k][j], 0.0, opt))
				{
					add(report, "lab-distinguishability", {as_index(j), as_index(i), as_index(k)}, 0.0,
						"environment supports overlap across branches");
				}
			}
		}
	}

	for(std::size_t f = 0; f < envs; ++f)
	{
		struct NewBranch
		{
			std::size_t i;
			double x;
			double weight;
		};
		std::vector<NewBranch> branches;
		for(std::size_t i = 0; i < n; ++i)
		{
			const auto& c = spec.env[i][f];
			for(Index k = 0; k < c.table.rows(); ++k)
			{
				const double w = c.table(k, k).real();
				if(w > opt.tol && spec.p[i] > 0.0)
				{
					branches.push_back({i, c.positions[k], spec.p[i] * w});
				}
			}
		}
		std::vector<double> spectrum;
		std::vector<std::pair<Index, double>> labels;
		for(const auto& b : branches)
		{
			spectrum.push_back(b.weight);
			labels.emplace_back(as_index(b.i), b.x);
		}
		out.new_spectrum.push_back(std::move(spectrum));
		out.new_branches.push_back(std::move(labels));

		for(std::size_t a = 0; a < branches.size(); ++a)
		{
			for(std::size_t b = a + 1; b < branches.size(); ++b)
			{
				const auto& u = branches[a];
				const auto& v = branches[b];
				if(u.i != v.i && same_position(u.x, v.x, opt))
				{
					add(report, "c-disjoint", {as_index(f), as_index(u.i), as_index(v.i)}, 0.0,
						"frame positions shared by different branches");
				}
				const double o = std::abs(overlap(spec.system[u.i], u.x, spec.system[v.i], v.x, opt));
				if(o > opt.tol)
				{
					add(report, "shifted-orthogonality", {as_index(f), as_index(a), as_index(b)}, o,
						"shifted system states overlap");
				}
				for(std::size_t k = 0; k < envs; ++k)
				{
					if(k != f && supports_overlap(supp[u.i][k], u.x, supp[v.i][k], v.x, opt))
					{
						add(report, "shifted-distinguishability", {as_index(f), as_index(k), as_index(a), as_index(b)},
							0.0, "shifted environment supports overlap");
					}
				}
			}
		}
	}
	return out;
}

CheckReport check_reduced_objectivity(const DensityMatrix& rho, const SubsystemLayout& layout,
	const std::string& target_frame, double tol, const std::vector<std::string>& trace_out,
	const std::string& system)
{
	if(rho.dim() != layout.total_dim())
	{
		throw std::invalid_argument("state dimension does not match layout");
	}
	CheckReport report;
	DensityMatrix state = rho;
	SubsystemLayout current = layout;
	std::vector<std::string> drop = trace_out;

	const bool lab = target_frame == "lab" || (target_frame == "C" && !layout.contains("C"));
	if(!lab)
	{
		if(target_frame == system)
		{
			throw std::invalid_argument("frames centred on the system are not supported");
		}
		const Index D = layout.dims().front();
		const std::string slot_label = layout.contains("C") ? target_frame : std::string("C");
		const auto perm = build_frame_permutation(D, layout, target_frame, slot_label);
		state = apply_frame_transform(rho, perm);
		current = perm.result;
		drop.push_back(slot_label);
	}

	std::vector<std::string> keep;
	for(const auto& label : current.labels())
	{
		if(std::find(drop.begin(), drop.end(), label) == drop.end())
		{
			keep.push_back(label);
		}
	}
	if(std::find(keep.begin(), keep.end(), system) == keep.end())
	{
		throw std::invalid_argument("system subsystem was traced out");
	}
	const auto reduced_layout = current.restricted(keep);
	const DensityMatrix reduced = partial_trace(state, current, keep);
	const auto rep = compute_report(reduced, reduced_layout, system, target_frame);

	const double coherence = block_coherence(reduced.matrix(), reduced_layout, system);
	if(coherence > tol)
	{
		add(report, "a", {}, coherence, "coherences between system pointer states");
	}
	const auto n = static_cast<Index>(rep.p.size());
	Index live = 0;
	for(double v : rep.p)
	{
		live += v >= kConditionalThreshold ? 1 : 0;
	}
	for(std::size_t o = 0; o < rep.observers.size(); ++o)
	{
		for(Index i = 0; i < n; ++i)
		{
			for(Index j = i + 1; j < n; ++j)
			{
				if(rep.p[i] < kConditionalThreshold || rep.p[j] < kConditionalThreshold)
				{
					continue;
				}
				const double f = rep.observers[o].fidelity(i, j);
				if(f > tol)
				{
					add(report, "b", {as_index(o), i, j}, f,
						"conditional states of " + rep.observers[o].label + " are not distinguishable");
				}
			}
		}
	}
	for(std::size_t a = 0; a < rep.observers.size(); ++a)
	{
		for(std::size_t b = a + 1; b < rep.observers.size(); ++b)
		{
			const double cmi = conditional_mutual_information(reduced, reduced_layout, system,
				{rep.observers[a].label, rep.observers[b].label});
			if(cmi > tol)
			{
				add(report, "c", {as_index(a), as_index(b)}, cmi, "observers are not strongly independent");
			}
		}
	}
	if(live <= 1)
	{
		report.notes.push_back("degenerate: a single branch carries all probability");
	}
	return report;
}

CheckReport check_injectivity(const InjectivityInput& input, double tol)
{
	const std::size_t n = input.x.size();
	if(n < 2 || input.phi.empty() || input.frame >= input.phi.size())
	{
		throw std::invalid_argument("injectivity input needs samples, maps and a valid frame");
	}
	const CheckOptions opt{tol, std::nullopt};
	auto duplicates = [&](const std::vector<double>& values) {
		std::vector<std::size_t> order(values.size());
		std::iota(order.begin(), order.end(), std::size_t{0});
		std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
		std::vector<std::pair<std::size_t, std::size_t>> dup;
		for(std::size_t k = 1; k < order.size(); ++k)
		{
			if(same_position(values[order[k]], values[order[k - 1]], opt))
			{
				dup.emplace_back(std::min(order[k - 1], order[k]), std::max(order[k - 1], order[k]));
			}
		}
		return dup;
	};

	if(!duplicates(input.x).empty())
	{
		throw std::invalid_argument("sample points are not distinct");
	}
	for(std::size_t j = 0; j < input.phi.size(); ++j)
	{
		if(input.phi[j].size() != n)
		{
			throw std::invalid_argument("map " + std::to_string(j) + " has the wrong number of samples");
		}
		if(!duplicates(input.phi[j]).empty())
		{
			throw std::invalid_argument("map " + std::to_string(j) + " is not bijective on its samples");
		}
	}

	CheckReport report;
	const auto& frame = input.phi[input.frame];
	std::vector<std::size_t> by_frame(n);
	std::iota(by_frame.begin(), by_frame.end(), std::size_t{0});
	std::sort(by_frame.begin(), by_frame.end(), [&](std::size_t a, std::size_t b) { return frame[a] < frame[b]; });

	auto examine = [&](const std::string& name, const std::vector<double>& source, Index id) {
		std::vector<double> composed(n);
		for(std::size_t k = 0; k < n; ++k)
		{
			composed[k] = source[k] - frame[k];
		}
		for(const auto& [a, b] : duplicates(composed))
		{
			add(report, "injective", {id, as_index(a), as_index(b)}, std::abs(composed[a] - composed[b]),
				"composed map for " + name + " repeats a value");
		}
		// slope of source against the frame map, in frame order
		int above = 0;
		int below = 0;
		for(std::size_t k = 1; k < n; ++k)
		{
			const std::size_t a = by_frame[k - 1];
			const std::size_t b = by_frame[k];
			const double slope = (source[b] - source[a]) / (frame[b] - frame[a]);
			(slope > 1.0 ? above : below) += 1;
		}
		std::string verdict = above > 0 && below > 0 ? "mixed" : (above > 0 ? "all > 1" : "all < 1");
		report.notes.push_back("derivative criterion for " + name + ": " + verdict);
	};

	examine("S", input.x, -1);
	for(std::size_t j = 0; j < input.phi.size(); ++j)
	{
		if(j != input.frame)
		{
			examine("E" + std::to_string(j + 1), input.phi[j], as_index(j));
		}
	}
	return report;
}

DensityMatrix build_state(const BranchSpec& ring_spec, Index D)
{
	validate(ring_spec);
	const std::size_t envs = ring_spec.environments();
	Index total = D;
	for(std::size_t j = 0; j < envs; ++j)
	{
		total *= D;
	}
	Matrix rho = Matrix::Zero(total, total);
	auto site = [&](double x) { return ring_mod(static_cast<Index>(std::llround(x)), D); };
	for(std::size_t i = 0; i < ring_spec.branches(); ++i)
	{
		Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(D);
		const auto& w = ring_spec.system[i];
		for(std::size_t k = 0; k < w.positions.size(); ++k)
		{
			psi(site(w.positions[k])) += w.amplitudes[k];
		}
		Matrix branch = psi * psi.adjoint();
		for(std::size_t j = 0; j < envs; ++j)
		{
			const auto& c = ring_spec.env[i][j];
			Matrix local = Matrix::Zero(D, D);
			for(Index a = 0; a < c.table.rows(); ++a)
			{
				for(Index b = 0; b < c.table.cols(); ++b)
				{
					local(site(c.positions[a]), site(c.positions[b])) += c.table(a, b);
				}
			}
			branch = tensor(branch, local);
		}
		rho += ring_spec.p[i] * branch;
	}
	return DensityMatrix(std::move(rho));
}

RingInstance instantiate_on_ring(const BranchSpec& spec, Index max_dim, const std::string& which, Index max_scale)
{
	validate(spec);
	if(which != "theorem1" && which != "prop1")
	{
		throw std::invalid_argument("instantiate_on_ring: unknown check " + which);
	}
	std::vector<double> values;
	for(const auto& w : spec.system)
	{
		values.insert(values.end(), w.positions.begin(), w.positions.end());
	}
	for(const auto& row : spec.env)
	{
		for(const auto& c : row)
		{
			values.insert(values.end(), c.positions.begin(), c.positions.end());
		}
	}
	const double lo = *std::min_element(values.begin(), values.end());

	for(Index scale = 1; scale <= max_scale; ++scale)
	{
		auto map = [&](double v) { return std::round((v - lo) * static_cast<double>(scale)); };
		bool separated = true;
		double top = 0.0;
		for(std::size_t a = 0; a < values.size() && separated; ++a)
		{
			top = std::max(top, map(values[a]));
			for(std::size_t b = a + 1; b < values.size(); ++b)
			{
				if(std::abs(values[a] - values[b]) > kPositionTol && map(values[a]) == map(values[b]))
				{
					separated = false;
					break;
				}
			}
		}
		if(!separated)
		{
			continue;
		}
		BranchSpec ring = spec;
		for(auto& w : ring.system)
		{
			for(double& x : w.positions)
			{
				x = map(x);
			}
		}
		for(auto& row : ring.env)
		{
			for(auto& c : row)
			{
				for(double& x : c.positions)
				{
					x = map(x);
				}
			}
		}
		for(Index D = std::max<Index>(2, static_cast<Index>(top) + 1); D <= max_dim; ++D)
		{
			const CheckOptions opt{kPositionTol, D};
			const bool ok = which == "theorem1" ? check_theorem1(ring, opt).passed()
												: check_proposition1(ring, opt).report.passed();
			if(!ok)
			{
				continue;
			}
			RingInstance out;
			out.D = D;
			out.scale = static_cast<double>(scale);
			out.offset = lo;
			out.spec = ring;
			std::vector<std::string> labels{"S"};
			for(std::size_t j = 0; j < spec.environments(); ++j)
			{
				labels.push_back("E" + std::to_string(j + 1));
			}
			out.layout = SubsystemLayout::uniform(std::move(labels), D);
			out.rho = build_state(ring, D);
			return out;
		}
	}
	throw std::runtime_error("no ring instance within the requested size");
}

} // namespace sbs
