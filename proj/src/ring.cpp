#include "sbs/ring.hpp"

#include <stdexcept>

namespace sbs
{

FramePermutation build_frame_permutation(Index D, const SubsystemLayout& layout, const std::string& target,
	const std::string& new_label)
{
	if(D < 2)
	{
		throw std::invalid_argument("ring dimension must be at least 2");
	}
	if(!layout.contains(target))
	{
		throw std::invalid_argument("unknown target frame: " + target);
	}
	for(Index d : layout.dims())
	{
		if(d != D)
		{
			throw std::invalid_argument("frame permutation needs every local dimension equal to D");
		}
	}
	if(new_label != target && layout.contains(new_label))
	{
		throw std::invalid_argument("label " + new_label + " already present in layout");
	}

	FramePermutation perm;
	perm.D = D;
	perm.target = target;
	perm.source = layout;
	perm.result = layout.relabeled(target, new_label);
	const std::size_t t = layout.position(target);
	const Index n = layout.total_dim();
	perm.map.resize(static_cast<std::size_t>(n));
	for(Index flat = 0; flat < n; ++flat)
	{
		auto digits = layout.unflatten(flat);
		const Index xt = digits[t];
		for(std::size_t k = 0; k < digits.size(); ++k)
		{
			digits[k] = (k == t) ? ring_mod(-xt, D) : ring_mod(digits[k] - xt, D);
		}
		perm.map[flat] = layout.flatten(digits);
	}
	return perm;
}

Matrix apply_frame_transform(const Matrix& m, const FramePermutation& perm)
{
	if(m.rows() != perm.dim() || m.cols() != perm.dim())
	{
		throw std::invalid_argument("frame transform: state dimension does not match layout");
	}
	std::vector<Index> inverse(perm.map.size());
	for(std::size_t a = 0; a < perm.map.size(); ++a)
	{
		inverse[perm.map[a]] = static_cast<Index>(a);
	}
	return m(inverse, inverse);
}

DensityMatrix apply_frame_transform(const DensityMatrix& rho, const FramePermutation& perm)
{
	return DensityMatrix(apply_frame_transform(rho.matrix(), perm));
}

CycleStructure cycle_structure(Index D)
{
	const auto layout = SubsystemLayout::uniform({"S", "E1", "E2"}, D);
	const auto perm = build_frame_permutation(D, layout, "E1");
	CycleStructure out;
	std::vector<bool> seen(perm.map.size(), false);
	for(std::size_t start = 0; start < perm.map.size(); ++start)
	{
		if(seen[start])
		{
			continue;
		}
		Index len = 0;
		for(std::size_t k = start; !seen[k]; k = static_cast<std::size_t>(perm.map[k]))
		{
			seen[k] = true;
			++len;
		}
		if(len == 1)
		{
			++out.fixed;
		}
		else if(len == 2)
		{
			++out.two_cycles;
		}
		else
		{
			++out.longer;
		}
	}
	return out;
}

Index permutation_character(Index D)
{
	const auto layout = SubsystemLayout::uniform({"S", "E1", "E2"}, D);
	const auto perm = build_frame_permutation(D, layout, "E1");
	Index fixed = 0;
	for(std::size_t a = 0; a < perm.map.size(); ++a)
	{
		fixed += (perm.map[a] == static_cast<Index>(a)) ? 1 : 0;
	}
	return fixed;
}

} // namespace sbs
