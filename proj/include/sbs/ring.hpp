#pragma once

#include "sbs/linalg.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace sbs
{

/// Canonical representative of x mod d in [0, d).
inline Index ring_mod(Index x, Index d)
{
	const Index r = x % d;
	return r < 0 ? r + d : r;
}

inline Index ring_distance(Index a, Index b, Index d)
{
	const Index diff = ring_mod(a - b, d);
	return std::min(diff, d - diff);
}

/// Change of frame on Z_D^n as a permutation of flat basis indices.
/// Tuple (.., x_j, .., x_t, ..) goes to (.., x_j - x_t, .., -x_t, ..) with the
/// target slot relabelled (C by default). Slot order is unchanged.
struct FramePermutation
{
	Index D = 0;
	std::string target;
	SubsystemLayout source;
	SubsystemLayout result;
	std::vector<Index> map;

	[[nodiscard]] Index dim() const { return static_cast<Index>(map.size()); }
};

FramePermutation build_frame_permutation(Index D, const SubsystemLayout& layout, const std::string& target,
	const std::string& new_label = "C");

/// out[map[a]][map[b]] = m[a][b]
Matrix apply_frame_transform(const Matrix& m, const FramePermutation& perm);
DensityMatrix apply_frame_transform(const DensityMatrix& rho, const FramePermutation& perm);

struct CycleStructure
{
	Index fixed = 0;
	Index two_cycles = 0;
	Index longer = 0;
};

/// Cycle decomposition of the three-party permutation (target = second slot).
CycleStructure cycle_structure(Index D);

/// Trace of the three-party permutation matrix, i.e. its fixed points.
Index permutation_character(Index D);

} // namespace sbs
