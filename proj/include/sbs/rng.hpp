#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sbs
{

inline std::uint64_t splitmix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

// FNV-1a, so that stream tags are stable across platforms.
inline std::uint64_t hash_tag(std::string_view tag)
{
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for(unsigned char c : tag)
	{
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return h;
}

/// Seeded stream keyed by (seed, scope, purpose). Two streams with different
/// keys are independent for practical purposes; the same key always replays
/// the same numbers.
class Rng
{
public:
	explicit Rng(std::uint64_t seed, std::string_view scope = {}, std::string_view purpose = {})
		: engine_{splitmix64(splitmix64(seed ^ hash_tag(scope)) ^ hash_tag(purpose))}
	{
	}

	/// Child stream for sub-task `index` (e.g. one Monte-Carlo sample).
	[[nodiscard]] Rng fork(std::uint64_t index) const
	{
		Rng child = *this;
		child.engine_.seed(splitmix64(state_tag() ^ splitmix64(index + 1)));
		return child;
	}

	/// Uniform on [0, 1) from the top 53 bits; identical on every platform,
	/// unlike std::uniform_real_distribution.
	double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

	std::uint64_t next() { return engine_(); }

private:
	std::uint64_t state_tag() const
	{
		auto copy = engine_;
		return copy();
	}

	std::mt19937_64 engine_;
};

} // namespace sbs
