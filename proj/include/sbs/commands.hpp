#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sbs::cli
{

enum ExitCode : int
{
	exit_ok = 0,
	exit_check_failed = 1,
	exit_invalid_input = 2,
	exit_numerical_failure = 3
};

inline constexpr const char* kToolVersion = "0.1.0";

/// Output directory when none is given: $SBSQRF_OUT, else the current directory.
std::string default_output_dir();

struct RunCaseArgs
{
	std::string case_id;
	std::string config_path;
	std::string out_dir;
	std::optional<std::uint64_t> seed;
	std::optional<std::string> preset;
	std::string command_line;
};

struct SweepArgs
{
	std::vector<double> sigmas;
	std::vector<int> fractions;
	std::optional<int> samples;
	std::uint64_t seed = 0;
	double lo = -1.0;
	double hi = 1.0;
	std::string preset = "paper";
	std::string out;
	std::string command_line;
};

struct CheckArgs
{
	std::string spec_path;
	std::string which;
	double tol = 1e-9;
	std::string out;
};

struct TransformArgs
{
	std::string state_path;
	std::string layout;
	std::string target;
	std::string label = "C";
	std::string out;
};

int cmd_run_case(const RunCaseArgs& args, std::ostream& log, std::ostream& err);
int cmd_gaussian_sweep(const SweepArgs& args, std::ostream& log, std::ostream& err);
int cmd_check(const CheckArgs& args, std::ostream& log, std::ostream& err);
int cmd_transform(const TransformArgs& args, std::ostream& log, std::ostream& err);

} // namespace sbs::cli
