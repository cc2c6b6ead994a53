#include "sbs/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
	using namespace sbs::cli;

	std::string command_line = "sbsqrf";
	for(int i = 1; i < argc; ++i)
	{
		command_line += std::string(" ") + argv[i];
	}

	CLI::App app{"Objectivity across quantum reference frames on a discrete ring"};
	app.require_subcommand(1);
	app.set_version_flag("--version", kToolVersion);

	RunCaseArgs run;
	run.command_line = command_line;
	std::string preset;
	std::uint64_t seed = 0;
	auto* run_cmd = app.add_subcommand("run-case", "Run one dynamical scenario and write per-frame CSVs");
	run_cmd->add_option("case", run.case_id, "Case id (1.1 ... 4)");
	run_cmd->add_option("-c,--config", run.config_path, "JSON config file");
	run_cmd->add_option("-o,--out", run.out_dir, "Output directory");
	auto* seed_opt = run_cmd->add_option("--seed", seed, "RNG seed");
	auto* preset_opt = run_cmd->add_option("--preset", preset, "Time grid preset: desk or paper");

	SweepArgs sweep;
	sweep.command_line = command_line;
	int samples = 0;
	auto* sweep_cmd = app.add_subcommand("gaussian-sweep", "Mean macrofraction fidelity over sigma and |F|");
	sweep_cmd->add_option("--sigmas", sweep.sigmas, "Sigma values")->delimiter(',');
	sweep_cmd->add_option("--fractions", sweep.fractions, "Fraction sizes")->delimiter(',');
	auto* samples_opt = sweep_cmd->add_option("--samples", samples, "Samples per cell");
	sweep_cmd->add_option("--seed", sweep.seed, "RNG seed");
	sweep_cmd->add_option("--lo", sweep.lo, "Lower end of the mean interval");
	sweep_cmd->add_option("--hi", sweep.hi, "Upper end of the mean interval");
	sweep_cmd->add_option("--preset", sweep.preset, "desk (100 samples) or paper (400 samples)");
	sweep_cmd->add_option("-o,--out", sweep.out, "Output CSV");

	CheckArgs check;
	auto* check_cmd = app.add_subcommand("check", "Verify objectivity conditions on a spec file");
	check_cmd->add_option("which", check.which, "theorem1 | prop1 | reduced | injectivity")->required();
	check_cmd->add_option("spec", check.spec_path, "Spec file (JSON)")->required();
	check_cmd->add_option("--tol", check.tol, "Tolerance");
	check_cmd->add_option("-o,--out", check.out, "Write the report as JSON");

	TransformArgs transform;
	auto* transform_cmd = app.add_subcommand("transform", "Change the reference frame of a state file");
	transform_cmd->add_option("state", transform.state_path, "Input state file")->required();
	transform_cmd->add_option("--layout", transform.layout, "Layout, e.g. S:12,E1:12,E2:12")->required();
	transform_cmd->add_option("--target", transform.target, "Subsystem whose frame to adopt")->required();
	transform_cmd->add_option("--label", transform.label, "Label for the old frame slot");
	transform_cmd->add_option("-o,--out", transform.out, "Output state file");

	try
	{
		app.parse(argc, argv);
	}
	catch(const CLI::ParseError& e)
	{
		const int code = app.exit(e);
		return code == 0 ? exit_ok : exit_invalid_input;
	}

	if(*run_cmd)
	{
		if(*seed_opt)
		{
			run.seed = seed;
		}
		if(*preset_opt)
		{
			run.preset = preset;
		}
		return cmd_run_case(run, std::cout, std::cerr);
	}
	if(*sweep_cmd)
	{
		if(*samples_opt)
		{
			sweep.samples = samples;
		}
		return cmd_gaussian_sweep(sweep, std::cout, std::cerr);
	}
	if(*check_cmd)
	{
		return cmd_check(check, std::cout, std::cerr);
	}
	return cmd_transform(transform, std::cout, std::cerr);
}
