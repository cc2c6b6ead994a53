#include "sbs/commands.hpp"

#include "sbs/io.hpp"
#include "sbs/ring.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace sbs::cli
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

// Maps library exceptions onto the documented exit codes.
template <class F>
int guarded(std::ostream& err, F&& body)
{
	try
	{
		return body();
	}
	catch(const NumericalError& e)
	{
		err << "numerical failure: " << e.what() << '\n';
		return exit_numerical_failure;
	}
	catch(const json::exception& e)
	{
		err << "invalid input: " << e.what() << '\n';
		return exit_invalid_input;
	}
	catch(const std::invalid_argument& e)
	{
		err << "invalid input: " << e.what() << '\n';
		return exit_invalid_input;
	}
	catch(const std::domain_error& e)
	{
		err << "invalid input: " << e.what() << '\n';
		return exit_invalid_input;
	}
	catch(const std::exception& e)
	{
		err << "error: " << e.what() << '\n';
		return exit_numerical_failure;
	}
}

json read_json(const std::string& path)
{
	std::ifstream in(path);
	if(!in)
	{
		throw std::invalid_argument("cannot open " + path);
	}
	return json::parse(in);
}

std::ofstream open_out(const fs::path& path)
{
	std::ofstream out(path, std::ios::binary);
	if(!out)
	{
		throw std::runtime_error("cannot write " + path.string());
	}
	return out;
}

std::string safe_id(std::string id)
{
	for(char& c : id)
	{
		c = c == '.' ? '_' : c;
	}
	return id;
}

} // namespace

std::string default_output_dir()
{
	const char* env = std::getenv("SBSQRF_OUT");
	return env && *env ? env : ".";
}

int cmd_run_case(const RunCaseArgs& args, std::ostream& log, std::ostream& err)
{
	return guarded(err, [&] {
		const auto start = std::chrono::steady_clock::now();
		CaseConfig cfg;
		apply_preset(cfg, Preset::desk);
		json file_cfg = json::object();
		if(!args.config_path.empty())
		{
			file_cfg = read_json(args.config_path);
			merge_case_config(cfg, file_cfg);
		}
		if(!args.case_id.empty())
		{
			cfg.case_id = args.case_id;
		}
		if(!is_known_case(cfg.case_id))
		{
			throw std::invalid_argument("unknown case " + cfg.case_id);
		}
		if(args.preset)
		{
			apply_preset(cfg, parse_preset(*args.preset));
		}
		if(args.seed)
		{
			cfg.seed = *args.seed;
		}
		validate(cfg);

		const fs::path dir = args.out_dir.empty() ? default_output_dir() : args.out_dir;
		fs::create_directories(dir);
		const std::string stem = "case_" + safe_id(cfg.case_id);

		log << "running case " << cfg.case_id << " (D=" << cfg.D << ", seed=" << cfg.seed << ", "
			<< case_times(cfg).size() << " time points)\n";
		const auto result = run_case(cfg);

		const std::vector<std::string> outputs{
			stem + "_C.csv", stem + "_E1.csv", stem + "_saturation.csv", stem + "_manifest.json"};
		{
			auto out = open_out(dir / outputs[0]);
			write_report_csv(out, result.times, result.frame_c);
		}
		{
			auto out = open_out(dir / outputs[1]);
			write_report_csv(out, result.times, result.frame_e1);
		}
		{
			auto out = open_out(dir / outputs[2]);
			write_saturation_csv(out, result, cfg);
		}
		const double wall =
			std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		const json canonical = to_json(cfg);
		json manifest{{"command", args.command_line.empty() ? "run-case " + cfg.case_id : args.command_line},
			{"config", canonical}, {"config_digest", digest(canonical)}, {"seed", cfg.seed},
			{"tool_version", kToolVersion}, {"csv_schema", kCsvSchemaVersion}, {"outputs", outputs},
			{"wall_time_s", wall}};
		auto out = open_out(dir / outputs[3]);
		out << manifest.dump(2) << '\n';
		if(result.has_saturation)
		{
			log << "I_sat(E1) = " << result.saturation_e1.i_sat << ", sigma = " << result.saturation_e1.sigma_i
				<< ", t_sat = " << result.saturation_e1.t_sat << '\n';
		}
		log << "wrote " << outputs.size() << " files to " << dir.string() << '\n';
		return static_cast<int>(exit_ok);
	});
}

int cmd_gaussian_sweep(const SweepArgs& args, std::ostream& log, std::ostream& err)
{
	return guarded(err, [&] {
		const auto start = std::chrono::steady_clock::now();
		SweepConfig cfg;
		const int preset_samples = args.preset == "desk" ? 100 : args.preset == "paper" ? 400 : -1;
		if(preset_samples < 0)
		{
			throw std::invalid_argument("unknown preset " + args.preset);
		}
		cfg.samples = args.samples.value_or(preset_samples);
		cfg.sigmas = args.sigmas.empty() ? std::vector<double>{0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0} : args.sigmas;
		cfg.fraction_sizes = args.fractions.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} : args.fractions;
		cfg.lo = args.lo;
		cfg.hi = args.hi;
		cfg.seed = args.seed;
		const auto cells = sweep_localisation_vs_fraction(cfg);

		const fs::path out_path = args.out.empty() ? fs::path(default_output_dir()) / "gaussian_sweep.csv" : fs::path(args.out);
		if(out_path.has_parent_path())
		{
			fs::create_directories(out_path.parent_path());
		}
		{
			auto out = open_out(out_path);
			write_sweep_csv(out, cells);
		}
		const json canonical{{"sigmas", cfg.sigmas}, {"fractions", cfg.fraction_sizes}, {"samples", cfg.samples},
			{"interval", {cfg.lo, cfg.hi}}, {"seed", cfg.seed}};
		const double wall =
			std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		json manifest{{"command", args.command_line.empty() ? "gaussian-sweep" : args.command_line},
			{"config", canonical}, {"config_digest", digest(canonical)}, {"seed", cfg.seed},
			{"tool_version", kToolVersion}, {"outputs", {out_path.filename().string()}}, {"wall_time_s", wall}};
		fs::path manifest_path = out_path;
		manifest_path.replace_extension(".manifest.json");
		auto out = open_out(manifest_path);
		out << manifest.dump(2) << '\n';
		log << "wrote " << cells.size() << " cells to " << out_path.string() << '\n';
		return static_cast<int>(exit_ok);
	});
}

int cmd_check(const CheckArgs& args, std::ostream& log, std::ostream& err)
{
	return guarded(err, [&] {
		const json spec = read_json(args.spec_path);
		CheckReport report;
		json extra = json::object();
		if(args.which == "theorem1")
		{
			report = check_theorem1(branch_spec_from_json(spec), {args.tol, std::nullopt});
		}
		else if(args.which == "prop1")
		{
			auto r = check_proposition1(branch_spec_from_json(spec), {args.tol, std::nullopt});
			report = r.report;
			extra["new_spectrum"] = r.new_spectrum;
		}
		else if(args.which == "reduced")
		{
			const auto layout = parse_layout(spec.at("layout").get<std::string>());
			fs::path state_path = spec.at("state_file").get<std::string>();
			if(state_path.is_relative())
			{
				state_path = fs::path(args.spec_path).parent_path() / state_path;
			}
			const DensityMatrix rho = DensityMatrix::checked(load_state(state_path));
			report = check_reduced_objectivity(rho, layout, spec.value("target", std::string("lab")), args.tol,
				spec.value("trace_out", std::vector<std::string>{}), spec.value("system", std::string("S")));
		}
		else if(args.which == "injectivity")
		{
			report = check_injectivity(injectivity_from_json(spec), args.tol);
		}
		else
		{
			throw std::invalid_argument("unknown check " + args.which);
		}
		log << args.which << ": " << report.summary();
		if(!args.out.empty())
		{
			json j = to_json(report);
			j.update(extra);
			auto out = open_out(args.out);
			out << j.dump(2) << '\n';
		}
		else if(!extra.empty())
		{
			log << extra.dump() << '\n';
		}
		return static_cast<int>(report.passed() ? exit_ok : exit_check_failed);
	});
}

int cmd_transform(const TransformArgs& args, std::ostream& log, std::ostream& err)
{
	return guarded(err, [&] {
		const auto layout = parse_layout(args.layout);
		const DensityMatrix rho(load_state(args.state_path));
		if(rho.dim() != layout.total_dim())
		{
			throw std::invalid_argument("state dimension " + std::to_string(rho.dim()) +
				" does not match layout dimension " + std::to_string(layout.total_dim()));
		}
		const auto perm = build_frame_permutation(layout.dims().front(), layout, args.target, args.label);
		const Matrix out = apply_frame_transform(rho.matrix(), perm);
		const double drift =
			(hermitian_eigenvalues_blockwise(out) - hermitian_eigenvalues_blockwise(rho.matrix())).cwiseAbs().maxCoeff();
		const fs::path out_path = args.out.empty() ? fs::path(default_output_dir()) / "transformed.state" : fs::path(args.out);
		save_state(out_path, out);
		log << "frame " << args.target << " layout " << format_layout(perm.result) << "; spectrum drift " << drift
			<< '\n';
		if(drift > 1e-12)
		{
			err << "spectrum changed by " << drift << '\n';
			return static_cast<int>(exit_numerical_failure);
		}
		return static_cast<int>(exit_ok);
	});
}

} // namespace sbs::cli
