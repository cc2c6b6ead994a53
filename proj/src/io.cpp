#include "sbs/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sbs
{

using nlohmann::json;

namespace
{

std::string format_exact(double v)
{
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

Complex complex_from_json(const json& v)
{
	if(v.is_number())
	{
		return {v.get<double>(), 0.0};
	}
	if(v.is_array() && v.size() == 2)
	{
		return {v[0].get<double>(), v[1].get<double>()};
	}
	throw std::invalid_argument("complex value must be a number or [re, im]");
}

json complex_to_json(Complex c)
{
	if(c.imag() == 0.0)
	{
		return c.real();
	}
	return json::array({c.real(), c.imag()});
}

std::vector<double> doubles(const json& j, const char* what)
{
	if(!j.is_array())
	{
		throw std::invalid_argument(std::string(what) + " must be a list");
	}
	return j.get<std::vector<double>>();
}

} // namespace

std::string format_number(double v)
{
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.12e", v);
	return buf;
}

SubsystemLayout parse_layout(const std::string& text)
{
	std::vector<std::string> labels;
	std::vector<Index> dims;
	std::stringstream ss(text);
	std::string item;
	while(std::getline(ss, item, ','))
	{
		const auto colon = item.find(':');
		if(colon == std::string::npos || colon == 0)
		{
			throw std::invalid_argument("layout entry must look like LABEL:DIM, got '" + item + "'");
		}
		labels.push_back(item.substr(0, colon));
		std::size_t used = 0;
		const std::string num = item.substr(colon + 1);
		long long d = 0;
		try
		{
			d = std::stoll(num, &used);
		}
		catch(const std::exception&)
		{
			throw std::invalid_argument("bad dimension in layout entry '" + item + "'");
		}
		if(used != num.size())
		{
			throw std::invalid_argument("bad dimension in layout entry '" + item + "'");
		}
		dims.push_back(static_cast<Index>(d));
	}
	if(labels.empty())
	{
		throw std::invalid_argument("empty layout");
	}
	return SubsystemLayout(std::move(labels), std::move(dims));
}

std::string format_layout(const SubsystemLayout& layout)
{
	std::string out;
	for(std::size_t k = 0; k < layout.size(); ++k)
	{
		out += (k ? "," : "") + layout.labels()[k] + ":" + std::to_string(layout.dims()[k]);
	}
	return out;
}

void write_state(std::ostream& out, const Matrix& m)
{
	out << "sbs-state 1\n" << m.rows() << ' ' << m.cols() << '\n';
	for(Index r = 0; r < m.rows(); ++r)
	{
		for(Index c = 0; c < m.cols(); ++c)
		{
			out << format_exact(m(r, c).real()) << ' ' << format_exact(m(r, c).imag()) << '\n';
		}
	}
}

Matrix read_state(std::istream& in)
{
	std::string magic;
	int version = 0;
	if(!(in >> magic >> version) || magic != "sbs-state" || version != 1)
	{
		throw std::invalid_argument("not a state file (missing 'sbs-state 1' header)");
	}
	Index rows = 0;
	Index cols = 0;
	if(!(in >> rows >> cols) || rows <= 0 || rows != cols)
	{
		throw std::invalid_argument("state file has bad dimensions");
	}
	Matrix m(rows, cols);
	for(Index r = 0; r < rows; ++r)
	{
		for(Index c = 0; c < cols; ++c)
		{
			double re = 0.0;
			double im = 0.0;
			if(!(in >> re >> im))
			{
				throw std::invalid_argument("state file is truncated");
			}
			m(r, c) = Complex(re, im);
		}
	}
	std::string extra;
	if(in >> extra)
	{
		throw std::invalid_argument("state file has trailing data");
	}
	return m;
}

void save_state(const std::filesystem::path& path, const Matrix& m)
{
	std::ofstream out(path);
	if(!out)
	{
		throw std::runtime_error("cannot write " + path.string());
	}
	write_state(out, m);
}

Matrix load_state(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if(!in)
	{
		throw std::invalid_argument("cannot open " + path.string());
	}
	return read_state(in);
}

std::vector<std::string> report_columns(const SbsReport& sample)
{
	std::vector<std::string> cols{"t", "frame"};
	for(std::size_t i = 0; i < sample.p.size(); ++i)
	{
		cols.push_back("p_" + std::to_string(i));
	}
	cols.push_back("gamma");
	cols.push_back("i_mean");
	for(const auto& o : sample.observers)
	{
		cols.push_back("err_lo_" + o.label);
		cols.push_back("err_hi_" + o.label);
	}
	for(const auto& o : sample.observers)
	{
		cols.push_back("holevo_" + o.label);
	}
	for(const auto& o : sample.observers)
	{
		cols.push_back("qmi_" + o.label);
	}
	cols.push_back("eta");
	for(const auto& o : sample.observers)
	{
		cols.push_back("trivial_" + o.label);
	}
	return cols;
}

void write_report_csv(std::ostream& out, const std::vector<double>& times, const std::vector<SbsReport>& reports)
{
	if(reports.empty() || times.size() != reports.size())
	{
		throw std::invalid_argument("report series is empty or misaligned");
	}
	const auto cols = report_columns(reports.front());
	for(std::size_t k = 0; k < cols.size(); ++k)
	{
		out << (k ? "," : "") << cols[k];
	}
	out << '\n';
	for(std::size_t r = 0; r < reports.size(); ++r)
	{
		const auto& rep = reports[r];
		out << format_number(times[r]) << ',' << rep.frame;
		for(double v : rep.p)
		{
			out << ',' << format_number(v);
		}
		out << ',' << format_number(rep.gamma) << ',' << format_number(rep.i_mean);
		for(const auto& o : rep.observers)
		{
			out << ',' << format_number(o.bounds.lower) << ',' << format_number(o.bounds.upper);
		}
		for(const auto& o : rep.observers)
		{
			out << ',' << format_number(o.holevo);
		}
		for(const auto& o : rep.observers)
		{
			out << ',' << format_number(o.qmi);
		}
		out << ',' << format_number(rep.eta);
		for(const auto& o : rep.observers)
		{
			out << ',' << (o.bounds.trivial ? 1 : 0);
		}
		out << '\n';
	}
}

void write_saturation_csv(std::ostream& out, const CaseResult& result, const CaseConfig& cfg)
{
	out << "frame,i_sat,sigma_i,t_sat,window_lo,window_hi\n";
	if(!result.has_saturation)
	{
		return;
	}
	auto row = [&](const char* frame, const SaturationStats& s) {
		out << frame << ',' << format_number(s.i_sat) << ',' << format_number(s.sigma_i) << ','
			<< format_number(s.t_sat) << ',' << format_number(cfg.window.first) << ','
			<< format_number(cfg.window.second) << '\n';
	};
	row("C", result.saturation_c);
	row("E1", result.saturation_e1);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells)
{
	out << "sigma,fraction_size,mean_fidelity,n_samples,seed\n";
	for(const auto& c : cells)
	{
		out << format_number(c.sigma) << ',' << c.fraction_size << ',' << format_number(c.mean_fidelity) << ','
			<< c.samples << ',' << c.seed << '\n';
	}
}

void merge_case_config(CaseConfig& cfg, const json& j)
{
	if(!j.is_object())
	{
		throw std::invalid_argument("config must be an object");
	}
	static const std::vector<std::string> known{
		"case", "D", "seed", "preset", "time_grid_short", "time_grid_long", "window", "couplings"};
	for(const auto& [key, value] : j.items())
	{
		if(std::find(known.begin(), known.end(), key) == known.end())
		{
			throw std::invalid_argument("unknown config key " + key);
		}
	}
	if(j.contains("case"))
	{
		cfg.case_id = j["case"].is_string() ? j["case"].get<std::string>() : j["case"].dump();
	}
	if(j.contains("D"))
	{
		cfg.D = j["D"].get<Index>();
	}
	if(j.contains("seed"))
	{
		cfg.seed = j["seed"].get<std::uint64_t>();
	}
	if(j.contains("preset"))
	{
		apply_preset(cfg, parse_preset(j["preset"].get<std::string>()));
	}
	if(j.contains("time_grid_short"))
	{
		cfg.time_grid_short = doubles(j["time_grid_short"], "time_grid_short");
	}
	if(j.contains("time_grid_long"))
	{
		cfg.time_grid_long = doubles(j["time_grid_long"], "time_grid_long");
	}
	if(j.contains("window"))
	{
		const auto w = doubles(j["window"], "window");
		if(w.size() != 2)
		{
			throw std::invalid_argument("window must have two entries");
		}
		cfg.window = {w[0], w[1]};
	}
	if(j.contains("couplings"))
	{
		const auto& c = j["couplings"];
		cfg.couplings.central = c.value("central", cfg.couplings.central);
		cfg.couplings.local = c.value("local", cfg.couplings.local);
		cfg.couplings.global = c.value("global", cfg.couplings.global);
	}
}

json to_json(const CaseConfig& cfg)
{
	return json{{"case", cfg.case_id}, {"D", cfg.D}, {"seed", cfg.seed}, {"time_grid_short", cfg.time_grid_short},
		{"time_grid_long", cfg.time_grid_long}, {"window", {cfg.window.first, cfg.window.second}},
		{"couplings",
			{{"central", cfg.couplings.central}, {"local", cfg.couplings.local}, {"global", cfg.couplings.global}}}};
}

BranchSpec branch_spec_from_json(const json& j)
{
	BranchSpec spec;
	spec.p = doubles(j.at("p"), "p");
	for(const auto& w : j.at("system"))
	{
		Wavefunction psi;
		psi.positions = doubles(w.at("positions"), "positions");
		for(const auto& a : w.at("amplitudes"))
		{
			psi.amplitudes.push_back(complex_from_json(a));
		}
		spec.system.push_back(std::move(psi));
	}
	for(const auto& row : j.at("environments"))
	{
		std::vector<EnvConditional> envs;
		for(const auto& c : row)
		{
			EnvConditional e;
			e.positions = doubles(c.at("positions"), "positions");
			const auto k = static_cast<Index>(e.positions.size());
			e.table = Matrix::Zero(k, k);
			if(c.contains("weights"))
			{
				const auto w = doubles(c["weights"], "weights");
				if(static_cast<Index>(w.size()) != k)
				{
					throw std::invalid_argument("weights and positions differ in length");
				}
				for(Index a = 0; a < k; ++a)
				{
					e.table(a, a) = w[a];
				}
			}
			else
			{
				const auto& t = c.at("table");
				if(static_cast<Index>(t.size()) != k)
				{
					throw std::invalid_argument("table and positions differ in size");
				}
				for(Index a = 0; a < k; ++a)
				{
					if(static_cast<Index>(t[a].size()) != k)
					{
						throw std::invalid_argument("table row has the wrong length");
					}
					for(Index b = 0; b < k; ++b)
					{
						e.table(a, b) = complex_from_json(t[a][b]);
					}
				}
			}
			envs.push_back(std::move(e));
		}
		spec.env.push_back(std::move(envs));
	}
	validate(spec);
	return spec;
}

json to_json(const BranchSpec& spec)
{
	json system = json::array();
	for(const auto& w : spec.system)
	{
		json amps = json::array();
		for(const auto& a : w.amplitudes)
		{
			amps.push_back(complex_to_json(a));
		}
		system.push_back({{"positions", w.positions}, {"amplitudes", amps}});
	}
	json envs = json::array();
	for(const auto& row : spec.env)
	{
		json r = json::array();
		for(const auto& c : row)
		{
			json table = json::array();
			for(Index a = 0; a < c.table.rows(); ++a)
			{
				json line = json::array();
				for(Index b = 0; b < c.table.cols(); ++b)
				{
					line.push_back(complex_to_json(c.table(a, b)));
				}
				table.push_back(line);
			}
			r.push_back({{"positions", c.positions}, {"table", table}});
		}
		envs.push_back(r);
	}
	return json{{"p", spec.p}, {"system", system}, {"environments", envs}};
}

InjectivityInput injectivity_from_json(const json& j)
{
	InjectivityInput in;
	in.x = doubles(j.at("x"), "x");
	for(const auto& m : j.at("maps"))
	{
		in.phi.push_back(doubles(m, "map"));
	}
	in.frame = j.value("frame", std::size_t{0});
	return in;
}

json to_json(const CheckReport& report)
{
	json v = json::array();
	for(const auto& x : report.violations)
	{
		v.push_back({{"condition", x.condition}, {"indices", x.indices}, {"magnitude", x.magnitude},
			{"detail", x.detail}});
	}
	return json{{"verdict", report.passed() ? "pass" : "fail"}, {"violations", v}, {"notes", report.notes}};
}

std::string digest(const json& j)
{
	const std::string text = j.dump();
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for(unsigned char c : text)
	{
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	char buf[20];
	std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
	return buf;
}

} // namespace sbs
