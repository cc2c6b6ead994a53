#pragma once

#include "sbs/checks.hpp"
#include "sbs/dynamics.hpp"
#include "sbs/gaussian.hpp"
#include "sbs/linalg.hpp"
#include "sbs/metrics.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sbs
{

inline constexpr int kCsvSchemaVersion = 1;

/// Fixed-format number used in every CSV cell.
std::string format_number(double v);

/// "S:12,E1:12,E2:12"
SubsystemLayout parse_layout(const std::string& text);
std::string format_layout(const SubsystemLayout& layout);

/// Text state file: a header line, the dimension, then one "re im" line per
/// entry in row-major order. Values use 17 significant digits so a
/// write/read cycle is exact.
void write_state(std::ostream& out, const Matrix& m);
Matrix read_state(std::istream& in);
void save_state(const std::filesystem::path& path, const Matrix& m);
Matrix load_state(const std::filesystem::path& path);

std::vector<std::string> report_columns(const SbsReport& sample);
void write_report_csv(std::ostream& out, const std::vector<double>& times, const std::vector<SbsReport>& reports);
void write_saturation_csv(std::ostream& out, const CaseResult& result, const CaseConfig& cfg);
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

/// Missing keys keep the values already in `cfg`.
void merge_case_config(CaseConfig& cfg, const nlohmann::json& j);
nlohmann::json to_json(const CaseConfig& cfg);

BranchSpec branch_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BranchSpec& spec);
InjectivityInput injectivity_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CheckReport& report);

/// FNV-1a of the canonical (sorted-key) JSON dump, hex encoded.
std::string digest(const nlohmann::json& j);

} // namespace sbs
