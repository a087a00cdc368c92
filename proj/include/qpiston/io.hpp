#pragma once

// Output helpers shared by the command-line tool: CSV tables with a fixed
// 12-significant-digit format and JSON document assembly for plan and
// certificate summaries.

#include "qpiston/optimal.hpp"
#include "qpiston/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qpiston {

/// Formats a double with 12 significant digits (%.12g).
std::string format_value(double v);

/// One table, written as `header` then one line per row; every cell uses
/// format_value. Row lengths must match the header.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::initializer_list<double> row);
  void write(const std::filesystem::path& path) const;
  std::string to_string() const;
};

void write_text(const std::filesystem::path& path, const std::string& text);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Plan/certificate summary in the documented schema:
/// {"gamma": ..., "t_x": ..., "t_y": ..., "total": ...,
///  "switch": [x1, x2],
///  "certificate": {"pass": ..., "max_abs_H": ..., "phi_zero_times": [...]}}
nlohmann::json plan_summary_json(const OptimalSolution& sol, const PMPCertificate& cert);

nlohmann::json certificate_json(const PMPCertificate& cert);

}  // namespace qpiston
