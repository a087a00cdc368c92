#include "qpiston/io.hpp"

#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qpiston {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvTable::add_row(std::initializer_list<double> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("CsvTable: row width does not match the header");
  rows.emplace_back(row);
}

std::string CsvTable::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? ',' : '\n');
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i)
      os << format_value(row[i]) << (i + 1 < row.size() ? ',' : '\n');
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  write_text(path, to_string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

nlohmann::json certificate_json(const PMPCertificate& cert) {
  return nlohmann::json{{"pass", cert.pass},
                        {"max_abs_H", cert.max_abs_H},
                        {"phi_zero_times", cert.phi_zero_times}};
}

nlohmann::json plan_summary_json(const OptimalSolution& sol, const PMPCertificate& cert) {
  return nlohmann::json{{"gamma", sol.gamma},
                        {"t_x", sol.t_x},
                        {"t_y", sol.t_y},
                        {"total", sol.total},
                        {"switch", {sol.switch_state(0), sol.switch_state(1)}},
                        {"certificate", certificate_json(cert)}};
}

}  // namespace qpiston
