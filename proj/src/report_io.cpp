#include "levybasis/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace levybasis {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_reports_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  out << "name,pass,statistic,tolerance,failed_checks,indicative,note\n";
  for (const ExperimentReport& r : reports)
    out << csv_field(r.name) << ',' << (r.pass ? "true" : "false") << ',' << format_double(r.statistic) << ','
        << format_double(r.tolerance) << ',' << r.failed_checks << ',' << (r.indicative ? "true" : "false") << ','
        << csv_field(r.note) << '\n';
}

nlohmann::json reports_to_json(const std::vector<ExperimentReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ExperimentReport& r : reports) {
    nlohmann::json params = nlohmann::json::array();
    for (const auto& [k, v] : r.params) params.push_back({{"name", k}, {"value", v}});
    nlohmann::json stats = nlohmann::json::array();
    for (const auto& [k, v] : r.stats) stats.push_back({{"name", k}, {"value", format_double(v)}});
    arr.push_back({{"name", r.name},
                   {"pass", r.pass},
                   {"statistic", format_double(r.statistic)},
                   {"tolerance", format_double(r.tolerance)},
                   {"failed_checks", r.failed_checks},
                   {"indicative", r.indicative},
                   {"note", r.note},
                   {"params", params},
                   {"stats", stats}});
  }
  return arr;
}

void write_field_csv_header(std::ostream& out) { out << "replicate,cell,time_index,box,t_start,t_end,value\n"; }

void write_field_csv_rows(std::ostream& out, std::size_t replicate, const IncrementField& field) {
  for (std::size_t c = 0; c < field.size(); ++c) {
    const CellRef ref = field.domain().cell(c);
    out << replicate << ',' << c << ',' << ref.time_index << ',' << ref.box << ',' << format_double(ref.t_start) << ','
        << format_double(ref.t_end) << ',' << format_double(field[c]) << '\n';
  }
}

void write_trajectory_csv_rows(std::ostream& out, std::size_t replicate, const IntegrationResult& run) {
  for (std::size_t j = 0; j < run.trajectory.size(); ++j)
    out << replicate << ',' << j << ',' << format_double(run.trajectory[j].t) << ','
        << format_double(run.trajectory[j].value) << '\n';
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace levybasis
