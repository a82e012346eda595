#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "levybasis/integrator.hpp"
#include "levybasis/sampler.hpp"
#include "levybasis/verify.hpp"

namespace levybasis {

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// name,pass,statistic,tolerance,failed_checks,indicative,note
void write_reports_csv(std::ostream& out, const std::vector<ExperimentReport>& reports);
/// Everything except runtime.
nlohmann::json reports_to_json(const std::vector<ExperimentReport>& reports);

/// replicate,cell,time_index,box,t_start,t_end,value
void write_field_csv_header(std::ostream& out);
void write_field_csv_rows(std::ostream& out, std::size_t replicate, const IncrementField& field);

/// replicate,block,t,value (t = 0 row first)
void write_trajectory_csv_rows(std::ostream& out, std::size_t replicate, const IntegrationResult& run);

/// Creates parent directories as needed and replaces the file.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace levybasis
