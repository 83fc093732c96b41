#include "spherecode/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "spherecode/errors.hpp"

namespace spherecode {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

double parse_field_double(const std::string& field,
                          const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(field, &consumed);
    while (consumed < field.size() &&
           std::isspace(static_cast<unsigned char>(field[consumed]))) {
      ++consumed;
    }
    if (consumed != field.size()) {
      throw ParseError(location(path, line) + ": trailing characters in '" +
                       field + "'");
    }
    return value;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(location(path, line) + ": cannot parse '" + field +
                     "' as a number");
  }
}

long parse_field_long(const std::string& field,
                      const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t consumed = 0;
    const long value = std::stol(field, &consumed);
    if (consumed != field.size()) {
      throw ParseError(location(path, line) + ": trailing characters in '" +
                       field + "'");
    }
    return value;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(location(path, line) + ": cannot parse '" + field +
                     "' as an integer");
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path.string() + ": cannot open file");
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    lines.push_back(line);
  }
  return lines;
}

ordered_json restart_stats_json(const std::vector<RestartStat>& stats) {
  ordered_json array = ordered_json::array();
  for (const RestartStat& stat : stats) {
    array.push_back(ordered_json{{"seed", stat.seed},
                                 {"achieved", stat.achieved},
                                 {"iterations", stat.iterations}});
  }
  return array;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_configuration_csv(const std::filesystem::path& path,
                             const SphericalConfiguration& config) {
  std::ostringstream out;
  for (Eigen::Index k = 0; k < config.count(); ++k) {
    for (Eigen::Index i = 0; i < config.dim(); ++i) {
      if (i > 0) {
        out << ',';
      }
      out << format_double(config.matrix()(i, k));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

SphericalConfiguration read_configuration_csv(const std::filesystem::path& path,
                                              const CsvReadOptions& options) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<std::vector<double>> rows;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (lines[li].empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_fields(lines[li]);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const std::string& field : fields) {
      row.push_back(parse_field_double(field, path, li + 1));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(location(path, li + 1) + ": expected " +
                       std::to_string(rows.front().size()) +
                       " columns, found " + std::to_string(row.size()));
    }
    double norm_sq = 0.0;
    for (const double v : row) {
      norm_sq += v * v;
    }
    const double norm = std::sqrt(norm_sq);
    if (!options.allow_denormalized &&
        std::abs(norm - 1.0) > options.norm_tolerance) {
      throw ParseError(location(path, li + 1) + ": row norm " +
                       format_double(norm) + " deviates from 1 by more than " +
                       format_double(options.norm_tolerance));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(path.string() + ": no data rows");
  }
  Eigen::MatrixXd columns(static_cast<Eigen::Index>(rows.front().size()),
                          static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      columns(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          rows[k][i];
    }
  }
  // The constructor renormalizes, so rows within tolerance become exact.
  return SphericalConfiguration(std::move(columns));
}

void write_features_csv(const std::filesystem::path& path,
                        const LabeledFeatureSet& features) {
  std::ostringstream out;
  out << "label";
  for (Eigen::Index i = 0; i < features.dim(); ++i) {
    out << ",f" << i;
  }
  out << '\n';
  for (Eigen::Index j = 0; j < features.size(); ++j) {
    out << features.labels()[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < features.dim(); ++i) {
      out << ',' << format_double(features.matrix()(i, j));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

LabeledFeatureSet read_features_csv(const std::filesystem::path& path,
                                    std::optional<int> num_classes) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) {
    throw ParseError(path.string() + ": empty file");
  }
  const std::vector<std::string> header = split_fields(lines[0]);
  if (header.empty() || header[0] != "label") {
    throw ParseError(location(path, 1) +
                     ": header must start with 'label', got '" + lines[0] + "'");
  }
  const std::size_t dim = header.size() - 1;
  if (dim == 0) {
    throw ParseError(location(path, 1) + ": header names no feature columns");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    const std::string expected = "f" + std::to_string(i - 1);
    if (header[i] != expected) {
      throw ParseError(location(path, 1) + ": expected header column '" +
                       expected + "', got '" + header[i] + "'");
    }
  }

  std::vector<int> labels;
  std::vector<std::vector<double>> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_fields(lines[li]);
    if (fields.size() != dim + 1) {
      throw ParseError(location(path, li + 1) + ": expected " +
                       std::to_string(dim + 1) + " fields, found " +
                       std::to_string(fields.size()));
    }
    const long label = parse_field_long(fields[0], path, li + 1);
    if (label < 0) {
      throw ParseError(location(path, li + 1) + ": negative label " +
                       std::to_string(label));
    }
    labels.push_back(static_cast<int>(label));
    std::vector<double> row;
    row.reserve(dim);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      row.push_back(parse_field_double(fields[i], path, li + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ParseError(path.string() + ": no data rows");
  }

  int classes = 0;
  if (num_classes.has_value()) {
    classes = *num_classes;
  } else {
    for (const int label : labels) {
      classes = std::max(classes, label + 1);
    }
  }
  Eigen::MatrixXd features(static_cast<Eigen::Index>(dim),
                           static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[j][i];
    }
  }
  return LabeledFeatureSet(classes, std::move(labels), std::move(features));
}

std::string solve_report_to_json(const SolveReport& report) {
  ordered_json doc;
  doc["objective_kind"] = std::string(to_string(report.objective_kind));
  doc["achieved"] = report.achieved;
  doc["dim"] = report.best_config.dim();
  doc["count"] = report.best_config.count();
  doc["seed"] = report.seed;
  doc["per_restart"] = restart_stats_json(report.per_restart);
  ordered_json trace = ordered_json::array();
  for (const StagePoint& point : report.trace) {
    trace.push_back(ordered_json{{"tau", point.tau},
                                 {"objective", point.objective}});
  }
  doc["trace"] = std::move(trace);
  return doc.dump(2) + "\n";
}

std::string gnc_report_to_json(const GncReport& report) {
  ordered_json doc;
  doc["gnc1"] = report.gnc1;
  doc["gnc2"] = report.gnc2;
  if (report.gnc2_reference.has_value()) {
    doc["gnc2_reference"] = *report.gnc2_reference;
  } else {
    doc["gnc2_reference"] = nullptr;
  }
  doc["gnc3"] = report.gnc3;
  doc["ncc_accuracy"] = report.ncc_accuracy;
  doc["class_mean_norms"] = report.class_mean_norms;
  doc["classifier_norms"] = report.classifier_norms;
  doc["norm_ratio_cv"] = report.norm_ratio_cv;
  return doc.dump(2) + "\n";
}

std::string margin_bounds_to_json(const MarginBounds& bounds) {
  ordered_json doc;
  doc["dim"] = bounds.dim;
  doc["count"] = bounds.count;
  doc["lower"] = bounds.lower;
  doc["upper"] = bounds.upper;
  doc["applicable"] = bounds.applicable;
  return doc.dump(2) + "\n";
}

std::string scan_rows_to_json(const std::vector<DimensionScanRow>& rows) {
  ordered_json array = ordered_json::array();
  for (const DimensionScanRow& row : rows) {
    ordered_json entry;
    entry["d"] = row.dim;
    entry["lower"] = row.lower;
    entry["upper"] = row.upper;
    if (row.solver_rho.has_value()) {
      entry["rho"] = *row.solver_rho;
    } else {
      entry["rho"] = nullptr;
    }
    array.push_back(std::move(entry));
  }
  return array.dump(2) + "\n";
}

std::string scan_rows_to_csv(const std::vector<DimensionScanRow>& rows) {
  std::ostringstream out;
  out << "d,lower,upper,rho\n";
  for (const DimensionScanRow& row : rows) {
    out << row.dim << ',' << format_double(row.lower) << ','
        << format_double(row.upper) << ',';
    if (row.solver_rho.has_value()) {
      out << format_double(*row.solver_rho);
    }
    out << '\n';
  }
  return out.str();
}

std::string hardmax_rows_to_csv(const std::vector<HardmaxSweepRow>& rows) {
  std::ostringstream out;
  out << "tau,ce_max_cosine,hardmax_reference\n";
  for (const HardmaxSweepRow& row : rows) {
    out << format_double(row.tau) << ',' << format_double(row.ce_max_cosine)
        << ',' << format_double(row.hardmax_reference) << '\n';
  }
  return out.str();
}

std::string ufm_trace_to_csv(const std::vector<UfmTraceRow>& rows) {
  std::ostringstream out;
  out << "iter,loss,gnc1,gnc3\n";
  for (const UfmTraceRow& row : rows) {
    out << row.iter << ',' << format_double(row.loss) << ','
        << format_double(row.gnc1) << ',' << format_double(row.gnc3) << '\n';
  }
  return out.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError(path.string() + ": cannot open file for writing");
  }
  out << text;
  if (!out) {
    throw ParseError(path.string() + ": write failed");
  }
}

}  // namespace spherecode
