#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spherecode/bounds.hpp"
#include "spherecode/configuration.hpp"
#include "spherecode/labeled_features.hpp"
#include "spherecode/metrics.hpp"
#include "spherecode/solver.hpp"
#include "spherecode/ufm.hpp"

namespace spherecode {

/// Options for reading configuration CSV files. Rows whose norm deviates
/// from 1 by more than `norm_tolerance` are rejected unless
/// `allow_denormalized` is set; accepted rows are always renormalized.
struct CsvReadOptions {
  double norm_tolerance = 1e-3;
  bool allow_denormalized = false;
};

/// Doubles rendered with 17 significant digits, enough to round-trip.
std::string format_double(double value);

/// Configuration CSV: one row per vector, d comma-separated columns, no
/// header.
void write_configuration_csv(const std::filesystem::path& path,
                             const SphericalConfiguration& config);
SphericalConfiguration read_configuration_csv(
    const std::filesystem::path& path, const CsvReadOptions& options = {});

/// Feature CSV: header "label,f0,...,f{d-1}", one sample per row. The
/// number of classes is inferred from the labels unless given explicitly.
void write_features_csv(const std::filesystem::path& path,
                        const LabeledFeatureSet& features);
LabeledFeatureSet read_features_csv(const std::filesystem::path& path,
                                    std::optional<int> num_classes = std::nullopt);

std::string solve_report_to_json(const SolveReport& report);
std::string gnc_report_to_json(const GncReport& report);
std::string margin_bounds_to_json(const MarginBounds& bounds);
std::string scan_rows_to_json(const std::vector<DimensionScanRow>& rows);

/// Scan CSV with header "d,lower,upper,rho"; the rho column is left empty
/// for rows without a solver value.
std::string scan_rows_to_csv(const std::vector<DimensionScanRow>& rows);

/// Sweep CSV with header "tau,ce_max_cosine,hardmax_reference".
std::string hardmax_rows_to_csv(const std::vector<HardmaxSweepRow>& rows);

/// Training trace CSV with header "iter,loss,gnc1,gnc3".
std::string ufm_trace_to_csv(const std::vector<UfmTraceRow>& rows);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace spherecode
