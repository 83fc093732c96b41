#include <doctest.h>

#include <spherecode/bounds.hpp>
#include <spherecode/closed_forms.hpp>
#include <spherecode/errors.hpp>
#include <spherecode/io.hpp>
#include <spherecode/labeled_features.hpp>
#include <spherecode/metrics.hpp>
#include <spherecode/solver.hpp>

#include <json.hpp>

#include "support/schema_lite.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef SPHERECODE_SCHEMA_PATH
#error "SPHERECODE_SCHEMA_PATH must point at the JSON schema file"
#endif

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir() {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("spherecode-io-tests-" + std::to_string(++counter));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

nlohmann::json load_schema() {
  std::ifstream in(SPHERECODE_SCHEMA_PATH);
  REQUIRE_MESSAGE(static_cast<bool>(in), "schema file must exist");
  nlohmann::json schema;
  in >> schema;
  return schema;
}

void check_valid(const std::string& def, const std::string& text) {
  const nlohmann::json schema = load_schema();
  const nlohmann::json instance = nlohmann::json::parse(text);
  const auto violations =
      spherecode::testing::schema_violations(schema, def, instance);
  for (const std::string& violation : violations) {
    MESSAGE(def << ": " << violation);
  }
  CHECK(violations.empty());
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round-trips doubles exactly") {
  const double values[] = {0.0,
                           -0.0,
                           0.1,
                           1.0 / 3.0,
                           3.14159265358979323846,
                           1.0 - std::pow(2.0, -52),
                           1e-300,
                           -6.02214076e23,
                           2.0 * std::sin(M_PI / 7.0),
                           1.0005};
  for (const double value : values) {
    const std::string text = spherecode::format_double(value);
    CHECK(std::stod(text) == value);
  }
}

TEST_CASE("configuration csv round-trips within 1e-15 with no header") {
  const auto dir = fresh_dir();
  const auto path = dir / "circle.csv";
  const auto config = spherecode::uniform_circle(7, 0.37);
  spherecode::write_configuration_csv(path, config);

  const std::string text = slurp(path);
  REQUIRE(!text.empty());
  // No header: the file starts directly with a numeric row.
  CHECK((std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '-'));

  const auto read = spherecode::read_configuration_csv(path);
  REQUIRE(read.dim() == config.dim());
  REQUIRE(read.count() == config.count());
  CHECK((read.matrix() - config.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("high-dimensional configuration csv round-trips") {
  const auto dir = fresh_dir();
  const auto path = dir / "etf.csv";
  const auto config = spherecode::simplex_etf(6, 7);
  spherecode::write_configuration_csv(path, config);
  const auto read = spherecode::read_configuration_csv(path);
  CHECK((read.matrix() - config.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("rows off the sphere are rejected with file and line context") {
  const auto dir = fresh_dir();
  const auto path = dir / "bad_norm.csv";
  spherecode::write_text_file(path, "1,0\n0.5,0.5\n0,1\n");
  try {
    spherecode::read_configuration_csv(path);
    FAIL("expected ParseError");
  } catch (const spherecode::ParseError& error) {
    const std::string message = error.what();
    CHECK(message.find(path.filename().string()) != std::string::npos);
    CHECK(message.find(":2:") != std::string::npos);
    CHECK(message.find("norm") != std::string::npos);
  }
}

TEST_CASE("allow_denormalized renormalizes instead of rejecting") {
  const auto dir = fresh_dir();
  const auto path = dir / "denorm.csv";
  spherecode::write_text_file(path, "2,0\n0.5,0.5\n");
  spherecode::CsvReadOptions options;
  options.allow_denormalized = true;
  const auto read = spherecode::read_configuration_csv(path, options);
  REQUIRE(read.count() == 2);
  CHECK(std::abs(read.column(0).norm() - 1.0) <= 1e-15);
  CHECK(read.matrix()(0, 0) == doctest::Approx(1.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(read.matrix()(0, 1) == doctest::Approx(inv_sqrt2));
  CHECK(read.matrix()(1, 1) == doctest::Approx(inv_sqrt2));
}

TEST_CASE("norm deviations inside the tolerance are renormalized") {
  const auto dir = fresh_dir();
  const auto path = dir / "slightly_off.csv";
  spherecode::write_text_file(path, "1.0005,0\n0,0.9999\n");
  const auto read = spherecode::read_configuration_csv(path);
  CHECK(read.matrix()(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(read.matrix()(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  // A deviation past the tolerance still throws.
  const auto bad = dir / "too_far.csv";
  spherecode::write_text_file(bad, "1.002,0\n");
  CHECK_THROWS_AS(spherecode::read_configuration_csv(bad),
                  spherecode::ParseError);
}

TEST_CASE("malformed configuration files raise ParseError") {
  const auto dir = fresh_dir();

  const auto non_numeric = dir / "non_numeric.csv";
  spherecode::write_text_file(non_numeric, "1,0\nfoo,bar\n");
  CHECK_THROWS_WITH_AS(spherecode::read_configuration_csv(non_numeric),
                       doctest::Contains("cannot parse"),
                       spherecode::ParseError);

  const auto ragged = dir / "ragged.csv";
  spherecode::write_text_file(ragged, "1,0\n0,1,0\n");
  CHECK_THROWS_WITH_AS(spherecode::read_configuration_csv(ragged),
                       doctest::Contains("columns"), spherecode::ParseError);

  const auto trailing = dir / "trailing.csv";
  spherecode::write_text_file(trailing, "1.0x,0\n");
  CHECK_THROWS_AS(spherecode::read_configuration_csv(trailing),
                  spherecode::ParseError);

  const auto empty = dir / "empty.csv";
  spherecode::write_text_file(empty, "");
  CHECK_THROWS_WITH_AS(spherecode::read_configuration_csv(empty),
                       doctest::Contains("no data rows"),
                       spherecode::ParseError);

  CHECK_THROWS_WITH_AS(
      spherecode::read_configuration_csv(dir / "does_not_exist.csv"),
      doctest::Contains("cannot open"), spherecode::ParseError);
}

TEST_CASE("blank lines and CRLF endings are tolerated") {
  const auto dir = fresh_dir();
  const auto path = dir / "crlf.csv";
  spherecode::write_text_file(path, "1,0\r\n\r\n0,1\r\n");
  const auto read = spherecode::read_configuration_csv(path);
  CHECK(read.count() == 2);
  CHECK(read.matrix()(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("feature csv writes the documented header and round-trips") {
  const auto dir = fresh_dir();
  const auto path = dir / "features.csv";
  Eigen::MatrixXd features(2, 4);
  features.col(0) << 0.25, -1.5;
  features.col(1) << 1.0 / 3.0, 0.0;
  features.col(2) << -0.125, 2.0;
  features.col(3) << 0.1, 0.2;
  const spherecode::LabeledFeatureSet set(3, {0, 1, 2, 0}, features);
  spherecode::write_features_csv(path, set);

  const std::string text = slurp(path);
  CHECK(text.rfind("label,f0,f1\n", 0) == 0);

  const auto read = spherecode::read_features_csv(path);
  CHECK(read.num_classes() == 3);
  REQUIRE(read.size() == 4);
  CHECK(read.labels() == std::vector<int>{0, 1, 2, 0});
  CHECK((read.matrix() - features).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("explicit class counts are honored and validated") {
  const auto dir = fresh_dir();
  const auto path = dir / "features.csv";
  Eigen::MatrixXd features(2, 4);
  features.setOnes();
  const spherecode::LabeledFeatureSet set(3, {0, 1, 2, 0}, features);
  spherecode::write_features_csv(path, set);

  const auto exact = spherecode::read_features_csv(path, 3);
  CHECK(exact.num_classes() == 3);
  // Too few classes: label 2 falls outside [0, 2).
  CHECK_THROWS_AS(spherecode::read_features_csv(path, 2),
                  spherecode::LabelOutOfRange);
  // Too many classes: classes 3 and 4 own no samples.
  CHECK_THROWS_AS(spherecode::read_features_csv(path, 5),
                  spherecode::InvalidConfig);
}

TEST_CASE("feature csv rejects bad headers, labels, and shapes") {
  const auto dir = fresh_dir();

  const auto bad_header = dir / "bad_header.csv";
  spherecode::write_text_file(bad_header, "x,f0\n0,1\n");
  CHECK_THROWS_WITH_AS(spherecode::read_features_csv(bad_header),
                       doctest::Contains("label"), spherecode::ParseError);

  const auto bad_column = dir / "bad_column.csv";
  spherecode::write_text_file(bad_column, "label,f0,f2\n0,1,2\n");
  CHECK_THROWS_WITH_AS(spherecode::read_features_csv(bad_column),
                       doctest::Contains("f1"), spherecode::ParseError);

  const auto negative = dir / "negative_label.csv";
  spherecode::write_text_file(negative, "label,f0\n-1,0.5\n");
  CHECK_THROWS_WITH_AS(spherecode::read_features_csv(negative),
                       doctest::Contains("negative label"),
                       spherecode::ParseError);

  const auto ragged = dir / "ragged.csv";
  spherecode::write_text_file(ragged, "label,f0,f1\n0,1\n");
  CHECK_THROWS_WITH_AS(spherecode::read_features_csv(ragged),
                       doctest::Contains("fields"), spherecode::ParseError);

  const auto no_rows = dir / "no_rows.csv";
  spherecode::write_text_file(no_rows, "label,f0\n");
  CHECK_THROWS_WITH_AS(spherecode::read_features_csv(no_rows),
                       doctest::Contains("no data rows"),
                       spherecode::ParseError);
}

TEST_CASE("solve reports serialize to schema-valid json with exact fields") {
  spherecode::SolverConfig config;
  config.dim = 2;
  config.count = 3;
  config.restarts = 2;
  config.seed = 11;
  const auto report = spherecode::solve_softmax_code(config);
  const std::string text = spherecode::solve_report_to_json(report);
  check_valid("SolveReport", text);

  const auto doc = nlohmann::json::parse(text);
  CHECK(doc.at("objective_kind").get<std::string>() == "one-vs-rest");
  CHECK(doc.at("achieved").get<double>() == report.achieved);
  CHECK(doc.at("dim").get<int>() == 2);
  CHECK(doc.at("count").get<int>() == 3);
  CHECK(doc.at("seed").get<long>() == 11);
  REQUIRE(doc.at("per_restart").size() == report.per_restart.size());
  CHECK(doc.at("per_restart")[0].at("achieved").get<double>() ==
        report.per_restart[0].achieved);
  REQUIRE(doc.at("trace").size() == report.trace.size());
  CHECK(doc.at("trace")[0].at("tau").get<double>() == report.trace[0].tau);
}

TEST_CASE("gnc reports serialize with and without a reference") {
  const auto config = spherecode::uniform_circle(5);
  const auto features = spherecode::LabeledFeatureSet::aligned(config, 2);

  const auto without =
      spherecode::compute_gnc_report(config.matrix(), features);
  const std::string text_without = spherecode::gnc_report_to_json(without);
  check_valid("GncReport", text_without);
  const auto doc_without = nlohmann::json::parse(text_without);
  CHECK(doc_without.at("gnc2_reference").is_null());
  CHECK(doc_without.at("gnc1").get<double>() == without.gnc1);
  CHECK(doc_without.at("class_mean_norms").size() == 5);
  CHECK(doc_without.at("classifier_norms").size() == 5);

  const auto with =
      spherecode::compute_gnc_report(config.matrix(), features, 0.25);
  const std::string text_with = spherecode::gnc_report_to_json(with);
  check_valid("GncReport", text_with);
  const auto doc_with = nlohmann::json::parse(text_with);
  CHECK(doc_with.at("gnc2_reference").get<double>() == 0.25);
}

TEST_CASE("margin bounds serialize to schema-valid json") {
  const auto bounds = spherecode::margin_bounds(3, 20);
  const std::string text = spherecode::margin_bounds_to_json(bounds);
  check_valid("BoundsReport", text);
  const auto doc = nlohmann::json::parse(text);
  CHECK(doc.at("dim").get<int>() == 3);
  CHECK(doc.at("count").get<int>() == 20);
  CHECK(doc.at("lower").get<double>() == bounds.lower);
  CHECK(doc.at("upper").get<double>() == bounds.upper);
  CHECK(doc.at("applicable").get<bool>() == bounds.applicable);
}

TEST_CASE("scan rows serialize to json and csv with optional rho") {
  std::vector<spherecode::DimensionScanRow> rows =
      spherecode::scan_dimensions(40, {2, 3});
  REQUIRE(rows.size() == 2);
  rows[0].solver_rho = 0.125;  // one row with, one row without

  const std::string json_text = spherecode::scan_rows_to_json(rows);
  check_valid("ScanReport", json_text);
  const auto doc = nlohmann::json::parse(json_text);
  CHECK(doc[0].at("rho").get<double>() == 0.125);
  CHECK(doc[1].at("rho").is_null());
  CHECK(doc[0].at("d").get<int>() == 2);

  const std::string csv = spherecode::scan_rows_to_csv(rows);
  REQUIRE(csv.rfind("d,lower,upper,rho\n", 0) == 0);
  std::vector<std::string> lines;
  std::stringstream stream(csv);
  std::string line;
  while (std::getline(stream, line)) {
    lines.push_back(line);
  }
  REQUIRE(lines.size() == 3);
  CHECK(lines[1].rfind("2,", 0) == 0);
  CHECK(lines[1].find("0.125") != std::string::npos);
  // The missing rho leaves the final field empty.
  CHECK(lines[2].back() == ',');
}

TEST_CASE("hardmax sweep and training trace csv headers match the docs") {
  std::vector<spherecode::HardmaxSweepRow> sweep(1);
  sweep[0].tau = 0.5;
  sweep[0].ce_max_cosine = 0.25;
  sweep[0].hardmax_reference = 0.125;
  const std::string sweep_csv = spherecode::hardmax_rows_to_csv(sweep);
  CHECK(sweep_csv.rfind("tau,ce_max_cosine,hardmax_reference\n", 0) == 0);
  CHECK(sweep_csv.find("0.5,0.25,0.125") != std::string::npos);

  std::vector<spherecode::UfmTraceRow> trace(2);
  trace[0] = {0, 3.5, 1.25, 0.5};
  trace[1] = {10, 3.25, 1.0, 0.25};
  const std::string trace_csv = spherecode::ufm_trace_to_csv(trace);
  CHECK(trace_csv.rfind("iter,loss,gnc1,gnc3\n", 0) == 0);
  CHECK(trace_csv.find("0,3.5,1.25,0.5") != std::string::npos);
  CHECK(trace_csv.find("10,3.25,1,0.25") != std::string::npos);
}

TEST_CASE("schema validator flags documents that break the contract") {
  const nlohmann::json schema = load_schema();
  // Missing required field.
  nlohmann::json bad_bounds = {
      {"dim", 3}, {"count", 20}, {"lower", 0.1}, {"upper", 0.2}};
  CHECK(!spherecode::testing::schema_violations(schema, "BoundsReport",
                                                bad_bounds)
             .empty());
  // Unexpected extra field.
  nlohmann::json extra = {{"dim", 3},       {"count", 20},
                          {"lower", 0.1},   {"upper", 0.2},
                          {"applicable", true}, {"surprise", 1}};
  CHECK(!spherecode::testing::schema_violations(schema, "BoundsReport", extra)
             .empty());
  // Wrong type.
  nlohmann::json wrong_type = {{"dim", "three"}, {"count", 20},
                               {"lower", 0.1},   {"upper", 0.2},
                               {"applicable", true}};
  CHECK(!spherecode::testing::schema_violations(schema, "BoundsReport",
                                                wrong_type)
             .empty());
}

TEST_CASE("write_text_file stores bytes verbatim") {
  const auto dir = fresh_dir();
  const auto path = dir / "note.txt";
  const std::string payload = "alpha\nbeta,gamma\n";
  spherecode::write_text_file(path, payload);
  CHECK(slurp(path) == payload);
}

}  // TEST_SUITE
