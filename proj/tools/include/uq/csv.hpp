#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ensuq/dataset.hpp"
#include "ensuq/experiment.hpp"
#include "ensuq/types.hpp"

namespace uq {

/// Rows dropped during ingestion because a field was missing
/// (empty, "?", "NA" or "nan"). Numbers are 1-based file lines.
struct IngestReport {
  std::vector<std::size_t> skipped_lines;
};

/// Reads a headered CSV with numeric features and one label column.
/// Labels map to 0..K-1 in order of first appearance.
/// Throws ensuq::Error{FileNotFound | MissingLabelColumn | NonNumericFeature |
/// EmptyAfterFiltering}.
ensuq::Dataset ingest_csv(const std::filesystem::path& path, const std::string& label_column,
                          IngestReport* report = nullptr);

/// Feature rows for scoring. Columns are matched by name when names are
/// given; otherwise every column except `ignore_column` is used in order.
/// Any unparseable or missing field is an error naming the line.
std::vector<std::vector<double>> read_query_rows(const std::filesystem::path& path,
                                                 const std::vector<std::string>& feature_names,
                                                 std::size_t dims,
                                                 const std::string& ignore_column);

std::vector<std::string> split_csv_line(std::string_view line);

/// Shortest-round-trip-safe text form: 17 significant digits, '.' decimal point.
std::string format_real(double x);

std::string format_prob_vector(const ensuq::ProbVector& p);
ensuq::ProbVector parse_prob_vector(std::string_view line);

/// method,measure,rejection_rate,mean_accuracy,std_accuracy,runs
void write_curves_csv(std::ostream& out, std::span<const ensuq::RejectionCurve> curves);

/// row,true_class,predicted_class,<Method>_<Measure> x 9
void write_scores_csv(std::ostream& out, std::span<const ensuq::InstanceRecord> records);

}  // namespace uq
