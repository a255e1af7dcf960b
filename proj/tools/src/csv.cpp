#include "uq/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <system_error>

#include "ensuq/error.hpp"

namespace uq {

using ensuq::Errc;
using ensuq::Error;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool is_missing(std::string_view field) {
  return field.empty() || field == "?" || field == "NA" || field == "nan" || field == "NaN";
}

bool parse_real(std::string_view field, double& out) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  return res.ec == std::errc() && res.ptr == field.data() + field.size() && std::isfinite(out);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, "cannot open " + path.string());
  return in;
}

std::vector<std::string> read_header(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::EmptyAfterFiltering, path.string() + " is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  auto header = split_csv_line(line);
  for (auto& h : header) h = std::string(trim(h));
  return header;
}

std::string location(std::size_t line, const std::string& column) {
  return "line " + std::to_string(line) + ", column '" + column + "'";
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r' && c != '\n') {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

ensuq::Dataset ingest_csv(const std::filesystem::path& path, const std::string& label_column,
                          IngestReport* report) {
  auto in = open_input(path);
  const auto header = read_header(in, path);
  std::size_t label_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == label_column) label_idx = j;
  }
  if (label_idx == header.size()) {
    throw Error(Errc::MissingLabelColumn, "no column '" + label_column + "' in " + path.string());
  }
  if (header.size() < 2) throw Error(Errc::EmptyAfterFiltering, "no feature columns");

  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_idx) feature_names.push_back(header[j]);
  }

  std::vector<double> features;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::map<std::string, int> class_ids;
  std::vector<double> row(feature_names.size());

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::NonNumericFeature, "line " + std::to_string(line_no) + " has " +
                                               std::to_string(fields.size()) + " fields, expected " +
                                               std::to_string(header.size()));
    }
    bool missing = false;
    std::size_t f = 0;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto field = trim(fields[j]);
      if (is_missing(field)) {
        missing = true;
        continue;
      }
      if (j == label_idx) continue;
      if (!parse_real(field, row[f])) {
        throw Error(Errc::NonNumericFeature,
                    location(line_no, header[j]) + ": '" + std::string(field) + "' is not a number");
      }
      ++f;
    }
    if (missing) {
      if (report) report->skipped_lines.push_back(line_no);
      continue;
    }
    const std::string label(trim(fields[label_idx]));
    auto [it, inserted] = class_ids.try_emplace(label, static_cast<int>(class_names.size()));
    if (inserted) class_names.push_back(label);
    labels.push_back(it->second);
    features.insert(features.end(), row.begin(), row.end());
  }
  if (labels.empty()) {
    throw Error(Errc::EmptyAfterFiltering, "no usable rows in " + path.string());
  }
  const std::size_t classes = class_names.size();
  const std::size_t dims = feature_names.size();
  return ensuq::Dataset(std::move(features), dims, std::move(labels), classes,
                        std::move(feature_names), std::move(class_names));
}

std::vector<std::vector<double>> read_query_rows(const std::filesystem::path& path,
                                                 const std::vector<std::string>& feature_names,
                                                 std::size_t dims,
                                                 const std::string& ignore_column) {
  auto in = open_input(path);
  const auto header = read_header(in, path);

  std::vector<std::size_t> columns;
  if (!feature_names.empty()) {
    for (const auto& name : feature_names) {
      std::size_t found = header.size();
      for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == name) found = j;
      }
      if (found == header.size()) {
        throw Error(Errc::FeatureDimensionMismatch, "query file lacks feature column '" + name + "'");
      }
      columns.push_back(found);
    }
  } else {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] != ignore_column) columns.push_back(j);
    }
  }
  if (columns.size() != dims) {
    throw Error(Errc::FeatureDimensionMismatch, "query file has " + std::to_string(columns.size()) +
                                                    " feature columns, model expects " +
                                                    std::to_string(dims));
  }

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::NonNumericFeature, "line " + std::to_string(line_no) + " has " +
                                               std::to_string(fields.size()) + " fields, expected " +
                                               std::to_string(header.size()));
    }
    std::vector<double> row(dims);
    for (std::size_t f = 0; f < dims; ++f) {
      const auto field = trim(fields[columns[f]]);
      if (!parse_real(field, row[f])) {
        throw Error(Errc::NonNumericFeature, location(line_no, header[columns[f]]) + ": '" +
                                                 std::string(field) + "' is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_real(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_prob_vector(const ensuq::ProbVector& p) {
  std::string out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) out += ',';
    out += format_real(p[k]);
  }
  return out;
}

ensuq::ProbVector parse_prob_vector(std::string_view line) {
  std::vector<double> values;
  for (const auto& field : split_csv_line(line)) {
    double v = 0.0;
    if (!parse_real(trim(field), v)) {
      throw Error(Errc::NonNumericFeature, "'" + field + "' is not a probability");
    }
    values.push_back(v);
  }
  return ensuq::validate_prob_vector(values);
}

void write_curves_csv(std::ostream& out, std::span<const ensuq::RejectionCurve> curves) {
  out << "method,measure,rejection_rate,mean_accuracy,std_accuracy,runs\n";
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.rejection_rates.size(); ++i) {
      out << ensuq::to_string(c.method) << ',' << ensuq::to_string(c.measure) << ','
          << format_real(c.rejection_rates[i]) << ',' << format_real(c.mean_accuracy[i]) << ','
          << format_real(c.std_accuracy[i]) << ',' << c.runs << '\n';
    }
  }
}

void write_scores_csv(std::ostream& out, std::span<const ensuq::InstanceRecord> records) {
  out << "row,true_class,predicted_class";
  for (auto method : ensuq::kAllMethods) {
    for (auto measure : ensuq::kAllMeasures) {
      out << ',' << ensuq::to_string(method) << '_' << ensuq::to_string(measure);
    }
  }
  out << '\n';
  for (const auto& r : records) {
    out << r.row << ',' << r.truth << ',' << r.predicted;
    for (double s : r.scores) out << ',' << format_real(s);
    out << '\n';
  }
}

}  // namespace uq
