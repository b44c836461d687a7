// Copyright 2026 The fairselect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fairselect/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fairselect/model.hpp"

namespace fairselect::io {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void parse_error_at(const std::string& text, std::size_t byte,
                                 const std::string& what) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::ostringstream os;
  os << "parse error at line " << line << ", column " << column << ": " << what;
  throw ParseError(os.str(), line, column);
}

const ordered_json& require_field(const ordered_json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError("missing required field '" + key + "'", key);
  }
  return *it;
}

VectorXd require_number_array(const ordered_json& j, const std::string& key) {
  const ordered_json& arr = require_field(j, key);
  if (!arr.is_array() || arr.empty()) {
    throw SchemaError("field '" + key + "' must be a non-empty array", key);
  }
  VectorXd out(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      std::ostringstream os;
      os << key << "[" << i << "]";
      throw SchemaError("field '" + os.str() + "' must be a number", os.str());
    }
    out[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return out;
}

double require_number(const ordered_json& j, const std::string& key) {
  const ordered_json& v = require_field(j, key);
  if (!v.is_number()) {
    throw SchemaError("field '" + key + "' must be a number", key);
  }
  return v.get<double>();
}

ordered_json to_json_array(const VectorXd& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

// %.12g with the C locale: stable across platforms for the curve files.
std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double round12(double x) { return std::strtod(fmt12(x).c_str(), nullptr); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim spaces
    std::size_t b = cell.find_first_not_of(" \t\r");
    std::size_t e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // row-major
};

Csv read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Csv csv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (csv.header.empty()) {
      csv.header = cells;
      continue;
    }
    if (cells.size() != csv.header.size()) {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                           " has " + std::to_string(cells.size()) +
                           " cells, header has " +
                           std::to_string(csv.header.size()),
                       line_no, 1);
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char* end = nullptr;
      row[c] = std::strtod(cells[c].c_str(), &end);
      if (end == cells[c].c_str() || *end != '\0') {
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                             ", column " + std::to_string(c + 1) +
                             ": not a number: '" + cells[c] + "'",
                         line_no, static_cast<int>(c + 1));
      }
    }
    csv.rows.push_back(std::move(row));
  }
  if (csv.header.empty()) throw Error(path.string() + ": empty file");
  return csv;
}

}  // namespace

PopulationModel load_model(std::istream& in, const std::string& source_name) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error_at(text, e.byte, source_name + ": " + e.what());
  }
  if (!j.is_object()) throw SchemaError("top level must be an object", "");
  const ordered_json& version = require_field(j, "format_version");
  if (!version.is_string() || version.get<std::string>() != "v1") {
    throw SchemaError("format_version must be the string \"v1\"",
                      "format_version");
  }
  int digits = ScoreSupport::kDefaultDigits;
  if (j.contains("digits")) {
    if (!j["digits"].is_number_integer()) {
      throw SchemaError("field 'digits' must be an integer", "digits");
    }
    digits = j["digits"].get<int>();
  }
  VectorXd support_values = require_number_array(j, "support");
  double prior_a0 = require_number(j, "prior_a0");
  VectorXd qual = require_number_array(j, "qual_rate");
  if (qual.size() != 2) {
    throw SchemaError("qual_rate must have exactly two entries", "qual_rate");
  }
  const ordered_json& pmfs = require_field(j, "score_pmf");
  if (!pmfs.is_object()) {
    throw SchemaError("score_pmf must be an object", "score_pmf");
  }
  std::array<std::array<VectorXd, 2>, 2> score_pmf;
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) {
      std::string key =
          "a" + std::to_string(a) + "_y" + std::to_string(y);
      try {
        score_pmf[a][y] = require_number_array(pmfs, key);
      } catch (const SchemaError& e) {
        throw SchemaError(e.what(), "score_pmf." + e.field);
      }
    }
  }
  return build_model(ScoreSupport(support_values, digits), prior_a0,
                     {qual[0], qual[1]}, score_pmf);
}

PopulationModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return load_model(in, path.string());
}

std::string emit_model(const PopulationModel& model,
                       const ModelMetadata& metadata) {
  ordered_json j;
  j["format_version"] = "v1";
  j["digits"] = model.support.digits();
  j["support"] = to_json_array(model.support.values());
  j["prior_a0"] = model.prior_a0;
  j["qual_rate"] = {model.qual_rate[0], model.qual_rate[1]};
  ordered_json pmfs;
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) {
      pmfs["a" + std::to_string(a) + "_y" + std::to_string(y)] =
          to_json_array(model.pmf(a, y));
    }
  }
  j["score_pmf"] = pmfs;
  if (!metadata.source.empty() || !metadata.group_labels.empty()) {
    ordered_json md;
    if (!metadata.source.empty()) md["source"] = metadata.source;
    if (!metadata.group_labels.empty()) md["group_labels"] = metadata.group_labels;
    j["metadata"] = md;
  }
  return j.dump(2) + "\n";
}

void save_model(const PopulationModel& model, const std::filesystem::path& path,
                const ModelMetadata& metadata) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << emit_model(model, metadata);
}

const GroupColumns& GroupScoreTable::group(const std::string& label) const {
  for (const GroupColumns& g : groups) {
    if (g.label == label) return g;
  }
  throw InconsistentSupport("group '" + label + "' not present in the table");
}

GroupScoreTable load_group_tables(const std::filesystem::path& cdf_csv,
                                  const std::filesystem::path& perf_csv,
                                  const GroupTableOptions& options) {
  Csv cdf = read_csv(cdf_csv);
  Csv perf = read_csv(perf_csv);
  if (cdf.header != perf.header) {
    throw InconsistentSupport("cdf and performance tables have different headers");
  }
  if (cdf.header.size() < 2) {
    throw Error("group tables need a score column plus at least one group");
  }
  if (cdf.rows.size() != perf.rows.size()) {
    throw InconsistentSupport("cdf and performance tables have different lengths");
  }
  const std::size_t rows = cdf.rows.size();
  const std::size_t groups = cdf.header.size() - 1;
  const double scale = options.percent ? 0.01 : 1.0;

  GroupScoreTable table;
  table.raw_scores.resize(rows);
  table.support.resize(rows);
  double span = options.raw_max - options.raw_min;
  if (!(span > 0)) throw Error("raw score range must have raw_max > raw_min");
  for (std::size_t r = 0; r < rows; ++r) {
    if (cdf.rows[r][0] != perf.rows[r][0]) {
      throw InconsistentSupport(
          "score grids differ between cdf and performance tables at row " +
          std::to_string(r + 1));
    }
    table.raw_scores[static_cast<Eigen::Index>(r)] = cdf.rows[r][0];
    table.support[static_cast<Eigen::Index>(r)] =
        (cdf.rows[r][0] - options.raw_min) / span;
  }
  for (std::size_t g = 0; g < groups; ++g) {
    GroupColumns col;
    col.label = cdf.header[g + 1];
    col.cdf.resize(rows);
    col.perf.resize(rows);
    double prev = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      double c = cdf.rows[r][g + 1] * scale;
      double p = perf.rows[r][g + 1] * scale;
      if (c < prev - 1e-12) {
        throw NonMonotoneCdf("cdf for group '" + col.label +
                             "' decreases at row " + std::to_string(r + 1));
      }
      if (c < -1e-12 || c > 1.0 + 1e-6) {
        throw OutOfRangeProbability("cdf for group '" + col.label +
                                    "' outside [0,1] at row " +
                                    std::to_string(r + 1));
      }
      if (p < -1e-12 || p > 1.0 + 1e-6) {
        throw OutOfRangeProbability("performance for group '" + col.label +
                                    "' outside [0,1] at row " +
                                    std::to_string(r + 1));
      }
      col.cdf[static_cast<Eigen::Index>(r)] = std::clamp(c, 0.0, 1.0);
      col.perf[static_cast<Eigen::Index>(r)] = std::clamp(p, 0.0, 1.0);
      prev = c;
    }
    double final_cdf = col.cdf[static_cast<Eigen::Index>(rows - 1)];
    if (std::abs(final_cdf - 1.0) > 1e-4) {
      throw NonMonotoneCdf("cdf for group '" + col.label + "' ends at " +
                           std::to_string(final_cdf) + ", expected 1");
    }
    table.groups.push_back(std::move(col));
  }
  (void)options.digits;
  return table;
}

PopulationModel from_group_tables(const GroupScoreTable& table,
                                  const GroupMergeSpec& spec) {
  if (spec.group0.empty() || spec.group1.empty()) {
    throw Error("both sides of the merge need at least one group label");
  }
  if (spec.group0.size() != spec.weights0.size() ||
      spec.group1.size() != spec.weights1.size()) {
    throw Error("merge weights must match group label lists");
  }
  const Eigen::Index rows = table.support.size();

  auto side_pmfs = [&](const std::vector<std::string>& labels,
                       const std::vector<double>& weights, VectorXd& f_side,
                       VectorXd& perf_side) {
    double wsum = 0.0;
    for (double w : weights) {
      if (w < 0) throw Error("merge weights must be nonnegative");
      wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9) {
      throw Error("merge weights must sum to 1");
    }
    f_side = VectorXd::Zero(rows);
    VectorXd mass_y1 = VectorXd::Zero(rows);
    for (std::size_t g = 0; g < labels.size(); ++g) {
      const GroupColumns& col = table.group(labels[g]);
      VectorXd pmf(rows);
      double prev = 0.0;
      for (Eigen::Index r = 0; r < rows; ++r) {
        pmf[r] = col.cdf[r] - prev;
        prev = col.cdf[r];
        if (pmf[r] < 0) pmf[r] = 0;  // clamped round-off
      }
      double total = pmf.sum();
      if (total <= 0) throw NonMonotoneCdf("empty pmf for group " + labels[g]);
      pmf /= total;
      f_side += weights[g] * pmf;
      mass_y1 += weights[g] * pmf.cwiseProduct(col.perf);
    }
    // Mass-weighted performance of the merged side.
    perf_side = VectorXd::Zero(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      perf_side[r] = f_side[r] > 0 ? mass_y1[r] / f_side[r] : 0.0;
    }
  };

  VectorXd f0, perf0, f1, perf1;
  side_pmfs(spec.group0, spec.weights0, f0, perf0);
  side_pmfs(spec.group1, spec.weights1, f1, perf1);

  auto bayes_split = [&](const VectorXd& f, const VectorXd& perf, double& qual,
                         VectorXd& pmf_y1, VectorXd& pmf_y0) {
    VectorXd m1 = f.cwiseProduct(perf);
    qual = m1.sum();
    VectorXd m0 = f - m1;
    pmf_y1 = qual > 0 ? VectorXd(m1 / qual)
                      : VectorXd(VectorXd::Constant(rows, 1.0 / rows));
    double rest = m0.sum();
    pmf_y0 = rest > 0 ? VectorXd(m0 / rest)
                      : VectorXd(VectorXd::Constant(rows, 1.0 / rows));
  };

  std::array<std::array<VectorXd, 2>, 2> pmfs;
  std::array<double, 2> qual{};
  bayes_split(f0, perf0, qual[0], pmfs[0][1], pmfs[0][0]);
  bayes_split(f1, perf1, qual[1], pmfs[1][1], pmfs[1][0]);

  return build_model(ScoreSupport(table.support, ScoreSupport::kDefaultDigits),
                     spec.prior_a0, qual, pmfs);
}

std::string emit_curve(const mc::TradeoffCurve& curve, CurveFormat format) {
  if (format == CurveFormat::kCsv) {
    std::string out =
        "epsilon,gamma,gamma_ci,theta,theta_ci,m,notion,exact_flag\n";
    for (const mc::TradeoffPoint& p : curve.points) {
      out += fmt12(p.epsilon);
      out += ',';
      out += fmt12(p.gamma);
      out += ',';
      out += fmt12(p.gamma_ci);
      out += ',';
      out += fmt12(p.theta);
      out += ',';
      out += fmt12(p.theta_ci);
      out += ',';
      out += std::to_string(curve.m);
      out += ',';
      out += to_string(curve.notion);
      out += ',';
      out += p.exact ? "true" : "false";
      out += '\n';
    }
    return out;
  }
  ordered_json arr = ordered_json::array();
  for (const mc::TradeoffPoint& p : curve.points) {
    ordered_json row;
    row["epsilon"] = round12(p.epsilon);
    row["gamma"] = round12(p.gamma);
    row["gamma_ci"] = round12(p.gamma_ci);
    row["theta"] = round12(p.theta);
    row["theta_ci"] = round12(p.theta_ci);
    row["m"] = curve.m;
    row["notion"] = to_string(curve.notion);
    row["exact_flag"] = p.exact;
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

}  // namespace fairselect::io
