#include "dirf/cli.hpp"
#include "dirf/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace dirf::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, int line_no) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line_no) + ": '" + s + "' is not a finite number");
  }
  return v;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_fields(line, line_no);
    if (!have_header) {
      for (auto& f : fields) f = trim(f);
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_number(f, line_no));
    table.rows.push_back(std::move(row));
    table.lines.push_back(line_no);
  }
  if (!have_header) throw ParseError("empty file: a header row is required");
  if (table.rows.empty()) throw ParseError("no data rows after the header");
  return table;
}

sim::TwoGroupSample parse_grouped(const CsvTable& table) {
  if (table.header.size() != 2 || table.header[0] != "group" || table.header[1] != "value") {
    throw ParseError("line 1: grouped data need the header 'group,value'");
  }
  sim::TwoGroupSample s;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double g = table.rows[i][0];
    if (g == 1.0) {
      s.group1.push_back(table.rows[i][1]);
    } else if (g == 2.0) {
      s.group2.push_back(table.rows[i][1]);
    } else {
      throw ParseError("line " + std::to_string(table.lines[i]) +
                       ": group label must be 1 or 2 (two-group model)");
    }
  }
  if (s.group1.empty() || s.group2.empty()) throw ParseError("both groups 1 and 2 need observations");
  return s;
}

RegressionData parse_regression(const CsvTable& table, bool intercept) {
  if (table.header.empty() || table.header[0] != "y") {
    throw ParseError("line 1: regression data need 'y' as the first column");
  }
  const std::size_t predictors = table.header.size() - 1;
  const std::size_t p = predictors + (intercept ? 1 : 0);
  if (p == 0) throw ParseError("regression data have no predictors (use --intercept)");
  std::vector<double> y;
  Matrix X(table.rows.size(), p);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    y.push_back(table.rows[i][0]);
    std::size_t col = 0;
    if (intercept) X(i, col++) = 1.0;
    for (std::size_t j = 1; j < table.rows[i].size(); ++j) X(i, col++) = table.rows[i][j];
  }
  return RegressionData(std::move(y), std::move(X));
}

MvnData parse_matrix(const CsvTable& table) {
  Matrix Y(table.rows.size(), table.header.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 0; j < table.header.size(); ++j) Y(i, j) = table.rows[i][j];
  }
  return MvnData(std::move(Y));
}

LinearConstraint parse_linear_hypothesis(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("hypothesis file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("A") || !doc.contains("psi")) {
    throw ParseError("hypothesis file: expected an object with 'A' and 'psi'");
  }
  try {
    const auto rows = doc.at("A").get<std::vector<std::vector<double>>>();
    const auto psi = doc.at("psi").get<std::vector<double>>();
    if (rows.empty() || rows[0].empty()) throw ParseError("hypothesis file: 'A' is empty");
    Matrix A(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size()) throw ParseError("hypothesis file: 'A' rows differ in length");
      for (std::size_t j = 0; j < rows[i].size(); ++j) A(i, j) = rows[i][j];
    }
    return LinearConstraint(std::move(A), psi);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("hypothesis file: ") + e.what());
  }
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  for (const auto& f : split_fields(text, 0)) {
    try {
      out.push_back(parse_number(f, 0));
    } catch (const ParseError&) {
      throw ParseError("--psi: '" + trim(f) + "' is not a finite number");
    }
  }
  return out;
}

}  // namespace dirf::cli
