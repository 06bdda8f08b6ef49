#include "gridsec/matpower.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "gridsec/errors.hpp"

namespace gridsec {

namespace {

struct Row {
  std::vector<double> values;
  int line_number = 0;
};

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('%');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool parse_numbers(const std::string& text, std::vector<double>& out) {
  out.clear();
  std::string cleaned = text;
  std::replace(cleaned.begin(), cleaned.end(), ';', ' ');
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream stream(cleaned);
  std::string token;
  while (stream >> token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') return false;
    out.push_back(v);
  }
  return true;
}

/// Collects the numeric rows of `mpc.<name> = [ ... ];`.
std::vector<Row> read_table(const std::vector<std::string>& lines, const std::string& name) {
  const std::string opener = "mpc." + name;
  std::vector<Row> rows;
  bool in_table = false;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string body = strip_comment(lines[i]);
    const int line_number = static_cast<int>(i) + 1;
    if (!in_table) {
      const auto pos = body.find(opener);
      if (pos == std::string::npos) continue;
      const auto bracket = body.find('[', pos);
      if (bracket == std::string::npos)
        throw ParseError("expected '[' after " + opener, line_number);
      in_table = true;
      body = body.substr(bracket + 1);
    }
    bool last = false;
    const auto closing = body.find(']');
    if (closing != std::string::npos) {
      body = body.substr(0, closing);
      last = true;
    }
    std::vector<double> values;
    if (!parse_numbers(body, values))
      throw ParseError("non-numeric field in " + opener + " table", line_number);
    if (!values.empty()) rows.push_back(Row{std::move(values), line_number});
    if (last) return rows;
  }
  if (in_table) throw ParseError("unterminated " + opener + " table");
  throw ParseError("missing " + opener + " table");
}

}  // namespace

MatpowerCase import_matpower(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) lines.push_back(line);
  }

  const std::vector<Row> bus_rows = read_table(lines, "bus");
  const std::vector<Row> branch_rows = read_table(lines, "branch");
  if (bus_rows.empty()) throw ParseError("empty mpc.bus table");
  if (branch_rows.empty()) throw ParseError("empty mpc.branch table");

  std::vector<int> original_ids;
  for (const Row& row : bus_rows) {
    const double id = row.values.at(0);
    if (id <= 0 || id != std::floor(id))
      throw ParseError("bus id must be a positive integer", row.line_number);
    original_ids.push_back(static_cast<int>(id));
  }
  std::sort(original_ids.begin(), original_ids.end());
  std::map<int, int> renumber;
  for (size_t i = 0; i < original_ids.size(); ++i) {
    if (!renumber.emplace(original_ids[i], static_cast<int>(i) + 1).second)
      throw ParseError("duplicate bus id " + std::to_string(original_ids[i]));
  }

  MatpowerCase out;
  out.original_bus_ids = original_ids;
  out.topology.buses.resize(original_ids.size());
  for (size_t i = 0; i < original_ids.size(); ++i)
    out.topology.buses[i] = static_cast<int>(i) + 1;

  for (const Row& row : branch_rows) {
    if (row.values.size() < 4)
      throw ParseError("branch row needs at least fbus tbus r x", row.line_number);
    const double fbus = row.values[0];
    const double tbus = row.values[1];
    const double x = row.values[3];
    if (fbus != std::floor(fbus) || tbus != std::floor(tbus))
      throw ParseError("branch endpoints must be integers", row.line_number);
    auto from_it = renumber.find(static_cast<int>(fbus));
    auto to_it = renumber.find(static_cast<int>(tbus));
    if (from_it == renumber.end())
      throw ParseError("branch references unknown bus " +
                           std::to_string(static_cast<int>(fbus)),
                       row.line_number);
    if (to_it == renumber.end())
      throw ParseError("branch references unknown bus " +
                           std::to_string(static_cast<int>(tbus)),
                       row.line_number);
    if (x == 0.0) throw ParseError("zero reactance on branch", row.line_number);
    Line line;
    line.from = from_it->second;
    line.to = to_it->second;
    line.susceptance = 1.0 / std::abs(x);
    out.topology.lines.push_back(line);
  }

  out.topology.validate();
  return out;
}

}  // namespace gridsec
