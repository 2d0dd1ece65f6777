#include "hrgm/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hrgm/errors.hpp"
#include "hrgm/version.hpp"

namespace hrgm::io {

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    std::ostringstream os;
    os << "missing field \"" << key << "\"";
    fail(errk::BadInput, os.str());
  }
  return j.at(key);
}

int need_int(const json& j, const char* key) {
  const json& v = need(j, key);
  if (!v.is_number_integer()) {
    std::ostringstream os;
    os << "field \"" << key << "\" must be an integer";
    fail(errk::BadInput, os.str());
  }
  return v.get<int>();
}

std::vector<int> vertex_list(const json& v, const char* what) {
  if (!v.is_array()) {
    std::ostringstream os;
    os << what << " must be an array of vertices";
    fail(errk::BadInput, os.str());
  }
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) fail(errk::BadInput, "vertex entries must be integers");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errk::BadInput, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errk::BadInput, "cannot write " + path);
  out << content;
  if (!out) fail(errk::BadInput, "short write to " + path);
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) fail(errk::BadInput, "number formatting failed");
  return std::string(buf, p);
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"d", m.rows()}, {"rows", std::move(rows)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const int d = need_int(j, "d");
  if (d < 1) fail(errk::BadInput, "matrix dimension must be positive");
  const json& rows = need(j, "rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != d)
    fail(errk::BadInput, "\"rows\" must hold exactly d rows");
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    const json& row = rows.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      fail(errk::BadInput, "every row must hold exactly d numbers");
    for (int c = 0; c < d; ++c) {
      const json& v = row.at(static_cast<std::size_t>(c));
      if (!v.is_number()) fail(errk::BadInput, "matrix entries must be numbers");
      m(i, c) = v.get<double>();
    }
  }
  return m;
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back(json::array({e.first, e.second}));
  return json{{"d", g.vertex_count()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const json& j) {
  const int d = need_int(j, "d");
  const json& edges = need(j, "edges");
  if (!edges.is_array()) fail(errk::BadInput, "\"edges\" must be an array of pairs");
  std::vector<std::pair<int, int>> list;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e.at(0).is_number_integer() || !e.at(1).is_number_integer())
      fail(errk::BadInput, "each edge must be a pair of integers");
    list.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  return Graph::from_edges(d, std::move(list));
}

json partial_to_json(const PartialVariogram& p) {
  json entries = json::array();
  for (const auto& e : p.graph().edges())
    entries.push_back(json::array({e.first, e.second, p.at(e.first, e.second)}));
  return json{{"graph", graph_to_json(p.graph())}, {"entries", std::move(entries)}};
}

PartialVariogram partial_from_json(const json& j, double tol) {
  Graph g = graph_from_json(need(j, "graph"));
  const json& entries = need(j, "entries");
  if (!entries.is_array()) fail(errk::BadInput, "\"entries\" must be an array of triples");
  std::vector<std::tuple<int, int, double>> list;
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 3 || !e.at(0).is_number_integer() || !e.at(1).is_number_integer() ||
        !e.at(2).is_number())
      fail(errk::BadInput, "each entry must be [i, j, value]");
    list.emplace_back(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>());
  }
  return PartialVariogram::from_entries(std::move(g), list, tol);
}

json statement_to_json(const CIStatement& s) {
  return json{{"A", s.a}, {"B", s.b}, {"C", s.c}};
}

CIStatement statement_from_json(const json& j) {
  CIStatement s;
  s.a = vertex_list(need(j, "A"), "\"A\"");
  s.b = vertex_list(need(j, "B"), "\"B\"");
  if (j.is_object() && j.contains("C")) s.c = vertex_list(j.at("C"), "\"C\"");
  return s;
}

Eigen::MatrixXd csv_to_matrix(const std::string& text, bool skip_header) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && skip_header) {
      first = false;
      continue;
    }
    first = false;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      std::string field = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        while (used < field.size() && (field[used] == ' ' || field[used] == '\t')) ++used;
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        fail(errk::BadInput, "non-numeric CSV field \"" + field + "\"");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(errk::BadInput, "CSV rows have inconsistent widths");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(errk::BadInput, "CSV input holds no data rows");
  Eigen::MatrixXd m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
  return os.str();
}

Graph graph_from_edge_list(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  int d = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string tok;
    if (!(fields >> tok) || tok[0] == '#') continue;
    if (d < 0) {
      try {
        d = std::stoi(tok);
      } catch (const std::exception&) {
        fail(errk::BadInput, "edge list must start with the vertex count");
      }
      int extra;
      if (fields >> extra) fail(errk::BadInput, "vertex count line must hold one number");
      continue;
    }
    int i = 0, j = 0;
    try {
      i = std::stoi(tok);
    } catch (const std::exception&) {
      fail(errk::BadInput, "bad edge endpoint \"" + tok + "\"");
    }
    if (!(fields >> j)) fail(errk::BadInput, "edge line needs two endpoints");
    edges.emplace_back(i, j);
  }
  if (d < 0) fail(errk::BadInput, "edge list holds no vertex count");
  return Graph::from_edges(d, std::move(edges));
}

Graph graph_from_file(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
    return graph_from_json(json::parse(text));
  return graph_from_edge_list(text);
}

json result_envelope() {
  return json{{"library", kLibraryName}, {"version", kLibraryVersion}};
}

json result_envelope(double tol) {
  json j = result_envelope();
  j["tolerance"] = tol;
  return j;
}

json certificate_to_json(const CndCertificate& c) {
  json j = result_envelope(c.tolerance);
  j["status"] = c.status;
  j["margin"] = c.margin;
  j["eigenvalues"] = std::vector<double>(c.eigenvalues.data(), c.eigenvalues.data() + c.eigenvalues.size());
  return j;
}

json completion_to_json(const CompletionResult& r, double tol) {
  json j = result_envelope(tol);
  j["method"] = r.method;
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["edge_residual"] = r.edge_residual;
  j["nonedge_residual"] = r.nonedge_residual;
  j["objective_trace"] = r.objective_trace;
  if (r.gamma.size() > 0) {
    j["gamma"] = matrix_to_json(r.gamma);
    j["theta"] = matrix_to_json(r.theta);
  }
  return j;
}

json degree_to_json(const DegreeReport& r) {
  json j = result_envelope();
  j["family"] = r.family;
  j["emld"] = r.emld ? json(*r.emld) : json(nullptr);
  j["mld"] = r.mld ? json(*r.mld) : json(nullptr);
  j["method"] = r.method;
  j["notes"] = r.notes;
  return j;
}

json k2n_to_json(const K2nNumericResult& r) {
  json j = result_envelope();
  j["n"] = r.n;
  j["degree"] = r.degree;
  j["root_count"] = r.root_count;
  j["validated"] = r.validated;
  j["coefficient_tail"] = r.coefficient_tail;
  json roots = json::array();
  for (const auto& root : r.roots) {
    roots.push_back(json{{"re", root.y.real()},
                         {"im", root.y.imag()},
                         {"nonedge_residual", root.nonedge_residual},
                         {"real", root.real},
                         {"strictly_cnd", root.strictly_cnd}});
  }
  j["roots"] = std::move(roots);
  return j;
}

json threshold_to_json(const ThresholdBounds& b) {
  json j = result_envelope();
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  j["exact"] = b.exact;
  j["upper_is_exact"] = b.upper_is_exact;
  j["evidence"] = b.evidence;
  return j;
}

json surrogate_to_json(const SurrogateReport& r) {
  json j = result_envelope();
  j["verdict"] = to_string(r.verdict);
  j["r"] = r.r;
  j["trials"] = r.trials;
  j["full_rank_trials"] = r.full_rank_trials;
  j["max_rank"] = r.max_rank;
  j["edge_count"] = r.edge_count;
  return j;
}

json c4_to_json(const C4ExperimentResult& r) {
  json j = result_envelope();
  j["sample"] = std::vector<double>(r.sample.data(), r.sample.data() + 4);
  j["observed"] = matrix_to_json(r.observed);
  j["polynomial_degree"] = r.polynomial_degree;
  json cands = json::array();
  for (const auto& c : r.candidates) {
    cands.push_back(json{{"g12", c.g12}, {"g34", c.g34}, {"strictly_cnd", c.strictly_cnd}, {"margin", c.margin}});
  }
  j["candidates"] = std::move(cands);
  j["outcome"] = to_string(r.outcome);
  return j;
}

json eci_to_json(const CIStatement& s, const EciResult& r) {
  json j = result_envelope();
  j["statement"] = statement_to_json(s);
  j["holds"] = r.holds;
  j["rank"] = r.rank;
  j["expected_rank"] = r.expected_rank;
  j["margin"] = r.margin;
  j["singular_values"] =
      std::vector<double>(r.singular_values.data(), r.singular_values.data() + r.singular_values.size());
  return j;
}

}  // namespace hrgm::io
