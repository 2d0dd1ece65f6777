#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <string>

#include "hrgm/completion.hpp"
#include "hrgm/degree.hpp"
#include "hrgm/eci.hpp"
#include "hrgm/graph.hpp"
#include "hrgm/threshold.hpp"
#include "hrgm/varalg.hpp"

namespace hrgm::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Shortest decimal that parses back to the same double.
std::string format_double(double v);

// Payload shapes. A matrix is {"d": n, "rows": n x n numbers}; a graph is
// {"d": n, "edges": [[i, j], ...]} with 1-based endpoints; a partial
// variogram is {"graph": ..., "entries": [[i, j, value], ...]}; a statement
// is {"A": [...], "B": [...], "C": [...]} with C optional.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);
nlohmann::json partial_to_json(const PartialVariogram& p);
PartialVariogram partial_from_json(const nlohmann::json& j, double tol = default_tol());
nlohmann::json statement_to_json(const CIStatement& s);
CIStatement statement_from_json(const nlohmann::json& j);

// Comma separated numeric table, one row per line; optional header line.
Eigen::MatrixXd csv_to_matrix(const std::string& text, bool skip_header = false);
std::string matrix_to_csv(const Eigen::MatrixXd& m);

// Edge list text: first non-comment line is the vertex count, then one
// "i j" pair per line. Lines starting with '#' are ignored.
Graph graph_from_edge_list(const std::string& text);
Graph graph_from_file(const std::string& path);  // dispatch on .json extension

// Result payloads share a {"library", "version"} stamp; numeric ones add the
// tolerance they ran at.
nlohmann::json result_envelope();
nlohmann::json result_envelope(double tol);

nlohmann::json certificate_to_json(const CndCertificate& c);
nlohmann::json completion_to_json(const CompletionResult& r, double tol);
nlohmann::json degree_to_json(const DegreeReport& r);
nlohmann::json k2n_to_json(const K2nNumericResult& r);
nlohmann::json threshold_to_json(const ThresholdBounds& b);
nlohmann::json surrogate_to_json(const SurrogateReport& r);
nlohmann::json c4_to_json(const C4ExperimentResult& r);
nlohmann::json eci_to_json(const CIStatement& s, const EciResult& r);

}  // namespace hrgm::io
