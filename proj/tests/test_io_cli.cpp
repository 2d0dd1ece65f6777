#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "hrgm/completion.hpp"
#include "hrgm/degree.hpp"
#include "hrgm/eci.hpp"
#include "hrgm/errors.hpp"
#include "hrgm/graph.hpp"
#include "hrgm/io.hpp"
#include "hrgm/threshold.hpp"
#include "hrgm/varalg.hpp"
#include "oracles.hpp"

#ifdef HRGM_CLI_PATH
#include <sys/wait.h>
#endif

using namespace hrgm;
using nlohmann::json;

namespace {

Eigen::MatrixXd canonical_variogram() {
  Eigen::MatrixXd g(3, 3);
  g << 0, 9, 25, 9, 0, 16, 25, 16, 0;
  return g;
}

// Minimal validator for the schema subset the shipped documents use: type,
// enum, required, properties, items, minimum. Unknown keywords are ignored.
bool type_matches(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

void validate_schema(const json& doc, const json& schema, const std::string& where, std::vector<std::string>& errors) {
  if (schema.contains("type")) {
    const json& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(doc, t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || type_matches(doc, alt.get<std::string>());
    }
    if (!ok) {
      errors.push_back(where + ": type mismatch, got " + std::string(doc.type_name()));
      return;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& v : schema.at("enum")) ok = ok || v == doc;
    if (!ok) errors.push_back(where + ": value " + doc.dump() + " not in enum");
  }
  if (schema.contains("minimum") && doc.is_number() && doc.get<double>() < schema.at("minimum").get<double>())
    errors.push_back(where + ": below minimum");
  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema.at("required"))
        if (!doc.contains(key.get<std::string>()))
          errors.push_back(where + ": missing required field \"" + key.get<std::string>() + "\"");
    if (schema.contains("properties"))
      for (const auto& [key, sub] : schema.at("properties").items())
        if (doc.contains(key)) validate_schema(doc.at(key), sub, where + "." + key, errors);
  }
  if (doc.is_array() && schema.contains("items"))
    for (std::size_t i = 0; i < doc.size(); ++i)
      validate_schema(doc.at(i), schema.at("items"), where + "[" + std::to_string(i) + "]", errors);
}

json load_schema(const std::string& name) {
  return json::parse(io::read_file(std::string(HRGM_SCHEMA_DIR) + "/" + name));
}

void check_against_schema(const json& doc, const std::string& schema_name) {
  std::vector<std::string> errors;
  validate_schema(doc, load_schema(schema_name), schema_name, errors);
  for (const auto& e : errors) {
    CAPTURE(e);
    CHECK(false);
  }
  CHECK(errors.empty());
}

const std::string& work_dir() {
  static const std::string dir = [] {
    std::string templ = (std::filesystem::temp_directory_path() / "hrgm_io_cli_XXXXXX").string();
    std::vector<char> buf(templ.begin(), templ.end());
    buf.push_back('\0');
    const char* made = mkdtemp(buf.data());
    return std::string(made ? made : "/tmp");
  }();
  return dir;
}

std::string stage(const std::string& name, const std::string& content) {
  const std::string path = work_dir() + "/" + name;
  io::write_file(path, content);
  return path;
}

#ifdef HRGM_CLI_PATH
struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const std::string tag = std::to_string(counter++);
  const std::string out_path = work_dir() + "/stdout_" + tag;
  const std::string err_path = work_dir() + "/stderr_" + tag;
  const std::string cmd = env_prefix + std::string(HRGM_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  const int raw = std::system(cmd.c_str());
  CliRun r;
  if (WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
  r.out = io::read_file(out_path);
  r.err = io::read_file(err_path);
  return r;
}

json parse_stdout(const CliRun& r) {
  json j = json::parse(r.out, nullptr, false);
  REQUIRE(!j.is_discarded());
  return j;
}
#endif

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("doubles format to the shortest round trip") {
  for (double v : {0.0, 1.0, -1.0, 1.0 / 3.0, 25.0, 1e-17, 6.02e23, -0.1, 3.0 / 144.0}) {
    const std::string s = io::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(io::format_double(25.0) == "25");
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("matrix json round trip and guards") {
  const Eigen::MatrixXd gamma = canonical_variogram();
  const json j = io::matrix_to_json(gamma);
  CHECK(j.at("d").get<int>() == 3);
  CHECK(j.at("rows").size() == 3);
  CHECK(io::matrix_from_json(j) == gamma);
  check_against_schema(j, "matrix.schema.json");

  // Serialization preserves doubles bit for bit through text.
  Eigen::MatrixXd noisy(2, 2);
  noisy << 1.0 / 3.0, -2.5e-17, 6.02e23, 0.1;
  CHECK(io::matrix_from_json(json::parse(io::matrix_to_json(noisy).dump())) == noisy);

  CHECK_THROWS_WITH_AS(io::matrix_from_json(json{{"rows", json::array()}}), doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::matrix_from_json(json{{"d", 0}, {"rows", json::array()}}),
                       doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::matrix_from_json(json::parse(R"({"d": 2, "rows": [[1, 2]]})")),
                       doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::matrix_from_json(json::parse(R"({"d": 1, "rows": [[1, 2]]})")),
                       doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::matrix_from_json(json::parse(R"({"d": 1, "rows": [["x"]]})")),
                       doctest::Contains(errk::BadInput), Error);
}

TEST_CASE("graph json round trip and guards") {
  const Graph g = cycle_graph(5);
  const json j = io::graph_to_json(g);
  const Graph back = io::graph_from_json(j);
  CHECK(back.vertex_count() == 5);
  CHECK(back.edges() == g.edges());
  check_against_schema(j, "graph.schema.json");

  // Endpoints are normalized to ascending order.
  const Graph flipped = io::graph_from_json(json::parse(R"({"d": 3, "edges": [[3, 1], [2, 1]]})"));
  CHECK(flipped.has_edge(1, 3));
  CHECK(flipped.edges().front() == std::pair<int, int>(1, 2));

  CHECK_THROWS_WITH_AS(io::graph_from_json(json{{"d", 3}}), doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::graph_from_json(json::parse(R"({"d": 3, "edges": [[1]]})")),
                       doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::graph_from_json(json::parse(R"({"d": 3, "edges": [[1, "b"]]})")),
                       doctest::Contains(errk::BadInput), Error);
}

TEST_CASE("partial variogram json round trip and guards") {
  const Graph g = path_graph(3);
  const PartialVariogram p = PartialVariogram::from_entries(g, {{1, 2, 9.0}, {2, 3, 16.0}});
  const json j = io::partial_to_json(p);
  check_against_schema(j, "partial-variogram.schema.json");
  const PartialVariogram back = io::partial_from_json(j);
  CHECK(back.graph().edges() == g.edges());
  CHECK(back.at(1, 2) == 9.0);
  CHECK(back.at(2, 3) == 16.0);

  CHECK_THROWS_WITH_AS(io::partial_from_json(json{{"graph", io::graph_to_json(g)}}),
                       doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(
      io::partial_from_json(json::parse(R"({"graph": {"d": 3, "edges": [[1, 2]]}, "entries": [[1, 2]]})")),
      doctest::Contains(errk::BadInput), Error);
  // Entry on a nonedge is rejected by the partial-variogram layer.
  CHECK_THROWS_AS(
      io::partial_from_json(json::parse(R"({"graph": {"d": 3, "edges": [[1, 2]]}, "entries": [[1, 3, 2.0]]})")),
      Error);
}

TEST_CASE("statement json round trip") {
  CIStatement s;
  s.a = {1};
  s.b = {3};
  s.c = {2};
  const json j = io::statement_to_json(s);
  check_against_schema(j, "statement.schema.json");
  const CIStatement back = io::statement_from_json(j);
  CHECK(back.a == s.a);
  CHECK(back.b == s.b);
  CHECK(back.c == s.c);

  const CIStatement marginal = io::statement_from_json(json::parse(R"({"A": [1], "B": [2]})"));
  CHECK(marginal.c.empty());

  CHECK_THROWS_WITH_AS(io::statement_from_json(json::parse(R"({"A": [1]})")), doctest::Contains(errk::BadInput),
                       Error);
  CHECK_THROWS_WITH_AS(io::statement_from_json(json::parse(R"({"A": 1, "B": [2]})")),
                       doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::statement_from_json(json::parse(R"({"A": [1.5], "B": [2]})")),
                       doctest::Contains(errk::BadInput), Error);
}

TEST_CASE("csv parsing and serialization") {
  const Eigen::MatrixXd gamma = canonical_variogram();
  CHECK(io::csv_to_matrix(io::matrix_to_csv(gamma)) == gamma);

  Eigen::MatrixXd noisy(2, 3);
  noisy << 1.0 / 3.0, -2.5e-17, 6.02e23, 0.1, -4.0, 7.25;
  CHECK(io::csv_to_matrix(io::matrix_to_csv(noisy)) == noisy);

  const Eigen::MatrixXd crlf = io::csv_to_matrix("1,2\r\n3,4\r\n");
  CHECK(crlf(0, 1) == 2.0);
  CHECK(crlf(1, 0) == 3.0);

  CHECK(io::csv_to_matrix("x,y\n1,2\n", true).rows() == 1);
  CHECK(io::csv_to_matrix(" 1 ,2\n3, 4\n")(0, 0) == 1.0);
  CHECK(io::csv_to_matrix("1e3,-2.5e-2\n")(0, 1) == -2.5e-2);

  CHECK_THROWS_WITH_AS(io::csv_to_matrix("x,y\n1,2\n"), doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::csv_to_matrix("1,2\n3\n"), doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::csv_to_matrix("1,2x\n"), doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::csv_to_matrix(""), doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::csv_to_matrix("\n\n"), doctest::Contains(errk::BadInput), Error);
}

TEST_CASE("edge list parsing") {
  const Graph g = io::graph_from_edge_list("# path on four vertices\n4\n1 2\n# middle\n2 3\n3 4\n");
  CHECK(g.vertex_count() == 4);
  CHECK(g.edges() == path_graph(4).edges());

  CHECK_THROWS_WITH_AS(io::graph_from_edge_list("4 5\n1 2\n"), doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::graph_from_edge_list("# only comments\n"), doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::graph_from_edge_list("3\nx 2\n"), doctest::Contains(errk::BadInput), Error);
  CHECK_THROWS_WITH_AS(io::graph_from_edge_list("3\n1\n"), doctest::Contains(errk::BadInput), Error);
}

TEST_CASE("graph file dispatch and file io") {
  const std::string json_path = stage("square.json", io::graph_to_json(cycle_graph(4)).dump());
  CHECK(io::graph_from_file(json_path).edges() == cycle_graph(4).edges());

  const std::string list_path = stage("square.txt", "4\n1 2\n2 3\n3 4\n1 4\n");
  CHECK(io::graph_from_file(list_path).edges() == cycle_graph(4).edges());

  const std::string blob = "line one\nline two\x01\x02\n";
  const std::string blob_path = stage("blob.bin", blob);
  CHECK(io::read_file(blob_path) == blob);
  CHECK_THROWS_WITH_AS(io::read_file(work_dir() + "/does_not_exist"), doctest::Contains(errk::BadInput), Error);
}

TEST_CASE("result payloads validate against the shipped schemas") {
  const Eigen::MatrixXd gamma = canonical_variogram();

  check_against_schema(io::certificate_to_json(is_strictly_cnd(gamma)), "certificate.schema.json");

  const PartialVariogram p = PartialVariogram::from_entries(path_graph(3), {{1, 2, 9.0}, {2, 3, 16.0}});
  const CompletionResult done = complete_chordal(p);
  json cj = io::completion_to_json(done, default_tol());
  CHECK(cj.contains("gamma"));
  check_against_schema(cj, "completion.schema.json");

  // A failed completion still validates; status records the diagnosis.
  Eigen::Vector4d v(1.0, 0.0, 0.5, -1.5);
  std::vector<std::tuple<int, int, double>> entries;
  for (int i = 1; i <= 2; ++i)
    for (int j = 3; j <= 4; ++j)
      entries.emplace_back(i, j, (v(i - 1) - v(j - 1)) * (v(i - 1) - v(j - 1)));
  const CompletionResult failed = complete_general(PartialVariogram::from_entries(complete_bipartite_2n(2), entries));
  REQUIRE(failed.status == CompletionStatus::NoCNDSolution);
  json fj = io::completion_to_json(failed, default_tol());
  check_against_schema(fj, "completion.schema.json");

  check_against_schema(io::degree_to_json(extremal_ml_degree(cycle_graph(4))), "degree.schema.json");
  const Graph prism =
      Graph::from_edges(6, {{1, 2}, {2, 3}, {1, 3}, {4, 5}, {5, 6}, {4, 6}, {1, 4}, {2, 5}, {3, 6}});
  json prism_j = io::degree_to_json(extremal_ml_degree(prism));
  CHECK(prism_j.at("emld").is_null());
  check_against_schema(prism_j, "degree.schema.json");

  check_against_schema(io::k2n_to_json(emld_k2n_numeric(2, 11)), "k2n.schema.json");
  check_against_schema(io::threshold_to_json(emlt_bounds(cycle_graph(4))), "threshold.schema.json");
  check_against_schema(io::surrogate_to_json(elimination_surrogate(cycle_graph(4), 2, 20, 7)),
                       "surrogate.schema.json");
  check_against_schema(io::c4_to_json(cycle4_rank1_experiment(0.0, 2.0)), "c4-experiment.schema.json");

  CIStatement s;
  s.a = {1};
  s.b = {3};
  s.c = {2};
  check_against_schema(io::eci_to_json(s, test_eci(gamma, s)), "eci.schema.json");

  // The validator itself rejects broken documents.
  std::vector<std::string> errors;
  validate_schema(json{{"d", 3}}, load_schema("matrix.schema.json"), "doc", errors);
  CHECK(!errors.empty());
  errors.clear();
  json bad_cert = io::certificate_to_json(is_strictly_cnd(gamma));
  bad_cert["status"] = "perfect";
  validate_schema(bad_cert, load_schema("certificate.schema.json"), "doc", errors);
  CHECK(!errors.empty());
}

#ifdef HRGM_CLI_PATH

TEST_CASE("cli check certifies matrices") {
  const std::string gamma_path = stage("canonical.json", io::matrix_to_json(canonical_variogram()).dump());
  const CliRun strict = cli("check --gamma " + gamma_path);
  CHECK(strict.code == 0);
  json j = parse_stdout(strict);
  check_against_schema(j, "check.schema.json");
  CHECK(j.at("status") == "strict");
  CHECK(j.at("dimensionality").get<int>() == 2);

  // Collinear sample locations are conditionally negative semidefinite only.
  Eigen::MatrixXd weak(3, 3);
  weak << 0, 1, 4, 1, 0, 1, 4, 1, 0;
  const std::string weak_path = stage("weak.json", io::matrix_to_json(weak).dump());
  const CliRun graded = cli("check --gamma " + weak_path);
  CHECK(graded.code == 2);
  json wj = parse_stdout(graded);
  check_against_schema(wj, "check.schema.json");
  CHECK(wj.at("status") == "weak");
  CHECK(wj.at("dimensionality").get<int>() == 1);

  Eigen::MatrixXd skew(2, 2);
  skew << 0, 1, 2, 0;
  const std::string skew_path = stage("skew.json", io::matrix_to_json(skew).dump());
  const CliRun bad = cli("check --gamma " + skew_path);
  CHECK(bad.code == 1);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("cli fit completes path data") {
  const PartialVariogram p = PartialVariogram::from_entries(path_graph(3), {{1, 2, 9.0}, {2, 3, 16.0}});
  const std::string partial_path = stage("path_partial.json", io::partial_to_json(p).dump());
  const CliRun fit = cli("fit --data " + partial_path);
  CHECK(fit.code == 0);
  json j = parse_stdout(fit);
  check_against_schema(j, "completion.schema.json");
  CHECK(j.at("method") == "chordal");
  CHECK(j.at("status") == "converged");
  const Eigen::MatrixXd gamma = io::matrix_from_json(j.at("gamma"));
  CHECK(std::abs(gamma(0, 2) - 25.0) <= 1e-9);

  // Full-matrix input restricted to the path needs the graph.
  const std::string full_path = stage("full.json", io::matrix_to_json(canonical_variogram()).dump());
  const std::string graph_path = stage("path3.json", io::graph_to_json(path_graph(3)).dump());
  const CliRun from_full = cli("fit --data " + full_path + " --graph " + graph_path);
  CHECK(from_full.code == 0);
  CHECK(std::abs(io::matrix_from_json(parse_stdout(from_full).at("gamma"))(0, 2) - 25.0) <= 1e-9);
  CHECK(cli("fit --data " + full_path).code == 1);

  // Rank-one data on the four-cycle has no completion at this sample.
  Eigen::Vector4d v(1.0, 0.0, 0.5, -1.5);
  std::vector<std::tuple<int, int, double>> entries;
  for (int i = 1; i <= 2; ++i)
    for (int j = 3; j <= 4; ++j)
      entries.emplace_back(i, j, (v(i - 1) - v(j - 1)) * (v(i - 1) - v(j - 1)));
  const PartialVariogram bad = PartialVariogram::from_entries(complete_bipartite_2n(2), entries);
  const std::string bad_path = stage("square_rank1.json", io::partial_to_json(bad).dump());
  const CliRun no_fit = cli("fit --data " + bad_path);
  CHECK(no_fit.code == 2);
  json nj = parse_stdout(no_fit);
  CHECK(nj.at("status") == "no-cnd-solution");
  check_against_schema(nj, "completion.schema.json");
}

TEST_CASE("cli degree reports and seed discipline") {
  const std::string c4_path = stage("c4.json", io::graph_to_json(cycle_graph(4)).dump());
  const CliRun square = cli("degree --graph " + c4_path);
  CHECK(square.code == 0);
  json j = parse_stdout(square);
  check_against_schema(j, "degree.schema.json");
  CHECK(j.at("family") == "cycle");
  CHECK(j.at("emld").get<long long>() == 4);
  CHECK(j.at("mld").get<long long>() == 5);

  const CliRun unseeded = cli("degree --numeric-k2n 2");
  CHECK(unseeded.code == 1);
  CHECK(unseeded.err.find("seed") != std::string::npos);

  const CliRun seeded = cli("degree --numeric-k2n 2 --seed 11");
  CHECK(seeded.code == 0);
  json k = parse_stdout(seeded);
  check_against_schema(k, "k2n.schema.json");
  CHECK(k.at("validated").get<int>() == 4);
  CHECK(k.at("seed").get<long long>() == 11);

  const CliRun autoseeded = cli("degree --numeric-k2n 2 --seed auto");
  CHECK(autoseeded.code == 0);
  CHECK(autoseeded.err.find("seed") != std::string::npos);
}

TEST_CASE("cli mlt brackets and the four-cycle experiment") {
  const std::string c4_path = stage("c4_mlt.json", io::graph_to_json(cycle_graph(4)).dump());
  const CliRun bracket = cli("mlt --graph " + c4_path + " --elim-r 2 --trials 50 --seed 7");
  CHECK(bracket.code == 0);
  json j = parse_stdout(bracket);
  check_against_schema(j, "threshold.schema.json");
  CHECK(j.at("lower").get<int>() == 1);
  CHECK(j.at("upper").get<int>() == 2);
  CHECK(j.at("surrogate").at("verdict") == "zero-ideal-likely");

  CHECK(cli("mlt --graph " + c4_path + " --elim-r 2").code == 1);  // no seed

  const CliRun exists = cli("mlt c4-experiment --x2 0 --x3 2");
  CHECK(exists.code == 0);
  json e = parse_stdout(exists);
  check_against_schema(e, "c4-experiment.schema.json");
  CHECK(e.at("outcome") == "exists-cnd");

  const CliRun missing = cli("mlt c4-experiment --x2 0 --x3 0.5");
  CHECK(missing.code == 0);
  CHECK(parse_stdout(missing).at("outcome") == "no-cnd-solution");
}

TEST_CASE("cli simulate feeds empvario and fit") {
  const std::string gamma_path = stage("sim_gamma.json", io::matrix_to_json(canonical_variogram()).dump());

  CHECK(cli("simulate --gamma " + gamma_path + " --n 10").code == 1);  // no seed

  const std::string rows_path = work_dir() + "/rows.csv";
  const CliRun sim = cli("simulate --gamma " + gamma_path + " --n 4000 --seed 5 --out " + rows_path);
  CHECK(sim.code == 0);
  json summary = parse_stdout(sim);
  check_against_schema(summary, "simulate-summary.schema.json");
  CHECK(summary.at("rows").get<int>() == 4000);
  CHECK(summary.at("d").get<int>() == 3);
  const Eigen::MatrixXd rows = io::csv_to_matrix(io::read_file(rows_path));
  CHECK(rows.rows() == 4000);
  CHECK(rows.cols() == 3);

  // Anchored simulation prints CSV on stdout with a nonnegative anchor.
  const CliRun anchored = cli("simulate --gamma " + gamma_path + " --n 50 --seed 5 --halfspace 1");
  CHECK(anchored.code == 0);
  const Eigen::MatrixXd half = io::csv_to_matrix(anchored.out);
  CHECK(half.rows() == 50);
  CHECK(half.col(0).minCoeff() >= 0.0);

  const std::string est_path = work_dir() + "/est.json";
  const CliRun emp = cli("empvario --data " + rows_path + " --out " + est_path);
  CHECK(emp.code == 0);
  const Eigen::MatrixXd est = io::matrix_from_json(json::parse(io::read_file(est_path)));
  check_against_schema(json::parse(io::read_file(est_path)), "matrix.schema.json");
  CHECK(est.rows() == 3);
  CHECK(est.diagonal().cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd gamma = canonical_variogram();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(std::abs(est(i, j) - gamma(i, j)) <= 0.2 * gamma(i, j));

  const std::string graph_path = stage("sim_path3.json", io::graph_to_json(path_graph(3)).dump());
  const CliRun fit = cli("fit --data " + est_path + " --graph " + graph_path + " --method general");
  CHECK(fit.code == 0);
  json fj = parse_stdout(fit);
  CHECK(fj.at("method") == "general");
  CHECK(std::abs(io::matrix_from_json(fj.at("gamma"))(0, 2) - 25.0) <= 0.2 * 25.0);
}

TEST_CASE("cli ci verdicts") {
  const std::string gamma_path = stage("ci_gamma.json", io::matrix_to_json(canonical_variogram()).dump());

  const std::string holds_path = stage("holds.json", R"({"A": [1], "B": [3], "C": [2]})");
  const CliRun holds = cli("ci --gamma " + gamma_path + " --statement " + holds_path);
  CHECK(holds.code == 0);
  json h = parse_stdout(holds);
  check_against_schema(h, "eci.schema.json");
  CHECK(h.at("holds").get<bool>());
  CHECK(!h.contains("results"));

  const std::string fails_path = stage("fails.json", R"({"A": [1], "B": [2], "C": [3]})");
  const CliRun fails = cli("ci --gamma " + gamma_path + " --statement " + fails_path);
  CHECK(fails.code == 0);
  CHECK(!parse_stdout(fails).at("holds").get<bool>());

  // The canonical matrix is a path model point, so every separation holds.
  const std::string graph_path = stage("ci_path3.json", io::graph_to_json(path_graph(3)).dump());
  const CliRun batch = cli("ci --gamma " + gamma_path + " --graph " + graph_path);
  CHECK(batch.code == 0);
  json b = parse_stdout(batch);
  check_against_schema(b, "ci-batch.schema.json");
  CHECK(b.at("count").get<int>() >= 1);
  CHECK(b.at("holding") == b.at("count"));

  CHECK(cli("ci --gamma " + gamma_path).code == 1);
}

TEST_CASE("cli reproduce reruns a pinned study") {
  const CliRun rerun = cli("reproduce example-2.2");
  CHECK(rerun.code == 0);
  json j = parse_stdout(rerun);
  check_against_schema(j, "reproduce.schema.json");
  CHECK(j.at("pass").get<bool>());
  for (const auto& c : j.at("checks")) CHECK(c.at("pass").get<bool>());

  const CliRun unknown = cli("reproduce nonsense");
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("unknown target") != std::string::npos);
}

TEST_CASE("cli tolerance can come from the environment") {
  // A nearly collinear configuration sits between the default tolerance and a
  // much smaller one.
  Eigen::MatrixXd almost(3, 3);
  const double delta = 1e-4;
  const double g13 = 4.0 + delta * delta;
  const double g23 = 1.0 + delta * delta;
  almost << 0, 1, g13, 1, 0, g23, g13, g23, 0;
  const std::string path = stage("almost.json", io::matrix_to_json(almost).dump());
  const CliRun coarse = cli("check --gamma " + path);
  const CliRun fine = cli("check --gamma " + path, "HR_TOL=1e-12 ");
  // With HR_TOL the same matrix grades strict; by default it grades weak.
  CHECK(coarse.code == 2);
  CHECK(fine.code == 0);
}

TEST_CASE("cli requires a subcommand") {
  CHECK(cli("").code != 0);
  CHECK(cli("frobnicate").code != 0);
}

#endif  // HRGM_CLI_PATH

}  // TEST_SUITE
