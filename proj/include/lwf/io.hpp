#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lwf/duality.hpp"
#include "lwf/interaction.hpp"
#include "lwf/oracle.hpp"
#include "lwf/solver.hpp"
#include "lwf/symmat.hpp"
#include "lwf/verify.hpp"

namespace lwf {

using Json = nlohmann::ordered_json;

/// Problem instance (A, U) plus optional oracle overrides.
struct ModelFile {
  int n = 0;
  SymMatrix A;
  Interaction interaction = Interaction::zero(1);
  std::optional<OracleConfig> oracle;
};

// Parsing. Errors are ParseError for malformed JSON or missing fields (with
// the JSON path, and line/column for syntax errors) and ValidationError for
// violated invariants.
ModelFile parse_model(const std::string& text, const std::string& source = "<string>");
ModelFile load_model(const std::string& path);
/// Accepts {"G": [[...]]} or a bare nested array.
SpdMatrix parse_green(const std::string& text, const std::string& source = "<string>");
SpdMatrix load_green(const std::string& path);

Json to_json(const ModelFile& m);
void save_model(const ModelFile& m, const std::string& path);

Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j, int n, const std::string& where);
Json interaction_to_json(const Interaction& u);
Interaction interaction_from_json(const Json& j, int n, const std::string& where);
Json oracle_config_to_json(const OracleConfig& cfg);
/// Fields present in j override `base`.
OracleConfig oracle_config_from_json(const Json& j, OracleConfig base, const std::string& where);

Json to_json(const MomentReport& r);
Json to_json(const InverseMapResult& r);
Json to_json(const LwReport& r);
Json to_json(const SolveTrace& t);
Json to_json(const CheckReport& r);
Json to_json(const std::vector<CheckReport>& reports);

/// Columns iter,residual,free_energy.
void write_trace_csv(const SolveTrace& t, std::ostream& os);

/// One row of `sweep`.
struct SweepRow {
  double eps = 0.0;
  double value = 0.0;
  double residual_vs_series = 0.0;
};
void write_sweep_csv(const std::string& quantity, const std::vector<SweepRow>& rows,
                     std::ostream& os);

/// Doubles printed with 17 significant digits.
std::string format_double(double x);
/// Indented JSON text whose floating-point values use format_double.
std::string dump_json(const Json& j);

/// Example document shown by usage errors.
std::string schema_help();

}  // namespace lwf
