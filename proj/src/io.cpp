#include "lwf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace lwf {

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // translate the byte offset into line and column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ":" +
                                           std::to_string(col) + ": invalid JSON (" + e.what() +
                                           ")");
  }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(where, std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) parse_fail(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorKind::ValidationError, where + ": value is not finite");
  return x;
}

SymMatrix sym_from_json(const Json& j, int n, const std::string& where, const char* label) {
  try {
    return SymMatrix(matrix_from_json(j, n, where));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ValidationError) {
      throw Error(ErrorKind::ValidationError, std::string(label) + " not symmetric (" + where + ")");
    }
    throw;
  }
}

void dump(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump(it.value(), out, indent, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line so matrices read row by row
      const bool flat = std::none_of(j.begin(), j.end(),
                                     [](const Json& e) { return e.is_structured(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const Json& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump(e, out, indent, depth + 1);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& j) {
  std::string out;
  dump(j, out, 2, 0);
  out += "\n";
  return out;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, int n, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected a nested array");
  if (static_cast<int>(j.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch,
                where + ": expected " + std::to_string(n) + " rows, got " + std::to_string(j.size()));
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) parse_fail(w, "expected an array");
    if (static_cast<int>(j[i].size()) != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  w + ": expected " + std::to_string(n) + " entries, got " + std::to_string(j[i].size()));
    }
    for (int k = 0; k < n; ++k) m(i, k) = number(j[i][k], w + "[" + std::to_string(k) + "]");
  }
  return m;
}

Json interaction_to_json(const Interaction& u) {
  switch (u.kind()) {
    case InteractionKind::Zero: return {{"type", "zero"}};
    case InteractionKind::DiagonalQuartic:
      return {{"type", "diagonal_quartic"}, {"v", matrix_to_json(u.coupling().matrix())}};
    case InteractionKind::GeneralQuartic: return {{"type", "general_quartic"}, {"w", u.tensor().data()}};
    case InteractionKind::Scaled:
      return {{"type", "scaled"}, {"factor", u.factor()}, {"inner", interaction_to_json(u.inner())}};
    case InteractionKind::Composed:
      return {{"type", "composed"},
              {"map", matrix_to_json(u.map().matrix())},
              {"inner", interaction_to_json(u.inner())}};
    case InteractionKind::QuadraticShift:
      return {{"type", "quadratic_shift"},
              {"D", matrix_to_json(u.shift().matrix())},
              {"inner", interaction_to_json(u.inner())}};
  }
  return {};
}

Interaction interaction_from_json(const Json& j, int n, const std::string& where) {
  const Json& t = field(j, "type", where);
  if (!t.is_string()) parse_fail(where + ".type", "expected a string");
  const std::string type = t.get<std::string>();
  if (type == "zero") return Interaction::zero(n);
  if (type == "diagonal_quartic") {
    return Interaction::diagonal_quartic(sym_from_json(field(j, "v", where), n, where + ".v", "v"));
  }
  if (type == "general_quartic") {
    const Json& w = field(j, "w", where);
    const std::size_t expect = static_cast<std::size_t>(n) * n * n * n;
    if (!w.is_array()) parse_fail(where + ".w", "expected a flat array");
    if (w.size() != expect) {
      throw Error(ErrorKind::DimensionMismatch, where + ".w: expected " + std::to_string(expect) +
                                                    " entries, got " + std::to_string(w.size()));
    }
    std::vector<double> flat;
    for (std::size_t k = 0; k < w.size(); ++k) {
      flat.push_back(number(w[k], where + ".w[" + std::to_string(k) + "]"));
    }
    return Interaction::general_quartic(QuarticTensor(n, std::move(flat)));
  }
  if (type == "scaled") {
    const double c = number(field(j, "factor", where), where + ".factor");
    return Interaction::scaled(c, interaction_from_json(field(j, "inner", where), n, where + ".inner"));
  }
  if (type == "composed") {
    const LinearMap map(matrix_from_json(field(j, "map", where), n, where + ".map"));
    return Interaction::composed(interaction_from_json(field(j, "inner", where), n, where + ".inner"),
                                 map);
  }
  if (type == "quadratic_shift") {
    const SymMatrix d = sym_from_json(field(j, "D", where), n, where + ".D", "D");
    return Interaction::quadratic_shift(
        d, interaction_from_json(field(j, "inner", where), n, where + ".inner"));
  }
  parse_fail(where + ".type", "unknown interaction type '" + type + "'");
}

Json oracle_config_to_json(const OracleConfig& cfg) {
  return {{"mode", cfg.mode == OracleMode::Quadrature ? "quadrature" : "mc"},
          {"nodes_per_dim", cfg.nodes_per_dim},
          {"samples", cfg.samples},
          {"seed", cfg.seed},
          {"envelope_floor", cfg.envelope_floor}};
}

OracleConfig oracle_config_from_json(const Json& j, OracleConfig base, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string w = where + "." + it.key();
    const Json& v = it.value();
    if (it.key() == "mode") {
      const std::string m = v.is_string() ? v.get<std::string>() : "";
      if (m == "quadrature") {
        base.mode = OracleMode::Quadrature;
      } else if (m == "mc") {
        base.mode = OracleMode::MonteCarlo;
      } else {
        parse_fail(w, "expected \"quadrature\" or \"mc\"");
      }
    } else if (it.key() == "nodes_per_dim") {
      if (!v.is_number_integer() || v.get<long long>() < 1) parse_fail(w, "expected a positive integer");
      base.nodes_per_dim = v.get<int>();
    } else if (it.key() == "samples") {
      if (!v.is_number_integer() || v.get<long long>() < 1) parse_fail(w, "expected a positive integer");
      base.samples = v.get<std::uint64_t>();
    } else if (it.key() == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        parse_fail(w, "expected a non-negative integer");
      }
      base.seed = v.get<std::uint64_t>();
    } else if (it.key() == "envelope_floor") {
      base.envelope_floor = number(v, w);
      if (!(base.envelope_floor > 0.0)) throw Error(ErrorKind::ValidationError, w + " must be positive");
    } else {
      parse_fail(w, "unknown oracle field");
    }
  }
  return base;
}

ModelFile parse_model(const std::string& text, const std::string& source) {
  const Json j = parse_text(text, source);
  const std::string root = source;
  const Json& nj = field(j, "n", root);
  if (!nj.is_number_integer() || nj.get<long long>() < 1) parse_fail(root + ".n", "expected a positive integer");
  ModelFile m;
  m.n = nj.get<int>();
  m.A = sym_from_json(field(j, "A", root), m.n, root + ".A", "A");
  m.interaction = interaction_from_json(field(j, "interaction", root), m.n, root + ".interaction");
  if (auto it = j.find("oracle"); it != j.end()) {
    m.oracle = oracle_config_from_json(*it, OracleConfig{}, root + ".oracle");
  }
  return m;
}

ModelFile load_model(const std::string& path) { return parse_model(read_file(path), path); }

SpdMatrix parse_green(const std::string& text, const std::string& source) {
  const Json j = parse_text(text, source);
  const Json& g = j.is_object() ? field(j, "G", source) : j;
  if (!g.is_array()) parse_fail(source, "expected {\"G\": [[...]]} or a nested array");
  const Eigen::MatrixXd m = matrix_from_json(g, static_cast<int>(g.size()), source + ".G");
  SymMatrix s;
  try {
    s = SymMatrix(m);
  } catch (const Error&) {
    throw Error(ErrorKind::ValidationError, "G not symmetric (" + source + ")");
  }
  return SpdMatrix(s);
}

SpdMatrix load_green(const std::string& path) { return parse_green(read_file(path), path); }

Json to_json(const ModelFile& m) {
  Json j = {{"n", m.n}, {"A", matrix_to_json(m.A.matrix())}, {"interaction", interaction_to_json(m.interaction)}};
  if (m.oracle) j["oracle"] = oracle_config_to_json(*m.oracle);
  return j;
}

void save_model(const ModelFile& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ValidationError, "cannot write '" + path + "'");
  out << dump_json(to_json(m));
}

Json to_json(const MomentReport& r) {
  Json j = {{"Z", r.Z}, {"Omega", r.Omega}, {"G", matrix_to_json(r.G.matrix())}, {"mean_U", r.mean_U}};
  if (r.M4) j["M4"] = r.M4->data();
  if (r.std_errors) {
    j["std_errors"] = {{"Z", r.std_errors->Z},
                       {"Omega", r.std_errors->Omega},
                       {"mean_U", r.std_errors->mean_U},
                       {"G", matrix_to_json(r.std_errors->G)}};
  }
  return j;
}

Json to_json(const InverseMapResult& r) {
  return {{"A", matrix_to_json(r.A.matrix())},
          {"iterations", r.iterations},
          {"residual", r.residual},
          {"moments", to_json(r.moments)}};
}

Json to_json(const LwReport& r) {
  return {{"A_of_G", matrix_to_json(r.A_of_G.matrix())},
          {"F", r.F},
          {"Phi", r.Phi},
          {"Phi0", r.Phi0},
          {"Sigma_exact", matrix_to_json(r.Sigma_exact.matrix())},
          {"entropy", r.entropy},
          {"mean_U", r.mean_U},
          {"Omega", r.Omega},
          {"solver_iterations", r.solver_iterations},
          {"residual", r.residual}};
}

Json to_json(const SolveTrace& t) {
  Json its = Json::array();
  for (const auto& it : t.iterates) {
    its.push_back({{"iteration", it.iteration}, {"residual", it.residual}, {"free_energy", it.free_energy}});
  }
  return {{"converged", t.converged}, {"final_G", matrix_to_json(t.final_G.matrix())}, {"iterates", its}};
}

Json to_json(const CheckReport& r) {
  Json details = Json::object();
  for (const auto& d : r.details) details[d.key] = d.values;
  Json j = {{"name", r.name},
            {"passed", r.passed},
            {"metric", r.metric},
            {"threshold", r.threshold},
            {"comparison", r.lower_bound ? ">=" : "<="},
            {"details", details}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

Json to_json(const std::vector<CheckReport>& reports) {
  Json a = Json::array();
  for (const auto& r : reports) a.push_back(to_json(r));
  return a;
}

void write_trace_csv(const SolveTrace& t, std::ostream& os) {
  os << "iter,residual,free_energy\n";
  for (const auto& it : t.iterates) {
    os << it.iteration << ',' << format_double(it.residual) << ',' << format_double(it.free_energy)
       << '\n';
  }
}

void write_sweep_csv(const std::string& quantity, const std::vector<SweepRow>& rows,
                     std::ostream& os) {
  os << "eps," << quantity << ",residual_vs_series\n";
  for (const auto& r : rows) {
    os << format_double(r.eps) << ',' << format_double(r.value) << ','
       << format_double(r.residual_vs_series) << '\n';
  }
}

std::string schema_help() {
  return R"(model file (JSON):
  {"n": 2,
   "A": [[1, 0], [0, 1]],
   "interaction": <interaction>,
   "oracle": {"mode": "quadrature" | "mc", "nodes_per_dim": 64,
              "samples": 1000000, "seed": 0, "envelope_floor": 0.5}}   (oracle optional)
interaction:
  {"type": "zero"}
  {"type": "diagonal_quartic", "v": [[...]]}        U = 1/8 sum v_ij x_i^2 x_j^2
  {"type": "general_quartic", "w": [n^4 numbers]}   U = sum w_ijkl x_i x_j x_k x_l
  {"type": "scaled", "factor": e, "inner": <interaction>}
  {"type": "composed", "map": [[...]], "inner": <interaction>}
  {"type": "quadratic_shift", "D": [[...]], "inner": <interaction>}
G file: {"G": [[...]]} or a bare nested array
)";
}

}  // namespace lwf
