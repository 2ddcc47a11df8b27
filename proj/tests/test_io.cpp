#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "lwf/io.hpp"

using namespace lwf;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an lwf::Error";
  return ErrorKind::ValidationError;
}

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

void expect_same_interaction(const Interaction& a, const Interaction& b) {
  EXPECT_EQ(interaction_to_json(a), interaction_to_json(b));
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(a.dim(), -0.7, 1.3);
  EXPECT_EQ(a.eval(x), b.eval(x));
}

}  // namespace

TEST(ModelIo, MinimalGaussianLoads) {
  const ModelFile m = parse_model(R"({"n":1,"A":[[1]],"interaction":{"type":"zero"}})");
  EXPECT_EQ(m.n, 1);
  EXPECT_EQ(m.A(0, 0), 1.0);
  EXPECT_EQ(m.interaction.kind(), InteractionKind::Zero);
  EXPECT_FALSE(m.oracle.has_value());
}

TEST(ModelIo, RoundTripEveryInteractionKind) {
  const SymMatrix v = SymMatrix::from_rows({{1.0, 0.1 + 1e-17}, {0.1 + 1e-17, 2.0 / 3.0}});
  const Interaction d = Interaction::diagonal_quartic(v);
  const std::vector<Interaction> cases = {
      Interaction::zero(2),
      d,
      Interaction::general_quartic(d.materialize()),
      Interaction::scaled(1.0 / 3.0, d),
      Interaction::composed(Interaction::scaled(0.1, d), LinearMap::rotation(0.123456789)),
      Interaction::quadratic_shift(SymMatrix::from_rows({{0.5, -0.25}, {-0.25, 1e-20}}), d),
  };
  const auto dir = std::filesystem::temp_directory_path();
  for (std::size_t k = 0; k < cases.size(); ++k) {
    ModelFile m;
    m.n = 2;
    m.A = SymMatrix::from_rows({{std::sqrt(2.0), -0.1}, {-0.1, -1.0 / 7.0}});
    m.interaction = cases[k];
    if (k % 2 == 0) {
      OracleConfig c;
      c.mode = OracleMode::MonteCarlo;
      c.seed = 18446744073709551615ull;
      c.samples = 12345;
      c.envelope_floor = 0.25;
      m.oracle = c;
    }
    const std::string path = (dir / ("lwf_io_roundtrip_" + std::to_string(k) + ".json")).string();
    save_model(m, path);
    const ModelFile back = load_model(path);
    std::remove(path.c_str());
    EXPECT_EQ(back.n, m.n);
    EXPECT_EQ(back.A.matrix(), m.A.matrix());
    expect_same_interaction(back.interaction, m.interaction);
    ASSERT_EQ(back.oracle.has_value(), m.oracle.has_value());
    if (m.oracle) {
      EXPECT_EQ(back.oracle->seed, m.oracle->seed);
      EXPECT_EQ(back.oracle->samples, m.oracle->samples);
      EXPECT_EQ(back.oracle->mode, m.oracle->mode);
      EXPECT_EQ(back.oracle->envelope_floor, m.oracle->envelope_floor);
    }
  }
}

TEST(ModelIo, ValidationErrors) {
  EXPECT_NE(message_of([] { parse_model(R"({"n":2,"A":[[1,0.5],[0.4,1]],"interaction":{"type":"zero"}})"); })
                .find("A not symmetric"),
            std::string::npos);
  EXPECT_EQ(kind_of([] { parse_model(R"({"n":2,"A":[[1,0.5],[0.4,1]],"interaction":{"type":"zero"}})"); }),
            ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_model(R"({"n":2,"A":[[1]],"interaction":{"type":"zero"}})"); }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] {
              parse_model(R"({"n":1,"A":[[1]],"interaction":{"type":"general_quartic","w":[1,2]}})");
            }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] {
              parse_model(R"({"n":1,"A":[[1]],"interaction":{"type":"scaled","factor":-1,"inner":{"type":"zero"}}})");
            }),
            ErrorKind::ValidationError);
  // a negative coupling loads; the oracle rejects it later when A is not SPD
  EXPECT_NO_THROW(parse_model(R"({"n":1,"A":[[-1]],"interaction":{"type":"diagonal_quartic","v":[[-1]]}})"));
}

TEST(ModelIo, ParseErrorsCarryLocation) {
  const std::string syntax = message_of([] { parse_model("{\n  \"n\": 1,\n  \"A\": [[1]]\n  oops\n}", "m.json"); });
  EXPECT_NE(syntax.find("m.json:4:"), std::string::npos) << syntax;
  const std::string missing = message_of([] { parse_model(R"({"n":1,"A":[[1]],"interaction":{"type":"scaled","inner":{"type":"zero"}}})", "m.json"); });
  EXPECT_NE(missing.find("m.json.interaction"), std::string::npos) << missing;
  EXPECT_NE(missing.find("factor"), std::string::npos) << missing;
  EXPECT_EQ(kind_of([] { parse_model(R"({"n":1,"A":[[1]],"interaction":{"type":"cubic"}})"); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_model(R"({"n":1,"A":[["x"]],"interaction":{"type":"zero"}})"); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { load_model("/nonexistent/model.json"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_model(R"({"n":1,"A":[[1]],"interaction":{"type":"zero"},"oracle":{"mode":"fast"}})"); }),
            ErrorKind::ParseError);
}

TEST(GreenIo, BothShapes) {
  EXPECT_EQ(parse_green(R"({"G":[[2,0.5],[0.5,1]]})")(0, 1), 0.5);
  EXPECT_EQ(parse_green(R"([[3]])")(0, 0), 3.0);
  EXPECT_EQ(kind_of([] { parse_green(R"({"G":[[1,2],[2,1]]})"); }), ErrorKind::NotPositiveDefinite);
  EXPECT_EQ(kind_of([] { parse_green(R"({"G":[[1,2],[1,1]]})"); }), ErrorKind::ValidationError);
}

TEST(JsonOutput, SeventeenDigitsAndLosslessRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  const Json j = {{"x", 0.1}, {"m", matrix_to_json(Eigen::Matrix2d::Identity() / 3.0)}, {"k", 3}};
  const std::string text = dump_json(j);
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);
  const Json back = Json::parse(text);
  EXPECT_EQ(back["x"].get<double>(), 0.1);
  EXPECT_EQ(back["m"][1][1].get<double>(), 1.0 / 3.0);
  EXPECT_EQ(back["k"].get<int>(), 3);
}

TEST(JsonOutput, ReportsContainAllFields) {
  LwReport r;
  r.A_of_G = SymMatrix::identity(1);
  r.Sigma_exact = SymMatrix::zero(1);
  const Json j = to_json(r);
  for (const char* key : {"A_of_G", "F", "Phi", "Phi0", "Sigma_exact", "entropy", "mean_U", "Omega",
                          "solver_iterations", "residual"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  CheckReport c;
  c.name = "x";
  c.details = {{"eps", {1.0, 2.0}}};
  const Json cj = to_json(std::vector<CheckReport>{c});
  EXPECT_EQ(cj[0]["details"]["eps"][1].get<double>(), 2.0);
}

TEST(CsvOutput, TraceAndSweep) {
  SolveTrace t;
  t.iterates = {{0, 1.5, -0.25}, {1, 0.1, -0.3}};
  std::ostringstream os;
  write_trace_csv(t, os);
  EXPECT_EQ(os.str(), "iter,residual,free_energy\n0,1.5,-0.25\n1,0.10000000000000001,-0.29999999999999999\n");
  std::ostringstream sw;
  write_sweep_csv("phi", {{0.001, -0.00075, 1e-9}}, sw);
  EXPECT_EQ(sw.str(), "eps,phi,residual_vs_series\n0.001,-0.00075000000000000002,1.0000000000000001e-09\n");
}
