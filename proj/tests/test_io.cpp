#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vilenkin/error.hpp"
#include "vilenkin/io.hpp"

using namespace vilenkin;

TEST(Csv, TwelveSignificantDigits) {
  EXPECT_EQ(io::fixed12(1.0 / 3), "0.333333333333");
  EXPECT_EQ(io::fixed12(2.0), "2");
  EXPECT_EQ(io::fixed12(-1e-20), "-1e-20");
}

TEST(Csv, GridRoundTripWithinPrecision) {
  const auto m = GeneratorSequence::parse("(2,3)^");
  std::mt19937_64 rng(2);
  const GridFunction f(m, 3, oracle::random_function(12, rng));
  std::stringstream ss;
  io::write_csv(ss, f);
  const auto g = io::read_grid_function(ss, false, m, 3);
  for (Index i = 0; i < 12; ++i) EXPECT_NEAR(std::abs(f[i] - g[i]), 0, 1e-11 * std::max(1.0, std::abs(f[i])));
}

TEST(Csv, MalformedInputThrows) {
  const auto m = GeneratorSequence::parse("2^");
  std::stringstream bad("index,re,im\n0,1,0\n2,1,0\n");
  EXPECT_THROW(io::read_grid_function(bad, false, m, 1), ParseError);
  std::stringstream short_file("0,1,0\n");
  EXPECT_THROW(io::read_grid_function(short_file, false, m, 1), ParseError);
  std::stringstream junk("0,x,0\n1,0,0\n");
  EXPECT_THROW(io::read_grid_function(junk, false, m, 1), ParseError);
}

TEST(Binary, ExactRoundTripAndLayout) {
  const auto m = GeneratorSequence::parse("(2,3,4)^");
  std::mt19937_64 rng(5);
  const GridFunction f(m, 3, oracle::random_function(24, rng));
  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  io::write_binary(ss, f);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 4 + 4 + 3 * 4 + 24 * 16u);
  EXPECT_EQ(bytes.substr(0, 4), "VLK1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 3);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 3);
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 4);
  const auto g = io::read_grid_function(ss, true, m, 3);
  EXPECT_EQ(f.data(), g.data());
}

TEST(Binary, HeaderMismatchAndTruncation) {
  const auto m = GeneratorSequence::parse("2^");
  GridFunction f(m, 3);
  std::stringstream ss;
  io::write_binary(ss, f);
  const std::string bytes = ss.str();
  std::stringstream wrong(bytes);
  EXPECT_THROW(io::read_grid_function(wrong, true, GeneratorSequence::parse("3^"), 3), ParseError);
  std::stringstream cut(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(io::read_binary(cut), ParseError);
  std::stringstream magic("XXXX");
  EXPECT_THROW(io::read_binary(magic), ParseError);
}

TEST(SpecJson, RoundTrip) {
  const auto m = GeneratorSequence::parse("(2,3)^");
  const auto spec = build_counterexample(m, 2.0 / 3, default_alphas(m, 8), LambdaRule::divergent,
                                         PhiSequence::parse("log"), 8);
  const auto j = io::to_json(spec);
  for (const char* key : {"p", "alphas", "lambdas", "rule", "phi", "N", "m", "lambda_max"})
    EXPECT_TRUE(j.contains(key)) << key;
  const auto back = io::spec_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.alphas, spec.alphas);
  EXPECT_EQ(back.lambdas, spec.lambdas);
  EXPECT_EQ(back.p, spec.p);
  EXPECT_EQ(back.rule, spec.rule);
  EXPECT_EQ(back.realized.data(), spec.realized.data());
  EXPECT_THROW(io::spec_from_json(nlohmann::json{{"p", 0.5}}), ParseError);
}

TEST(ScenarioJson, CarriesEverything) {
  ScenarioResult r;
  r.scenario = "x";
  r.parameters = {{"m", "2^"}};
  r.seed = 9;
  r.columns = {"a", "b"};
  r.rows = {{1.0 / 3, 2}};
  r.constants = {{"c", 0.1}};
  r.trace = {1, 2};
  r.verdict = Verdict::growing;
  const auto j = io::to_json(r);
  EXPECT_EQ(j["verdict"], "growing");
  EXPECT_EQ(j["rows"][0][0].get<double>(), 1.0 / 3);  // binary64 round trip
  EXPECT_EQ(nlohmann::json::parse(j.dump())["rows"][0][0].get<double>(), 1.0 / 3);
  std::ostringstream csv;
  io::write_csv(csv, r);
  EXPECT_EQ(csv.str(), "a,b\n0.333333333333,2\n");
  std::ostringstream svg;
  io::write_svg(svg, r);
  EXPECT_NE(svg.str().find("<polyline"), std::string::npos);
  EXPECT_NE(svg.str().find("log10"), std::string::npos);
}

TEST(NormReportCsv, Columns) {
  NormReport a;
  a.n = 3;
  a.resolution = 4;
  a.p = 1;
  a.value = 1.5;
  a.lower_bound = 0.5;
  NormReport b = a;
  b.kind = NormKind::Hardy;
  b.lower_bound.reset();
  std::ostringstream os;
  const NormReport rows[] = {a, b};
  io::write_csv(os, rows);
  EXPECT_EQ(os.str(), "n,N,p,kind,value,lower_bound,upper_bound\n3,4,1,Lp,1.5,0.5,\n3,4,1,Hardy,1.5,,\n");
}
