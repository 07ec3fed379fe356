#include "soscert/io.hpp"

#include <gtest/gtest.h>

#include "soscert/errors.hpp"
#include "test_util.hpp"

using namespace soscert;
using namespace soscert::testing;

namespace {

const char* kProblem = R"(# comment
variables: x, y
f: x + y + 3
g: y
h: x^2 - 1
h: y^2 - x - 2
radical: true
[options]
mode = nonneg
engine = sdp
order = 2, 3
precision-start = 20
max-bits = 512
seed = 7
tol = 1e-6
)";

int error_line(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(ProblemFile, ParsesAllFields) {
  const ProblemInstance p = parse_problem(kProblem);
  EXPECT_EQ(p.variables, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(p.f, P("x+y+3"));
  ASSERT_EQ(p.g.size(), 1u);
  ASSERT_EQ(p.h.size(), 2u);
  EXPECT_EQ(p.h[1], P("y^2-x-2"));
  EXPECT_EQ(p.radical, std::optional<bool>(true));
  EXPECT_EQ(p.options.mode, Mode::Nonnegative);
  EXPECT_EQ(p.options.engine, Engine::Sdp);
  EXPECT_EQ(p.options.order, (std::vector<unsigned>{2, 3}));
  EXPECT_EQ(p.options.precision_start, 20u);
  EXPECT_EQ(p.options.max_bits, 512u);
  EXPECT_EQ(p.options.seed, 7u);
  EXPECT_DOUBLE_EQ(p.options.tol, 1e-6);
}

TEST(ProblemFile, RoundTrip) {
  const ProblemInstance p = parse_problem(kProblem);
  const ProblemInstance back = parse_problem(write_problem(p));
  EXPECT_EQ(back.variables, p.variables);
  EXPECT_EQ(back.f, p.f);
  EXPECT_EQ(back.g, p.g);
  EXPECT_EQ(back.h, p.h);
  EXPECT_EQ(back.radical, p.radical);
  EXPECT_EQ(back.options.mode, p.options.mode);
  EXPECT_EQ(back.options.engine, p.options.engine);
  EXPECT_EQ(back.options.order, p.options.order);
  EXPECT_EQ(back.options.seed, p.options.seed);
  EXPECT_EQ(write_problem(back), write_problem(p));
}

TEST(ProblemFile, EmptyEqualities) {
  try {
    parse_problem("variables: x\nf: x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("at least one equality constraint required"), std::string::npos);
  }
}

TEST(ProblemFile, LineNumberedErrors) {
  EXPECT_EQ(error_line("variables: x\nf: x +\nh: x\n"), 2);
  EXPECT_EQ(error_line("variables: x\nf: x\nh: z\n"), 3);
  EXPECT_EQ(error_line("variables: x\nf: x\nh: x\nbogus: 1\n"), 4);
  EXPECT_EQ(error_line("variables: x\nf: x\nh: x\n[options]\nmode = sideways\n"), 5);
  EXPECT_GT(error_line("f: x\nh: x\n"), 0);
}

TEST(ProblemFile, RejectsDuplicateF) { EXPECT_THROW(parse_problem("variables: x\nf: x\nf: 1\nh: x\n"), ParseError); }

TEST(Options, Parsers) {
  EXPECT_EQ(parse_mode("strict"), Mode::Strict);
  EXPECT_EQ(parse_mode("nonneg"), Mode::Nonnegative);
  EXPECT_EQ(parse_engine("constructive"), Engine::Constructive);
  EXPECT_THROW(parse_engine("magic"), ParseError);
  EXPECT_EQ(parse_order("4"), (std::vector<unsigned>{4}));
  EXPECT_EQ(parse_order("1,2, 3"), (std::vector<unsigned>{1, 2, 3}));
  EXPECT_THROW(parse_order("1,-2"), ParseError);
}

TEST(CertificateFile, RoundTrip) {
  Certificate c;
  c.mode = Mode::Nonnegative;
  c.variables = {"x", "y"};
  c.blocks = {{{Q("3/2"), P("1 + x/3")}, {Q("1"), P("x*y - 2/7")}}, {{Q("1/5"), P("y")}}};
  c.cofactors = {P("-x/4"), P("0")};
  c.witnesses = {{P("1"), P("y")}, {P("x")}};
  c.nu0 = {Integer(2), Integer(49)};
  c.nu1 = 5;
  c.nu2 = 28;
  const std::string text = write_certificate(c);
  const Certificate back = parse_certificate(text);
  EXPECT_EQ(back.mode, c.mode);
  EXPECT_EQ(back.variables, c.variables);
  ASSERT_EQ(back.blocks.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    ASSERT_EQ(back.blocks[i].size(), c.blocks[i].size());
    for (std::size_t k = 0; k < c.blocks[i].size(); ++k) {
      EXPECT_EQ(back.blocks[i][k].weight, c.blocks[i][k].weight);
      EXPECT_EQ(back.blocks[i][k].square, c.blocks[i][k].square);
    }
  }
  EXPECT_EQ(back.cofactors, c.cofactors);
  EXPECT_EQ(back.witnesses, c.witnesses);
  EXPECT_EQ(back.nu0, c.nu0);
  EXPECT_EQ(back.nu1, c.nu1);
  EXPECT_EQ(back.nu2, c.nu2);
  EXPECT_EQ(write_certificate(back), text);
}

TEST(CertificateFile, RationalsReduced) {
  const Certificate c = parse_certificate("mode: strict\nvariables: x\nblock 0\nweight 4/6 square 2/4*x\n");
  EXPECT_EQ(c.blocks[0][0].weight, Q("2/3"));
  const std::string text = write_certificate(c);
  EXPECT_NE(text.find("2/3"), std::string::npos);
  EXPECT_EQ(text.find("4/6"), std::string::npos);
}

TEST(CertificateFile, Errors) {
  EXPECT_THROW(parse_certificate("mode: strict\nvariables: x\nweight 1 square x\n"), ParseError);
  EXPECT_THROW(parse_certificate("mode: strict\nvariables: x\nblock 0\nweight one square x\n"), ParseError);
  EXPECT_THROW(parse_certificate("mode: strict\nvariables: x\ncofactor 0 x\n"), ParseError);
  EXPECT_THROW(read_file("/nonexistent/dir/file"), ParseError);
}
