#include <doctest.h>

#include "gabor/expression.hpp"

using namespace gabor;

namespace {

PhasePoint pt(double x, double p) { return (PhasePoint(2) << x, p).finished(); }

std::size_t error_offset(const std::string& src, Index n = 1) {
  try {
    parse_hamiltonian(src, n);
  } catch (const ParseError& e) {
    return e.offset();
  }
  return std::string::npos;
}

}  // namespace

TEST_CASE("parser examples") {
  const Expression e = parse_hamiltonian("p1^2/2 + x1^4/4", 1);
  CHECK(e.value(pt(1.0, 2.0)) == doctest::Approx(2.25));
  CHECK(error_offset("x1 +") == 4);
  CHECK(error_offset("x1 $ 2") == 3);
  CHECK(error_offset("x3", 2) == 0);
  CHECK(error_offset("sin(x1, p1)") == 0);
  CHECK(error_offset("(x1") == 3);
  CHECK(error_offset("x1 p1") == 3);
}

TEST_CASE("error kinds carry spans and expectations") {
  try {
    parse_hamiltonian("2 * foo", 1);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::unknown_identifier);
    CHECK(e.span().begin == 4);
    CHECK(e.span().end == 7);
  }
  try {
    parse_hamiltonian("x1 *", 1);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::parse);
    CHECK_FALSE(e.expected().empty());
  }
}

TEST_CASE("precedence") {
  const PhasePoint z = pt(2.0, 3.0);
  CHECK(parse_hamiltonian("-x1^2", 1).value(z) == doctest::Approx(-4.0));
  CHECK(parse_hamiltonian("2^3^2", 1).value(z) == doctest::Approx(512.0));
  CHECK(parse_hamiltonian("x1 - p1 - 1", 1).value(z) == doctest::Approx(-2.0));
  CHECK(parse_hamiltonian("p1 / x1 / 2", 1).value(z) == doctest::Approx(0.75));
  CHECK(parse_hamiltonian("1e-1 * x1 + .5", 1).value(z) == doctest::Approx(0.7));
  CHECK(parse_hamiltonian("t*x1", 1).value(z, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("probe equivalence with the builtin harmonic") {
  const Expression e = parse_hamiltonian("(x1^2+p1^2)/2", 1);
  const Hamiltonian h = builtin_hamiltonian("harmonic");
  for (int k = 0; k < 100; ++k) {
    const PhasePoint z = pt(std::sin(1.7 * k) * 3, std::cos(0.9 * k + 0.2) * 2);
    CHECK(std::abs(e.value(z) - h.value(z)) < 1e-12);
  }
}

TEST_CASE("dual-number derivatives") {
  const auto d = parse_hamiltonian("(x1^2+p1^2)/2", 1).derivatives(pt(1.0, 0.0));
  CHECK(d.value == doctest::Approx(0.5));
  CHECK(d.gradient(0) == doctest::Approx(1.0));
  CHECK(d.gradient(1) == doctest::Approx(0.0));
  CHECK((d.hessian - Mat::Identity(2, 2)).norm() < 1e-15);

  const auto c = parse_hamiltonian("3", 1).derivatives(pt(0.3, 0.1));
  CHECK(c.gradient.norm() == 0.0);
  CHECK(c.hessian.norm() == 0.0);

  const auto f = parse_hamiltonian("sin(x1*p2) + exp(p1)/sqrt(x2) + x1^3", 2).derivatives(
      (PhasePoint(4) << 0.5, 2.0, -0.3, 0.7).finished());
  // d/dx2 of exp(p1) x2^{-1/2}
  CHECK(f.gradient(1) == doctest::Approx(-0.5 * std::exp(-0.3) * std::pow(2.0, -1.5)));
  CHECK(f.hessian(0, 3) == doctest::Approx(std::cos(0.35) - 0.35 * std::sin(0.35)));
  CHECK(f.hessian(3, 0) == f.hessian(0, 3));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(parse_hamiltonian("sqrt(x1)", 1).value(pt(-1.0, 0.0)), EvalError);
  CHECK_THROWS_AS(parse_hamiltonian("1/x1", 1).value(pt(0.0, 0.0)), EvalError);
  CHECK_THROWS_AS(parse_hamiltonian("x1^0.5", 1).value(pt(-2.0, 0.0)), EvalError);
  CHECK(parse_hamiltonian("x1^3", 1).value(pt(-2.0, 0.0)) == doctest::Approx(-8.0));
  try {
    parse_hamiltonian("p1 + sqrt(x1)", 1).value(pt(-1.0, 0.0));
  } catch (const EvalError& e) {
    CHECK(e.span().begin == 5);
  }
}

TEST_CASE("printing reparses") {
  for (const char* s : {"-x1^2", "(-x1)^2", "2^3^2", "(2^3)^2", "x1-(p1-1)", "-(x1+p1)*t",
                        "x1/(p1*2)", "-1.5e-07*x1", "sin(-x1)^2", "2^-x1"}) {
    const Expression e = parse_hamiltonian(s, 1);
    const Expression r = parse_hamiltonian(e.to_string(), 1);
    CAPTURE(s);
    CAPTURE(e.to_string());
    CHECK(r.to_string() == e.to_string());
    const PhasePoint z = pt(0.7, -1.3);
    CHECK(r.value(z, 0.4) == doctest::Approx(e.value(z, 0.4)).epsilon(1e-15));
  }
}

TEST_CASE("classification") {
  const Hamiltonian s = expression_hamiltonian(parse_hamiltonian("p1^2/2 + x1^4/4", 1));
  REQUIRE(s.separable_data());
  const Vec p = Vec::Constant(1, 2.0), x = Vec::Constant(1, 1.0);
  CHECK(s.separable_data()->U.value(p) == doctest::Approx(2.0));
  CHECK(s.separable_data()->V.gradient(x)(0) == doctest::Approx(1.0));
  CHECK_FALSE(expression_hamiltonian(parse_hamiltonian("x1*p1", 1)).separable_data());
  CHECK_FALSE(expression_hamiltonian(parse_hamiltonian("x1*t", 1)).autonomous());
}
