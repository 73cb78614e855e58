#include <doctest.h>

#include <cmath>
#include <string>

#include "phenopf/config.hpp"

using namespace phenopf;

namespace {

std::string replace_line(std::string text, const std::string& key, const std::string& value) {
  const auto at = text.find(key + " = ");
  REQUIRE(at != std::string::npos);
  const auto end = text.find('\n', at);
  return text.replace(at, end - at, key + " = " + value);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("reference values parse back") {
    std::string text = format_config(paper_config());
    text = replace_line(text, "eps", "1e-2");
    text = replace_line(text, "d_sigma", "1e2");
    const auto cfg = parse_config("# reference setup\n" + text);
    CHECK(cfg.eps == 1e-2);
    CHECK(cfg.d_sigma == 1e2);
    CHECK(cfg.b == 1e4);
    CHECK(cfg.theta == 0.5);
    CHECK(cfg.functions == FunctionChoices{});
  }

  TEST_CASE("format and parse round trip") {
    auto cfg = paper_config();
    cfg.theta = 0.3;
    cfg.nx = 64;
    cfg.functions.truncation = {"constant", {0.25}};
    const auto again = parse_config(format_config(cfg));
    CHECK(format_config(again) == format_config(cfg));
    CHECK(again.functions.truncation.params.at(0) == 0.25);
  }

  TEST_CASE("empty document names the first missing key") {
    try {
      parse_config("");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()) == "missing required key: eps");
    }
  }

  TEST_CASE("negative theta is a domain error") {
    const auto text = replace_line(format_config(paper_config()), "theta", "-0.1");
    try {
      parse_config(text);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("theta >= 0") != std::string::npos);
    }
  }

  TEST_CASE("syntax errors carry line and column") {
    const auto text = format_config(paper_config()) + "alpha = 5\n";
    CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("repeated key: alpha"), ConfigError);
    try {
      parse_config("eps = 1x\n");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() > 0);
    }
    CHECK_THROWS_AS(parse_config(format_config(paper_config()) + "bogus = 1\n"), ConfigError);
  }

  TEST_CASE("overrides re-run the domain checks") {
    auto cfg = paper_config();
    apply_override(cfg, "theta", "0.7");
    CHECK(cfg.theta == 0.7);
    CHECK_THROWS_AS(apply_override(cfg, "dt", "-1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "nope", "1"), ConfigError);
  }

  TEST_CASE("step count") {
    auto cfg = paper_config();
    CHECK(cfg.step_count() == 5400);
    cfg.t_end = 0.0;
    CHECK(cfg.step_count() == 0);
  }

  TEST_CASE("default functions") {
    const auto f = default_paper_functions();
    CHECK(f.q_rate(1.0) == 0.0);
    CHECK(f.fitness(1.0) == doctest::Approx(1.0));
    CHECK(f.fitness(0.0) == doctest::Approx(0.9));
    CHECK(f.truncation(-1.0) == 0.0);
    CHECK(f.truncation(1.0) == 1.0);
    CHECK(f.p_rate(0.3) == 1.5);
    CHECK(f.k_rate(1.7) == 1.0);
    // y = 1 maximizes the fitness and the net growth for any sigma > 0
    for (double sigma : {0.1, 1.0, 5.0}) {
      double best_y = 0.0, best = -1e300;
      for (int i = 0; i <= 2000; ++i) {
        const double y = 2.0 * i / 2000.0;
        const double g = sigma * f.p_rate(y) - f.q_rate(y);
        if (g > best) {
          best = g;
          best_y = y;
        }
      }
      CHECK(best_y == doctest::Approx(1.0));
    }
    // kernel density integrates to one over the phenotype domain
    double s = 0.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      s += w * f.kernel(0.0, 2.0 * i / n) * 2.0 / n;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("assumption checks") {
    const auto cfg = paper_config();
    auto fns = default_paper_functions();
    const auto ok = validate_assumptions(cfg, fns);
    CHECK(ok.all_passed());
    CHECK(ok.checks.size() == 7);

    auto bad_h = fns;
    bad_h.truncation = [](double) { return 2.0; };
    const auto r6 = validate_assumptions(cfg, bad_h);
    CHECK_FALSE(r6.all_passed());
    for (const auto& c : r6.checks) CHECK(c.passed == (c.id != "A6"));

    auto half_kernel = fns;
    half_kernel.kernel = [k = fns.kernel](double a, double b) { return 0.5 * k(a, b); };
    const auto r3 = validate_assumptions(cfg, half_kernel);
    for (const auto& c : r3.checks) CHECK(c.passed == (c.id != "A3"));

    // pure: same inputs, same report
    const auto again = validate_assumptions(cfg, fns);
    REQUIRE(again.checks.size() == ok.checks.size());
    for (std::size_t i = 0; i < ok.checks.size(); ++i) CHECK(again.checks[i].detail == ok.checks[i].detail);
  }

  TEST_CASE("nonnegativity bound holds for the reference parameters") {
    const auto cfg = paper_config();
    CHECK(nonnegativity_bound(cfg, default_paper_functions()) < 1.0);
    for (double theta : {0.0, 0.3, 0.7}) {
      auto c = cfg;
      c.theta = theta;
      CHECK(nonnegativity_bound(c, default_paper_functions()) < 1.0);
    }
  }

  TEST_CASE("unknown registry function") {
    FunctionChoices c;
    c.p_rate = {"cosine", {1.0}};
    CHECK_THROWS_AS(build_model_functions(c, 0.0, 2.0), ConfigError);
    c.p_rate = {"constant", {1.0, 2.0}};
    CHECK_THROWS_AS(build_model_functions(c, 0.0, 2.0), ConfigError);
  }
}
