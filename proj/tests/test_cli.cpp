#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

#include "varfield/catalog.hpp"
#include "varfield/report.hpp"
#include "varfield/suites.hpp"

using namespace varfield;

TEST_CASE("catalog listing and loading") {
  const auto names = catalog_names();
  CHECK(names.size() >= 6);
  for (const auto& n : names) {
    const ProblemSpec p = load_catalog_problem(n);
    CHECK(p.name == n);
    CHECK(p.k <= p.n);
    CHECK(p.t_lo.size() == p.n);
    CHECK(p.x_lo.size() == p.nu);
  }
  CHECK_THROWS_AS(load_catalog_problem("no_such_problem"), std::invalid_argument);
}

TEST_CASE("problem files") {
  SUBCASE("a valid polynomial problem loads and runs") {
    const char* path = "vf_problem_ok.json";
    {
      std::ofstream out(path);
      out << R"({
        "name": "user_dirichlet",
        "n": 2, "nu": 2, "k": 1,
        "lagrangian": {"type": "polynomial",
                       "terms": [{"coeff": 0.5, "q": [[0,0,2]]},
                                 {"coeff": 0.5, "q": [[0,1,2]]},
                                 {"coeff": 0.5, "q": [[1,0,2]]},
                                 {"coeff": 0.5, "q": [[1,1,2]]}]},
        "slope_field": {"type": "zero"},
        "samples": 2
      })";
    }
    const ProblemSpec p = load_problem_file(path);
    CHECK(p.name == "user_dirichlet");
    const MatrixXd q = MatrixXd::Ones(2, 2);
    CHECK(p.lagrangian->eval(VectorXd::Zero(2), VectorXd::Zero(2), q) ==
          doctest::Approx(2.0));
    const Report r = run_suite(p, {"excess"}, 3);
    CHECK(r.overall_pass());
    std::remove(path);
  }
  SUBCASE("malformed files report the offending line") {
    const char* path = "vf_problem_bad.json";
    {
      std::ofstream out(path);
      out << "{\n  \"name\": \"broken\",\n  \"n\": 2,\n  oops\n}\n";
    }
    try {
      load_problem_file(path);
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find(":4:") != std::string::npos);  // line number of the defect
    }
    std::remove(path);
  }
  SUBCASE("inconsistent dimensions are rejected") {
    const char* path = "vf_problem_dims.json";
    {
      std::ofstream out(path);
      out << R"({"name": "bad_dims", "n": 2, "nu": 2, "k": 3})";
    }
    CHECK_THROWS_AS(load_problem_file(path), std::runtime_error);
    std::remove(path);
  }
}

TEST_CASE("numeric failures are recorded and the suite continues") {
  // An integrand that blows up away from the slope field wrecks the
  // descent-based checks but must not abort the rest of the suite.
  ProblemSpec p = load_catalog_problem("dirichlet_k1");
  Lagrangian bad = *p.lagrangian;
  bad.eval = [](const VectorXd&, const VectorXd&, const MatrixXd& q) {
    const double v = 0.5 * q.squaredNorm();
    return v > 0.5 ? std::numeric_limits<double>::quiet_NaN() : v;
  };
  bad.grad_q = nullptr;
  bad.hess_q = nullptr;
  p.lagrangian = bad;
  const Report r = run_suite(p, {"excess"}, 2);
  CHECK(!r.overall_pass());
  int aborted = 0, completed = 0;
  for (const auto& c : r.checks) {
    if (c.note.rfind("check aborted", 0) == 0) ++aborted;
    if (c.pass) ++completed;
  }
  CHECK(aborted > 0);
  CHECK(completed > 0);  // unaffected checks still ran
}

TEST_CASE("suite reports are deterministic under a fixed seed") {
  const ProblemSpec p = load_catalog_problem("det_form_2x2");
  const Report a = run_suite(p, {"conditions"}, 7);
  const Report b = run_suite(p, {"conditions"}, 7);
  CHECK(a.to_json().dump(2) == b.to_json().dump(2));
  const Report c = run_suite(p, {"conditions"}, 8);
  CHECK(a.to_json().dump(2) != c.to_json().dump(2));
}

TEST_CASE("suite structure") {
  const ProblemSpec p = load_catalog_problem("dirichlet_k1");
  const Report r = run_suite(p, {"excess"}, 1);
  CHECK(!r.checks.empty());
  // Every check appears exactly once and carries a law tag.
  std::set<std::string> seen;
  for (const auto& c : r.checks) {
    CHECK(seen.insert(c.name).second);
    CHECK(!c.law.empty());
    CHECK(c.tolerance > 0.0);
  }
  CHECK(r.overall_pass());

  CHECK_THROWS_AS(run_suite(p, {"bogus"}, 1), std::invalid_argument);
}

TEST_CASE("hopf suites pass on their problems") {
  {
    const Report r = run_suite(load_catalog_problem("hopf3"), {"hopf"}, 5);
    CHECK(!r.checks.empty());
    CHECK(r.overall_pass());
    bool note_seen = false;
    for (const auto& c : r.checks)
      if (c.name == "hopf.obstruction_nonzero") {
        note_seen = true;
        CHECK(c.witness["nonzero_fraction"].get<double>() >= 0.99);
      }
    CHECK(note_seen);
  }
  {
    const Report r = run_suite(load_catalog_problem("hopf7"), {"hopf"}, 5);
    CHECK(!r.checks.empty());
    CHECK(r.overall_pass());
  }
}
