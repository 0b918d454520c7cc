#include "varfield/catalog.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace varfield {

using nlohmann::json;

std::vector<std::pair<VectorXd, VectorXd>> ProblemSpec::sample_points() const {
  std::vector<std::pair<VectorXd, VectorXd>> pts;
  const int nt = int(t_lo.size()), nx = int(x_lo.size());
  const int s = std::max(samples, 1);
  const long total = long(std::pow(s, nt + nx));
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    VectorXd t(nt), x(nx);
    for (int i = 0; i < nt; ++i) {
      const int c = int(rem % s);
      rem /= s;
      t(i) = (s == 1) ? 0.5 * (t_lo(i) + t_hi(i))
                      : t_lo(i) + (t_hi(i) - t_lo(i)) * c / double(s - 1);
    }
    for (int i = 0; i < nx; ++i) {
      const int c = int(rem % s);
      rem /= s;
      x(i) = (s == 1) ? 0.5 * (x_lo(i) + x_hi(i))
                      : x_lo(i) + (x_hi(i) - x_lo(i)) * c / double(s - 1);
    }
    pts.emplace_back(std::move(t), std::move(x));
  }
  return pts;
}

namespace {

Lagrangian dirichlet_lagrangian(int n, int nu) {
  Lagrangian L;
  L.n = n;
  L.nu = nu;
  L.eval = [](const VectorXd&, const VectorXd&, const MatrixXd& q) {
    return 0.5 * q.squaredNorm();
  };
  L.grad_q = [](const VectorXd&, const VectorXd&, const MatrixXd& q) { return q; };
  L.hess_q = [n, nu](const VectorXd&, const VectorXd&, const MatrixXd&) {
    Tensor4 H(n, nu, n, nu);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < nu; ++a) H(i, a, i, a) = 1.0;
    return H;
  };
  return L;
}

ProblemSpec make_dirichlet_k1() {
  ProblemSpec p;
  p.name = "dirichlet_k1";
  p.n = 3;
  p.nu = 2;
  p.k = 1;
  p.lagrangian = dirichlet_lagrangian(3, 2);
  SlopeField g;
  g.eval = [](const VectorXd&, const VectorXd&) { return MatrixXd::Zero(3, 2); };
  p.slope = g;
  p.t_lo = VectorXd::Constant(3, -1.0);
  p.t_hi = VectorXd::Constant(3, 1.0);
  p.x_lo = VectorXd::Constant(2, -1.0);
  p.x_hi = VectorXd::Constant(2, 1.0);
  p.samples = 3;
  return p;
}

ProblemSpec make_det_form_2x2() {
  ProblemSpec p;
  p.name = "det_form_2x2";
  p.n = 2;
  p.nu = 2;
  p.k = 1;
  Lagrangian L;
  L.n = 2;
  L.nu = 2;
  L.eval = [](const VectorXd&, const VectorXd&, const MatrixXd& q) { return q.determinant(); };
  L.grad_q = [](const VectorXd&, const VectorXd&, const MatrixXd& q) {
    MatrixXd g(2, 2);
    g << q(1, 1), -q(1, 0), -q(0, 1), q(0, 0);
    return g;
  };
  p.lagrangian = L;
  SlopeField g;
  g.eval = [](const VectorXd&, const VectorXd&) { return MatrixXd::Identity(2, 2); };
  p.slope = g;

  // Quadratic form of the determinant on 2 x 2 jets: null on rank one,
  // indefinite on the full space.
  QuadFormTensor a;
  a.n = 2;
  a.nu = 2;
  a.a = Tensor4(2, 2, 2, 2);
  // value on q is 2 det(q) = q00 q11 - q01 q10 + symmetric counterpart
  a.a(0, 1, 0, 1) = 1.0;  // alpha=0,beta=1,i=0,j=1 : q(0,0) q(1,1)
  a.a(1, 0, 1, 0) = 1.0;
  a.a(1, 0, 0, 1) = -1.0;  // q(0,1) q(1,0)
  a.a(0, 1, 1, 0) = -1.0;
  p.quadform = a;
  p.geodesic_expected = false;  // the determinant integrand dips below its calibration

  p.t_lo = VectorXd::Constant(2, -1.0);
  p.t_hi = VectorXd::Constant(2, 1.0);
  p.x_lo = VectorXd::Constant(2, -1.0);
  p.x_hi = VectorXd::Constant(2, 1.0);
  p.samples = 3;
  return p;
}

ProblemSpec make_volume_kn() {
  ProblemSpec p;
  p.name = "volume_kn";
  p.n = 2;
  p.nu = 2;
  p.k = 2;
  Lagrangian L;
  L.n = 2;
  L.nu = 2;
  L.eval = [](const VectorXd&, const VectorXd&, const MatrixXd& q) {
    const MatrixXd G = MatrixXd::Identity(2, 2) + q * q.transpose();
    return std::sqrt(G.determinant());
  };
  p.lagrangian = L;
  SlopeField g;
  g.eval = [](const VectorXd&, const VectorXd&) {
    MatrixXd m(2, 2);
    m << 0.3, 0.1, -0.2, 0.4;
    return m;
  };
  p.slope = g;
  p.t_lo = VectorXd::Constant(2, -1.0);
  p.t_hi = VectorXd::Constant(2, 1.0);
  p.x_lo = VectorXd::Constant(2, -1.0);
  p.x_hi = VectorXd::Constant(2, 1.0);
  p.samples = 3;
  return p;
}

ProblemSpec make_oscillator() {
  ProblemSpec p;
  p.name = "oscillator";
  p.n = 1;
  p.nu = 2;
  p.k = 1;

  Lagrangian L;
  L.n = 1;
  L.nu = 2;
  L.eval = [](const VectorXd&, const VectorXd& x, const MatrixXd& q) {
    return 0.5 * q.squaredNorm() - 0.5 * x.squaredNorm();
  };
  L.grad_q = [](const VectorXd&, const VectorXd&, const MatrixXd& q) { return q; };
  p.lagrangian = L;

  SlopeField g;
  g.eval = [](const VectorXd&, const VectorXd&) { return MatrixXd::Zero(1, 2); };
  p.slope = g;

  // Complete solution S = tan(t) |x|^2 / 2 of S_t = |S_x|^2/2 + |x|^2/2,
  // the flow of { dx/dt = -dH/dq*, dq*/dt = dH/dx }.
  ActionFunctions S;
  S.n = 1;
  S.nu = 2;
  S.S.push_back([](const VectorXd& t, const VectorXd& x) {
    return 0.5 * std::tan(t(0)) * x.squaredNorm();
  });
  S.jacobians = [](const VectorXd& t, const VectorXd& x, MatrixXd& Mt, MatrixXd& Mx) {
    const double c = std::cos(t(0));
    Mt(0, 0) = 0.5 * x.squaredNorm() / (c * c);
    Mx(0, 0) = std::tan(t(0)) * x(0);
    Mx(0, 1) = std::tan(t(0)) * x(1);
  };
  p.actions = S;

  HamiltonianData H;
  H.n = 1;
  H.nu = 2;
  H.eval = [](const VectorXd&, const VectorXd& x, const MatrixXd& qs) {
    return 0.5 * qs.squaredNorm() + 0.5 * x.squaredNorm();
  };
  p.hamiltonian = H;
  p.hamiltonian_blocks = [](const VectorXd&) {
    HamiltonianBlocks b;
    b.hxx = MatrixXd::Identity(2, 2);
    b.hxq = MatrixXd::Zero(2, 2);
    b.hqq = MatrixXd::Identity(2, 2);
    return b;
  };

  p.t_lo = VectorXd::Constant(1, 0.3);
  p.t_hi = VectorXd::Constant(1, 0.9);
  p.x_lo = VectorXd::Constant(2, 0.6);
  p.x_hi = VectorXd::Constant(2, 1.4);
  p.samples = 5;
  return p;
}

ProblemSpec make_hopf3() {
  ProblemSpec p;
  p.name = "hopf3";
  p.n = 1;
  p.nu = 2;
  p.k = 1;
  p.variant = "hopf3";
  p.t_lo = VectorXd::Constant(1, -1.0);
  p.t_hi = VectorXd::Constant(1, 1.0);
  p.x_lo = VectorXd::Constant(2, -1.0);
  p.x_hi = VectorXd::Constant(2, 1.0);
  p.samples = 9;
  return p;
}

ProblemSpec make_hopf7() {
  ProblemSpec p;
  p.name = "hopf7";
  p.n = 3;
  p.nu = 7;
  p.k = 3;
  p.variant = "hopf7";
  p.t_lo = VectorXd::Constant(3, -1.0);
  p.t_hi = VectorXd::Constant(3, 1.0);
  p.x_lo = VectorXd::Constant(7, -1.0);
  p.x_hi = VectorXd::Constant(7, 1.0);
  p.samples = 3;
  return p;
}

ProblemSpec make_linear_actions_k2() {
  ProblemSpec p;
  p.name = "linear_actions_k2";
  p.n = 3;
  p.nu = 2;
  p.k = 2;
  // S^i = c t^i + sum_a N(i,a) x^a with a fixed well-conditioned N.
  const double c = 1.3;
  MatrixXd N(3, 2);
  N << 0.7, -0.4, 0.2, 0.9, -0.5, 0.3;
  ActionFunctions S;
  S.n = 3;
  S.nu = 2;
  for (int i = 0; i < 3; ++i)
    S.S.push_back([i, c, N](const VectorXd& t, const VectorXd& x) {
      return c * t(i) + N.row(i).dot(x);
    });
  S.jacobians = [c, N](const VectorXd&, const VectorXd&, MatrixXd& Mt, MatrixXd& Mx) {
    Mt = c * MatrixXd::Identity(3, 3);
    Mx = N;
  };
  p.actions = S;

  // Determinant-type integrand of the same action family, used by the
  // moving-boundary checks.
  Lagrangian L;
  L.n = 3;
  L.nu = 2;
  L.eval = [c, N](const VectorXd&, const VectorXd&, const MatrixXd& q) {
    const MatrixXd C = c * MatrixXd::Identity(3, 3) + N * q.transpose();
    return C.determinant();
  };
  p.lagrangian = L;
  SlopeField g;
  g.eval = [](const VectorXd&, const VectorXd&) {
    MatrixXd m(3, 2);
    m << 0.1, 0.2, -0.3, 0.05, 0.15, -0.1;
    return m;
  };
  p.slope = g;
  p.geodesic_expected = false;  // determinant-type integrand

  p.t_lo = VectorXd::Constant(3, -1.0);
  p.t_hi = VectorXd::Constant(3, 1.0);
  p.x_lo = VectorXd::Constant(2, -1.0);
  p.x_hi = VectorXd::Constant(2, 1.0);
  p.samples = 3;
  return p;
}

int line_of_offset(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

double poly_term_eval(const json& term, const VectorXd& t, const VectorXd& x, const MatrixXd& q) {
  double v = term.value("coeff", 1.0);
  if (term.contains("q"))
    for (const auto& f : term["q"])
      v *= std::pow(q(f.at(0).get<int>(), f.at(1).get<int>()), f.at(2).get<int>());
  if (term.contains("x"))
    for (const auto& f : term["x"]) v *= std::pow(x(f.at(0).get<int>()), f.at(1).get<int>());
  if (term.contains("t"))
    for (const auto& f : term["t"]) v *= std::pow(t(f.at(0).get<int>()), f.at(1).get<int>());
  return v;
}

Lagrangian lagrangian_from_json(const json& spec, int n, int nu) {
  const std::string type = spec.value("type", "polynomial");
  if (type == "dirichlet") return dirichlet_lagrangian(n, nu);
  if (type != "polynomial")
    throw std::runtime_error("unknown lagrangian type '" + type + "'");
  const json terms = spec.value("terms", json::array());
  const double c0 = spec.value("const", 0.0);
  Lagrangian L;
  L.n = n;
  L.nu = nu;
  L.eval = [terms, c0](const VectorXd& t, const VectorXd& x, const MatrixXd& q) {
    double acc = c0;
    for (const auto& term : terms) acc += poly_term_eval(term, t, x, q);
    return acc;
  };
  return L;
}

SlopeField slope_from_json(const json& spec, int n, int nu) {
  const std::string type = spec.value("type", "zero");
  SlopeField g;
  if (type == "zero") {
    g.eval = [n, nu](const VectorXd&, const VectorXd&) { return MatrixXd::Zero(n, nu); };
    return g;
  }
  if (type == "constant") {
    MatrixXd m(n, nu);
    const auto& rows = spec.at("entries");
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < nu; ++a) m(i, a) = rows.at(i).at(a).get<double>();
    g.eval = [m](const VectorXd&, const VectorXd&) { return m; };
    return g;
  }
  throw std::runtime_error("unknown slope_field type '" + type + "'");
}

ActionFunctions actions_from_json(const json& spec, int n, int nu) {
  if (spec.value("type", "linear") != "linear")
    throw std::runtime_error("only linear action_functions are supported in problem files");
  MatrixXd Tc(n, n), Xc(n, nu);
  VectorXd c0 = VectorXd::Zero(n);
  const auto& tc = spec.at("t_coeffs");
  const auto& xc = spec.at("x_coeffs");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) Tc(i, j) = tc.at(i).at(j).get<double>();
    for (int a = 0; a < nu; ++a) Xc(i, a) = xc.at(i).at(a).get<double>();
  }
  if (spec.contains("const"))
    for (int i = 0; i < n; ++i) c0(i) = spec["const"].at(i).get<double>();
  ActionFunctions S;
  S.n = n;
  S.nu = nu;
  for (int i = 0; i < n; ++i)
    S.S.push_back([i, Tc, Xc, c0](const VectorXd& t, const VectorXd& x) {
      return c0(i) + Tc.row(i).dot(t) + Xc.row(i).dot(x);
    });
  return S;
}

VectorXd vec_from_json(const json& a) {
  VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v(i) = a.at(i).get<double>();
  return v;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"dirichlet_k1", "det_form_2x2", "volume_kn", "oscillator",
          "hopf3", "hopf7", "linear_actions_k2"};
}

ProblemSpec load_catalog_problem(const std::string& name) {
  if (name == "dirichlet_k1") return make_dirichlet_k1();
  if (name == "det_form_2x2") return make_det_form_2x2();
  if (name == "volume_kn") return make_volume_kn();
  if (name == "oscillator") return make_oscillator();
  if (name == "hopf3") return make_hopf3();
  if (name == "hopf7") return make_hopf7();
  if (name == "linear_actions_k2") return make_linear_actions_k2();
  throw std::invalid_argument("unknown catalog problem '" + name + "'");
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ":" + std::to_string(line_of_offset(text, e.byte)) +
                             ": " + e.what());
  }
  try {
    ProblemSpec p;
    p.name = j.value("name", path);
    p.n = j.at("n").get<int>();
    p.nu = j.at("nu").get<int>();
    p.k = j.value("k", 1);
    if (p.n < 1 || p.nu < 1 || p.k < 1 || p.k > p.n)
      throw std::runtime_error("inconsistent dimensions: need n, nu >= 1 and 1 <= k <= n");
    if (j.contains("lagrangian")) p.lagrangian = lagrangian_from_json(j["lagrangian"], p.n, p.nu);
    if (j.contains("slope_field")) p.slope = slope_from_json(j["slope_field"], p.n, p.nu);
    else if (p.lagrangian) {
      SlopeField g;
      const int n = p.n, nu = p.nu;
      g.eval = [n, nu](const VectorXd&, const VectorXd&) { return MatrixXd::Zero(n, nu); };
      p.slope = g;
    }
    if (j.contains("action_functions")) p.actions = actions_from_json(j["action_functions"], p.n, p.nu);
    if (j.contains("domain")) {
      const auto& d = j["domain"];
      p.t_lo = vec_from_json(d.at("t_lo"));
      p.t_hi = vec_from_json(d.at("t_hi"));
      p.x_lo = vec_from_json(d.at("x_lo"));
      p.x_hi = vec_from_json(d.at("x_hi"));
      if (p.t_lo.size() != p.n || p.x_lo.size() != p.nu)
        throw std::runtime_error("domain box dimensions disagree with n, nu");
    } else {
      p.t_lo = VectorXd::Constant(p.n, -1.0);
      p.t_hi = VectorXd::Constant(p.n, 1.0);
      p.x_lo = VectorXd::Constant(p.nu, -1.0);
      p.x_hi = VectorXd::Constant(p.nu, 1.0);
    }
    p.samples = j.value("samples", 5);
    p.seed = j.value("seed", std::uint64_t(1));
    return p;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

ProblemSpec resolve_problem(const std::string& name_or_path) {
  for (const auto& n : catalog_names())
    if (n == name_or_path) return load_catalog_problem(n);
  return load_problem_file(name_or_path);
}

}  // namespace varfield
