#include "varfield/forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace varfield {

FormValue wedge(const FormValue& a, const FormValue& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
  const int d = a.dim();
  FormValue out(d, a.grade() + b.grade());
  const auto ia = combinations(d, a.grade());
  const auto ib = combinations(d, b.grade());
  for (size_t p = 0; p < ia.size(); ++p) {
    const double ca = a.coeffs()(p);
    if (ca == 0.0) continue;
    for (size_t q = 0; q < ib.size(); ++q) {
      const double cb = b.coeffs()(q);
      if (cb == 0.0) continue;
      const int sgn = merge_sign(ia[p], ib[q]);
      if (sgn == 0) continue;
      MultiIndex merged;
      merged.reserve(ia[p].size() + ib[q].size());
      std::merge(ia[p].begin(), ia[p].end(), ib[q].begin(), ib[q].end(), std::back_inserter(merged));
      out[merged] += sgn * ca * cb;
    }
  }
  return out;
}

FormValue ext_derivative(const FormField& field, const VectorXd& point, const FdOptions& opt) {
  const int d = field.dim;
  const int g = field.grade;
  if (g >= d) throw std::invalid_argument("ext_derivative: grade must be below the chart dimension");
  // One pair of field evaluations per chart coordinate gives the partials
  // of every coefficient at once.
  std::vector<VectorXd> dcoeff(d);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int c = 0; c < d; ++c) {
    const double h = std::cbrt(eps) * std::max(1.0, std::abs(point(c))) * opt.step_scale;
    VectorXd p = point;
    p(c) = point(c) + h;
    const FormValue fp = field.eval(p);
    p(c) = point(c) - h;
    const FormValue fm = field.eval(p);
    if (!fp.coeffs().allFinite() || !fm.coeffs().allFinite())
      throw std::runtime_error("ext_derivative: non-finite field evaluation");
    dcoeff[c] = (fp.coeffs() - fm.coeffs()) / (2.0 * h);
  }
  FormValue out(d, g + 1);
  const auto targets = combinations(d, g + 1);
  for (size_t t = 0; t < targets.size(); ++t) {
    const MultiIndex& B = targets[t];
    double acc = 0.0;
    for (size_t pos = 0; pos < B.size(); ++pos) {
      MultiIndex rest;
      rest.reserve(B.size() - 1);
      for (size_t j = 0; j < B.size(); ++j)
        if (j != pos) rest.push_back(B[j]);
      const double sgn = (pos % 2 == 0) ? 1.0 : -1.0;
      acc += sgn * dcoeff[B[pos]](combination_rank(rest, d));
    }
    out.coeffs()(t) = acc;
  }
  return out;
}

FormValue det_rank1_update(const std::vector<FormValue>& phi,
                           const std::vector<FormValue>& a, const VectorXd& b) {
  const int n = int(phi.size());
  if (int(a.size()) != n || b.size() != n) throw std::invalid_argument("det_rank1_update: size mismatch");
  const int d = phi.empty() ? 0 : phi[0].dim();
  auto product = [&](int replaced) {
    FormValue acc(d, 0);
    acc.coeffs()(0) = 1.0;
    for (int i = 0; i < n; ++i) acc = wedge(acc, (i == replaced) ? a[i] : phi[i]);
    return acc;
  };
  FormValue out = product(-1);
  for (int j = 0; j < n; ++j) {
    FormValue term = product(j);
    term *= b(j);
    out += term;
  }
  return out;
}

}  // namespace varfield
