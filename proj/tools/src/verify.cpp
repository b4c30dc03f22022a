#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "rmt/asymptotics.hpp"
#include "rmt/charpoly.hpp"
#include "rmt/kpairs.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/quadrature.hpp"
#include "rmt/specfun.hpp"
#include "rmt_cli/cli.hpp"

namespace rmt::cli {
namespace {

using json = nlohmann::ordered_json;

struct Check {
  std::string name;
  std::string cls;
  json values = json::object();
  double tolerance = 0.0;
  bool pass = false;
};

json cjson(Complex c) { return json::array({c.real(), c.imag()}); }

double zscore(Complex a, double sa, Complex b, double sb = 0.0) {
  const double diff = std::abs(a - b);
  const double se = std::hypot(sa, sb);
  if (se == 0.0) return diff < 1e-12 ? 0.0 : INFINITY;
  return diff / se;
}

class Suite {
 public:
  Suite(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  bool selected(EnsembleClass c) const {
    return std::find(cfg_.classes.begin(), cfg_.classes.end(), c) != cfg_.classes.end();
  }
  bool all_selected() const {
    return selected(EnsembleClass::A) && selected(EnsembleClass::AI) && selected(EnsembleClass::AII);
  }
  RngStream next_stream() { return {cfg_.seed, stream_++}; }
  std::uint64_t n() const { return cfg_.samples; }
  int max_n() const { return cfg_.max_n; }

  void emit(const Check& c) {
    json line;
    line["name"] = c.name;
    line["class"] = c.cls;
    line["values"] = c.values;
    line["tolerance"] = c.tolerance;
    line["pass"] = c.pass;
    out_ << line.dump() << '\n';
    ++count_;
    if (!c.pass) ++failed_;
  }

  void run(const std::string& name, const std::string& cls, const std::function<void(Check&)>& body) {
    Check c{name, cls};
    try {
      body(c);
    } catch (const std::exception& e) {
      c.values["error"] = e.what();
      c.pass = false;
    }
    emit(c);
  }

  int count() const { return count_; }
  int failed() const { return failed_; }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
  std::uint64_t stream_ = 0;
  int count_ = 0;
  int failed_ = 0;
};

const std::vector<std::pair<Complex, Complex>>& grid_points() {
  static const std::vector<std::pair<Complex, Complex>> pts{
      {{1.0, 0.0}, {1.0, 0.0}},  {{0.5, 0.5}, {0.8, -0.2}}, {{-1.2, 0.3}, {0.4, 0.9}},
      {{0.0, 1.5}, {1.1, 0.0}}, {{1.4, -0.6}, {-0.9, -0.7}}};
  return pts;
}

double n1_oracle(EnsembleClass c, double x) {
  return c == EnsembleClass::AII ? (x * x + 2.0 * x + 0.5) / 0.5 : 1.0 + x;
}

Complex n1_oracle(EnsembleClass c, Complex x) {
  return c == EnsembleClass::AII ? (x * x + 2.0 * x + 0.5) / 0.5 : 1.0 + x;
}

double edge_origin_value(EnsembleClass c) {
  switch (c) {
    case EnsembleClass::A: return 0.5;
    case EnsembleClass::AI: return 1.0 / std::sqrt(2.0 * std::numbers::pi);
    case EnsembleClass::AII: return std::atanh(1.0 / std::numbers::sqrt2) / std::sqrt(4.0 * std::numbers::pi);
  }
  return 0.0;
}

void class_checks(Suite& s, EnsembleClass c) {
  const std::string cn(class_name(c));

  s.run("dn_origin", cn, [&](Check& k) {
    const double expect[] = {1.0, 1.0, 0.5};
    const double v = dn_origin(c, 1);
    const double lv = std::exp(log_dn_origin(c, 5)), v5 = dn_origin(c, 5);
    k.values["N1"] = v;
    k.values["log_vs_linear_N5"] = std::abs(lv - v5) / v5;
    k.tolerance = 1e-13;
    k.pass = v == expect[static_cast<int>(c)] && std::abs(lv - v5) / v5 < k.tolerance;
  });

  s.run("n1_closed_form", cn, [&](Check& k) {
    double worst = 0.0;
    for (const auto& [z, w] : grid_points()) {
      const Complex x = z * w;
      const Complex o = n1_oracle(c, x);
      worst = std::max(worst, std::abs(dn_pair(c, 1, x).normalized - o) / std::max(1.0, std::abs(o)));
    }
    k.values["max_rel_error"] = worst;
    k.tolerance = 1e-12;
    k.pass = worst < k.tolerance;
  });

  s.run("n1_monte_carlo", cn, [&](Check& k) {
    CharPolyQuery q{c, 1, 1, {1.0}, {1.0}, NormMode::origin_normalized, {}, true};
    const McEstimate e = estimate_charpoly(q, s.n(), s.next_stream());
    const double z = zscore(e.mean, e.std_error, n1_oracle(c, 1.0));
    k.values["mc"] = cjson(e.mean);
    k.values["se"] = e.std_error;
    k.values["exact"] = n1_oracle(c, 1.0);
    k.values["z"] = z;
    k.tolerance = 4.0;
    k.pass = z < k.tolerance;
  });

  for (int n : {1, 2, 4, 8}) {
    if (n > s.max_n()) break;
    s.run("mc_grid_N" + std::to_string(n), cn, [&](Check& k) {
      double worst = 0.0;
      for (const auto& [z, w] : grid_points()) {
        CharPolyQuery q{c, n, 1, {z}, {w}, NormMode::origin_normalized, {}, true};
        const McEstimate e = estimate_charpoly(q, s.n(), s.next_stream());
        worst = std::max(worst, zscore(e.mean, e.std_error, dn_pair(c, n, z * w).normalized));
      }
      k.values["max_z"] = worst;
      k.tolerance = 4.0;
      k.pass = worst < k.tolerance;
    });
  }

  s.run("bulk_matches_global", cn, [&](Check& k) {
    double worst = 0.0;
    for (double r : {0.0, 0.2, 0.5, 0.8}) worst = std::max(worst, std::abs(bulk_limit(c, r) - global_limit(c, r)));
    k.values["max_abs_diff"] = worst;
    k.tolerance = 0.0;
    k.pass = worst == 0.0 && bulk_limit(c, 0.0) == 1.0;
  });

  s.run("edge_origin", cn, [&](Check& k) {
    const Complex v = edge_limit(c, 0.0);
    k.values["value"] = cjson(v);
    k.values["expected"] = edge_origin_value(c);
    k.tolerance = 1e-10;
    k.pass = std::abs(v - edge_origin_value(c)) < k.tolerance;
  });

  s.run("edge_tails", cn, [&](Check& k) {
    const double a = edge_limit(c, 6.0).real(), b = edge_tail(c, 6.0, TailOrder::next);
    const double right = std::abs(std::log(a) - std::log(b)) / std::abs(std::log(a));
    k.values["right_log_dev_y6"] = right;
    bool ok = right < 0.03;
    if (c == EnsembleClass::AII) {
      const double l = edge_limit(c, -8.0).real(), lt = edge_tail(c, -8.0, TailOrder::next);
      k.values["left_rel_dev_y-8"] = std::abs(l - lt) / std::abs(l);
      ok = ok && std::abs(l - lt) / std::abs(l) < 0.01;
    }
    k.tolerance = c == EnsembleClass::AII ? 0.01 : 0.03;
    k.pass = ok;
  });

  s.run("edge_convergence_rate", cn, [&](Check& k) {
    bool ok = true;
    for (double y : {-1.0, 0.0, 1.0}) {
      const ScanResult r = convergence_scan(c, y, {100, 400, 1600});
      const double rate = r.rate_exponent.value_or(NAN);
      k.values["rate_y" + fmt_num(y)] = rate;
      ok = ok && rate >= -0.7 && rate <= -0.3;
    }
    k.tolerance = 0.2;  // half-width of [-0.7, -0.3]
    k.pass = ok;
  });

  s.run("global_profile", cn, [&](Check& k) {
    switch (c) {
      case EnsembleClass::A: {
        const double in50 = rescaled_f(c, 50, 0.9), in100 = rescaled_f(c, 100, 0.9);
        const double out50 = rescaled_f(c, 50, 1.1), out100 = rescaled_f(c, 100, 1.1);
        k.values["r0.9"] = json::array({in50, in100});
        k.values["r1.1"] = json::array({out50, out100});
        k.pass = in100 > in50 && in100 < 1.0 && out100 < out50 && out100 > 0.0;
        break;
      }
      case EnsembleClass::AI: {
        const double v = rescaled_f(c, 50, 0.5);
        k.values["value"] = v;
        k.tolerance = 0.01;
        k.pass = std::abs(v - 0.75) < k.tolerance;
        break;
      }
      case EnsembleClass::AII: {
        const double v = rescaled_f(c, 50, 0.5);
        k.values["value"] = v;
        k.tolerance = 0.05;
        k.pass = std::abs(v - 4.0 / 3.0) < k.tolerance;
        break;
      }
    }
  });

  s.run("bulk_group_k1", cn, [&](Check& k) {
    const McEstimate e = bulk_group_integral(c, 1, {Complex(0.8, 0.3)}, {Complex(1.1, -0.4)}, s.n(), s.next_stream());
    k.values["mc"] = cjson(e.mean);
    k.values["se"] = e.std_error;
    k.tolerance = 4.0;
    k.pass = std::abs(e.mean - 1.0) <= std::max(4.0 * e.std_error, 1e-12);
  });

  s.run("duality_k1", cn, [&](Check& k) {
    const Complex z(0.7, 0.2), w(0.4, -0.3), z0(0.5, 0.0);
    const int n = 2;
    const McEstimate e = duality_finite_n(c, n, 1, {z}, {w}, z0, s.n(), s.next_stream());
    const double xr = matrix_dim(c, n) * scale(c) * scale(c) * std::norm(z0);
    const Complex exact = dn_pair(c, n, z * w).raw / dn_pair(c, n, xr).raw;
    const double zs = zscore(e.mean, e.std_error, exact);
    k.values["mc"] = cjson(e.mean);
    k.values["se"] = e.std_error;
    k.values["exact"] = cjson(exact);
    k.values["z"] = zs;
    k.tolerance = 4.0;
    k.pass = zs < k.tolerance;
  });

  s.run("ztilde_k1", cn, [&](Check& k) {
    const double zt = ztilde(c, 1);
    k.values["closed"] = zt;
    if (c == EnsembleClass::A) {
      // int exp(-|a|^4) d^2a = pi int_0^inf exp(-t^2) dt
      const double radial = std::numbers::pi * 
          quad::adaptive([](double t) { return Complex(std::exp(-t * t)); }, 0.0, 12.0).real();
      const double v = radial / edge_origin_value(c);
      k.values["radial"] = v;
      k.tolerance = 1e-12;
      k.pass = std::abs(v - zt) / zt < k.tolerance;
      return;
    }
    const MatrixIntegrand one{"one", [](const CMatrix&) { return Complex(1.0); }};
    const McEstimate e = estimate_matrix_integral(edge_space(c), 1, Weight::quartic, one, s.n(), s.next_stream());
    const double v = e.mean.real() / edge_origin_value(c), se = e.std_error / edge_origin_value(c);
    k.values["mc"] = v;
    k.values["se"] = se;
    k.values["z"] = zscore(v, se, zt);
    k.tolerance = 4.0;
    k.pass = zscore(v, se, zt) < k.tolerance;
  });
}

void class_a_checks(Suite& s) {
  s.run("bulk_hciz_k2", "A", [&](Check& k) {
    const std::vector<Complex> chi{0.3, -0.1}, eta{0.2, 0.5};
    const McEstimate e = bulk_group_integral(EnsembleClass::A, 2, chi, eta, s.n(), s.next_stream());
    const Complex h = hciz_bulk_a(2, chi, eta);
    k.values["mc"] = cjson(e.mean);
    k.values["se"] = e.std_error;
    k.values["closed"] = cjson(h);
    k.values["z"] = zscore(e.mean, e.std_error, h);
    k.tolerance = 4.0;
    k.pass = zscore(e.mean, e.std_error, h) < k.tolerance;
  });

  s.run("edge_closed_vs_mc", "A", [&](Check& k) {
    const std::vector<Complex> chi{0.5, -0.2}, eta{0.3, 0.1};
    const McEstimate e = edge_matrix_integral(EnsembleClass::A, 2, chi, eta, 1.0, s.n(), s.next_stream());
    const Complex h = edge_closed_a(2, chi, eta, 1.0);
    k.values["mc"] = cjson(e.mean);
    k.values["se"] = e.std_error;
    k.values["closed"] = cjson(h);
    k.values["z"] = zscore(e.mean, e.std_error, h);
    k.tolerance = 4.0;
    k.pass = zscore(e.mean, e.std_error, h) < k.tolerance;
  });

  s.run("kernel_formula_k1", "A", [&](Check& k) {
    double worst = 0.0;
    for (int n = 1; n <= std::max(1, s.max_n()); ++n)
      for (const auto& [z, w] : grid_points()) {
        const Complex a = op_kernel_formula(n, 1, {z}, {w}), b = dn_pair(EnsembleClass::A, n, z * w).raw;
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
      }
    k.values["max_rel_error"] = worst;
    k.tolerance = 1e-12;
    k.pass = worst < k.tolerance;
  });

  s.run("k2_triangle", "A", [&](Check& k) {
    const std::vector<Complex> z{{0.5, 0.1}, {-0.3, 0.4}}, w{{0.2, -0.3}, {0.6, 0.1}};
    const Complex z0(0.3, 0.1);
    const int n = 4;
    const McEstimate du = duality_finite_n(EnsembleClass::A, n, 2, z, w, z0, s.n(), s.next_stream());
    const McEstimate mc = estimate_charpoly({EnsembleClass::A, n, 2, z, w, NormMode::dnk_normalized, z0, true},
                                            s.n(), s.next_stream());
    const std::vector<Complex> zr(2, 2.0 * z0), wr(2, 2.0 * std::conj(z0));
    const Complex op = op_kernel_formula(n, 2, z, w) / op_kernel_formula(n, 2, zr, wr);
    const double z1 = zscore(du.mean, du.std_error, op), z2 = zscore(mc.mean, mc.std_error, op);
    const double z3 = zscore(du.mean, du.std_error, mc.mean, mc.std_error);
    k.values["duality"] = cjson(du.mean);
    k.values["direct"] = cjson(mc.mean);
    k.values["kernel"] = cjson(op);
    k.values["z"] = json::array({z1, z2, z3});
    k.tolerance = 4.0;
    k.pass = std::max({z1, z2, z3}) < k.tolerance;
  });
}

void generic_checks(Suite& s) {
  s.run("pfaffian_squared", "any", [&](Check& k) {
    Philox gen(s.next_stream());
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const int dim = 2 + 2 * (t % 6);
      CMatrix m = CMatrix::Zero(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
          m(i, j) = Complex(gen.normal(), gen.normal());
          m(j, i) = -m(i, j);
        }
      const Complex pf = pfaffian(m), det = m.partialPivLu().determinant();
      worst = std::max(worst, std::abs(pf * pf - det) / std::abs(det));
    }
    k.values["max_rel_error"] = worst;
    k.tolerance = 1e-9;
    k.pass = worst < k.tolerance;
  });

  s.run("erfc_reflection", "any", [&](Check& k) {
    double worst = 0.0;
    for (double y : {0.3, 1.7, 4.1}) worst = std::max(worst, std::abs(erfc_c(y) + erfc_c(-y) - 2.0));
    k.values["max_abs_error"] = worst;
    k.tolerance = 1e-13;
    k.pass = worst < k.tolerance;
  });
}

void aii_checks(Suite& s) {
  s.run("f_n_sum_vs_quad", "AII", [&](Check& k) {
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n)
      for (double x : {0.0, 1.25, 2.5, 3.75, 5.0}) {
        const double a = f_n_sum(n, x).real(), b = f_n_quad(n, x);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
      }
    k.values["max_rel_error"] = worst;
    k.tolerance = 1e-8;
    k.pass = worst < k.tolerance;
  });

  s.run("ode_residual", "AII", [&](Check& k) {
    double worst = 0.0;
    for (int n : {1, 2, 5, 10, 20, 35, 50})
      for (double f : {0.05, 0.25, 0.5, 1.0}) worst = std::max(worst, ode_residual(n, std::max(0.1, f * 2.0 * n)));
    k.values["max_residual"] = worst;
    k.tolerance = 1e-8;
    k.pass = worst < k.tolerance;
  });
}

void separation_check(Suite& s) {
  // k = 1 bulk values at finite N: e^{-c x} D_N / D_N(0,0) tends to 1, 1 - |z0|^2, 1/(1 - |z0|^2).
  s.run("bulk_three_class_separation", "all", [&](Check& k) {
    const int n = 8;
    const double z0 = 0.5;
    Complex m[3];
    double se[3];
    for (EnsembleClass c : kAllClasses) {
      const double rz = std::sqrt(static_cast<double>(matrix_dim(c, n))) * scale(c) * z0;
      const McEstimate e =
          estimate_charpoly({c, n, 1, {rz}, {rz}, NormMode::origin_normalized, {}, true}, s.n(), s.next_stream());
      const double strip = std::exp(-(c == EnsembleClass::A ? 1.0 : 2.0) * rz * rz);
      const int i = static_cast<int>(c);
      m[i] = e.mean * strip;
      se[i] = e.std_error * strip;
      k.values[std::string(class_name(c))] = json::array({m[i].real(), se[i]});
    }
    const double z01 = zscore(m[0], se[0], m[1], se[1]), z02 = zscore(m[0], se[0], m[2], se[2]);
    const double z12 = zscore(m[1], se[1], m[2], se[2]);
    k.values["z"] = json::array({z01, z02, z12});
    k.tolerance = 5.0;
    k.pass = std::min({z01, z02, z12}) > k.tolerance;
  });
}

}  // namespace

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  json head;
  head["header"] = {{"version", kVersion}, {"seed", cfg.seed}, {"command", cfg.command_line}};
  out << head.dump() << '\n';
  Suite s(cfg, out);
  for (EnsembleClass c : kAllClasses)
    if (s.selected(c)) class_checks(s, c);
  if (s.selected(EnsembleClass::A)) class_a_checks(s);
  if (s.selected(EnsembleClass::AII)) aii_checks(s);
  if (s.all_selected()) separation_check(s);
  generic_checks(s);
  json tail;
  tail["summary"] = {{"checks", s.count()}, {"failed", s.failed()}};
  out << tail.dump() << '\n';
  return s.failed() == 0 ? kOk : kFailed;
}

}  // namespace rmt::cli
