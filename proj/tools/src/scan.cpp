#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "output.hpp"
#include "rmt/asymptotics.hpp"
#include "rmt/kpairs.hpp"
#include "rmt/montecarlo.hpp"

namespace rmt::cli {
namespace {

using json = nlohmann::ordered_json;

struct Comparison {
  std::string cls;
  std::string quantity;
  Complex mc;
  double se;
  Complex ref;
  double ref_se = 0.0;  // nonzero when the reference is itself an estimate
  double z() const {
    const double s = std::hypot(se, ref_se);
    return s > 0.0 ? std::abs(mc - ref) / s : (std::abs(mc - ref) < 1e-12 ? 0.0 : INFINITY);
  }
};

std::vector<Complex> source_points(int k, double shift) {
  std::vector<Complex> v(k);
  for (int j = 0; j < k; ++j) v[j] = Complex(shift + 0.35 * j, -0.1 * j);
  return v;
}

int scan_edge(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::vector<std::string>> csv;
  std::vector<json> js;
  bool ok = true;
  for (EnsembleClass c : cfg.classes) {
    const ScanResult r = convergence_scan(c, cfg.y, cfg.n_list);
    const std::string rate = r.rate_exponent ? fmt_num(*r.rate_exponent) : "";
    if (r.rate_exponent && (*r.rate_exponent < -0.7 || *r.rate_exponent > -0.3)) ok = false;
    for (const ScanRow& row : r.rows) {
      csv.push_back({std::string(class_name(c)), fmt_num(cfg.y), std::to_string(row.n), fmt_num(row.value),
                     fmt_num(row.limit), fmt_num(row.error), rate, r.monotone ? "1" : "0"});
      json j;
      j["class"] = class_name(c);
      j["y"] = cfg.y;
      j["N"] = row.n;
      j["value"] = row.value;
      j["limit"] = row.limit;
      j["error"] = row.error;
      j["rate_exponent"] = r.rate_exponent ? json(*r.rate_exponent) : json(nullptr);
      j["monotone"] = r.monotone;
      js.push_back(std::move(j));
    }
  }
  write_table(out, cfg, {"class", "y", "N", "value", "limit", "error", "rate_exponent", "monotone"}, csv, js);
  return ok ? kOk : kFailed;
}

int scan_kpairs(const RunConfig& cfg, std::ostream& out) {
  const int k = cfg.k;
  const int n_fin = cfg.n_list.front();
  std::uint64_t stream = 0;
  auto next = [&] { return RngStream{cfg.seed, stream++}; };
  std::vector<Comparison> rows;
  for (EnsembleClass c : cfg.classes) {
    const std::string cn(class_name(c));
    const std::vector<Complex> chi = source_points(k, 0.3), eta = source_points(k, -0.2);
    const Complex z0(0.3, 0.1);
    std::vector<Complex> z(k), w(k);
    const double rz = std::sqrt(static_cast<double>(matrix_dim(c, n_fin))) * scale(c);
    for (int j = 0; j < k; ++j) {
      z[j] = rz * z0 + chi[j];
      w[j] = rz * std::conj(z0) + eta[j];
    }
    const McEstimate du = duality_finite_n(c, n_fin, k, z, w, z0, cfg.samples, next());
    const McEstimate direct =
        estimate_charpoly({c, n_fin, k, z, w, NormMode::dnk_normalized, z0, true}, cfg.samples, next());
    rows.push_back({cn, "finite_N" + std::to_string(n_fin) + " duality vs direct", du.mean, du.std_error,
                    direct.mean, direct.std_error});
    if (c == EnsembleClass::A) {
      const std::vector<Complex> zr(k, rz * z0), wr(k, rz * std::conj(z0));
      const Complex op = op_kernel_formula(n_fin, k, z, w) / op_kernel_formula(n_fin, k, zr, wr);
      rows.push_back({cn, "finite_N" + std::to_string(n_fin) + " duality vs kernel", du.mean, du.std_error, op});
      rows.push_back({cn, "finite_N" + std::to_string(n_fin) + " direct vs kernel", direct.mean, direct.std_error, op});
      const McEstimate b = bulk_group_integral(c, k, chi, eta, cfg.samples, next());
      rows.push_back({cn, "bulk vs determinant", b.mean, b.std_error, hciz_bulk_a(k, chi, eta)});
      const McEstimate e = edge_matrix_integral(c, k, chi, eta, 1.0, cfg.samples, next());
      rows.push_back({cn, "edge vs closed form", e.mean, e.std_error, edge_closed_a(k, chi, eta, 1.0)});
    }
    const McEstimate b1 = bulk_group_integral(c, 1, {chi[0]}, {eta[0]}, cfg.samples, next());
    rows.push_back({cn, "bulk k=1 vs unity", b1.mean, b1.std_error, 1.0});
  }
  std::vector<std::vector<std::string>> csv;
  std::vector<json> js;
  bool ok = true;
  for (const Comparison& r : rows) {
    ok = ok && r.z() < 4.0;
    csv.push_back({r.cls, std::to_string(k), r.quantity, fmt_num(r.mc.real()), fmt_num(r.mc.imag()), fmt_num(r.se),
                   fmt_num(r.ref.real()), fmt_num(r.ref.imag()), fmt_num(r.ref_se), fmt_num(r.z())});
    json j;
    j["class"] = r.cls;
    j["k"] = k;
    j["quantity"] = r.quantity;
    j["mc"] = {r.mc.real(), r.mc.imag()};
    j["se"] = r.se;
    j["reference"] = {r.ref.real(), r.ref.imag()};
    j["reference_se"] = r.ref_se;
    j["z"] = r.z();
    js.push_back(std::move(j));
  }
  write_table(out, cfg, {"class", "k", "quantity", "mc_re", "mc_im", "se", "ref_re", "ref_im", "ref_se", "z"}, csv,
              js);
  return ok ? kOk : kFailed;
}

}  // namespace

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  if (cfg.n_list.empty()) throw std::invalid_argument("scan: empty N list");
  return cfg.scan_kind == ScanKind::edge ? scan_edge(cfg, out) : scan_kpairs(cfg, out);
}

}  // namespace rmt::cli
