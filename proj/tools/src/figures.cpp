#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "output.hpp"
#include "rmt/asymptotics.hpp"
#include "rmt/charpoly.hpp"

namespace rmt::cli {
namespace {

using json = nlohmann::ordered_json;

struct Row1 {
  EnsembleClass cls;
  int n;  // 0 stands for N = infinity
  double r;
  double value;
  std::string flag;
};

}  // namespace

int cmd_figure1(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::vector<std::string>> csv;
  std::vector<json> js;
  for (EnsembleClass c : cfg.classes) {
    for (int n : {10, 20, 50, 0}) {
      for (int i = 0; i <= 150; ++i) {
        const double r = i / 100.0;
        Row1 row{c, n, r, 0.0, ""};
        if (n > 0) {
          row.value = rescaled_f(c, n, r);
        } else if (c == EnsembleClass::AII && i == 100) {
          row.value = std::numeric_limits<double>::infinity();
          row.flag = "pole";
        } else {
          row.value = global_limit(c, r);
          if (c == EnsembleClass::AII && std::abs(1.0 - r * r) < 0.05) row.flag = "near_pole";
        }
        const std::string ns = n > 0 ? std::to_string(n) : "inf";
        csv.push_back({std::string(class_name(c)), ns, fmt_num(r), fmt_num(row.value), row.flag});
        json j;
        j["class"] = class_name(c);
        j["N"] = ns;
        j["r"] = r;
        j["value"] = std::isfinite(row.value) ? json(row.value) : json("inf");
        j["flag"] = row.flag;
        js.push_back(std::move(j));
      }
    }
  }
  write_table(out, cfg, {"class", "N", "r", "value", "flag"}, csv, js);
  return kOk;
}

int cmd_figure2(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::vector<std::string>> csv;
  std::vector<json> js;
  for (EnsembleClass c : cfg.classes) {
    const double origin = edge_limit(c, 0.0).real();
    for (int i = 0; i <= 200; ++i) {
      const double y = (i - 120) / 20.0;
      const double raw = edge_limit(c, y).real();
      const double v = raw / origin;
      csv.push_back({std::string(class_name(c)), fmt_num(y), fmt_num(v), fmt_num(raw)});
      json j;
      j["class"] = class_name(c);
      j["y"] = y;
      j["value"] = v;
      j["raw"] = raw;
      js.push_back(std::move(j));
    }
  }
  write_table(out, cfg, {"class", "y", "value", "raw"}, csv, js);
  return kOk;
}

}  // namespace rmt::cli
