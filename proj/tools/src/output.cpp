#include "output.hpp"

#include <charconv>
#include <cmath>

namespace rmt::cli {

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

Sink::Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
  if (!path.empty()) file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
}

void write_csv_header(std::ostream& os, const RunConfig& cfg) {
  os << "# rmt " << kVersion << '\n';
  os << "# seed: " << cfg.seed << '\n';
  os << "# command: " << cfg.command_line << '\n';
}

void write_table(std::ostream& os, const RunConfig& cfg, const std::vector<std::string>& cols,
                 const std::vector<std::vector<std::string>>& csv, const std::vector<nlohmann::ordered_json>& js) {
  if (cfg.format == Format::json) {
    nlohmann::ordered_json head;
    head["header"] = {{"version", kVersion}, {"seed", cfg.seed}, {"command", cfg.command_line}};
    os << head.dump() << '\n';
    for (const auto& j : js) os << j.dump() << '\n';
    return;
  }
  write_csv_header(os, cfg);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& row : csv) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

}  // namespace rmt::cli
