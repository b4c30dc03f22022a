#pragma once

#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmt_cli/cli.hpp"

namespace rmt::cli {

// Destination chosen by --out; falls back to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback);
  std::ostream& stream() { return file_ ? *file_ : fallback_; }
  bool ok() const { return !file_ || file_->good(); }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream& fallback_;
};

// "# rmt <version>", "# seed: <seed>", "# command: <line>".
void write_csv_header(std::ostream& os, const RunConfig& cfg);

}  // namespace rmt::cli

namespace rmt::cli {

// Header plus rows, as CSV (column line first) or JSON lines.
void write_table(std::ostream& os, const RunConfig& cfg, const std::vector<std::string>& cols,
                 const std::vector<std::vector<std::string>>& csv, const std::vector<nlohmann::ordered_json>& js);

}  // namespace rmt::cli
