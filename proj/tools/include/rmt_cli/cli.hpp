#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmt/types.hpp"

namespace rmt::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { verify, figure1, figure2, scan };
enum class Format { csv, json };
enum class ScanKind { edge, kpairs };

struct RunConfig {
  Command command = Command::verify;
  std::vector<EnsembleClass> classes{EnsembleClass::A, EnsembleClass::AI, EnsembleClass::AII};
  std::vector<int> n_list;  // scan: N values; verify: unused (max_n bounds the grid)
  int max_n = 8;
  int k = 2;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
  std::string out;  // empty: standard output
  Format format = Format::csv;
  ScanKind scan_kind = ScanKind::edge;
  double y = 0.0;
  std::string command_line;  // recorded in output headers
};

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;

// Parses argv and dispatches. Output goes to --out when given, else to out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_figure1(const RunConfig& cfg, std::ostream& out);
int cmd_figure2(const RunConfig& cfg, std::ostream& out);
int cmd_scan(const RunConfig& cfg, std::ostream& out);

// 17 significant digits, '.' separator, independent of the global locale.
std::string fmt_num(double v);

}  // namespace rmt::cli
