#include "rmt_cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "output.hpp"

namespace rmt::cli {
namespace {

std::vector<EnsembleClass> parse_classes(const std::string& s) {
  if (s == "all") return {EnsembleClass::A, EnsembleClass::AI, EnsembleClass::AII};
  return {parse_class(s)};
}

std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size() || v < 1) throw std::invalid_argument("bad N value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty N list");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw std::invalid_argument("N list must be strictly increasing");
  return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expected characteristic polynomials of non-Hermitian Gaussian ensembles", "rmt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string cls = "all", fmt = "csv", kind = "edge", n_text, out_path;
  double samples = 1e5, y = 0.0;
  std::uint64_t seed = 42;
  int max_n = 8, k = 2;

  auto common = [&](CLI::App* s) {
    s->add_option("--class", cls, "A, AI, AII or all");
    s->add_option("--seed", seed, "base seed of every random stream");
    s->add_option("--out", out_path, "output file (default: standard output)");
    s->add_option("--format", fmt, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  CLI::App* verify = app.add_subcommand("verify", "run the self-check suite, one JSON line per check");
  common(verify);
  verify->add_option("--max-n", max_n, "largest N of the Monte Carlo grid")->check(CLI::Range(1, 64));
  verify->add_option("--samples", samples, "Monte Carlo samples per check");
  CLI::App* fig1 = app.add_subcommand("figure1", "global profiles F_N(r) and their N -> infinity limit");
  common(fig1);
  CLI::App* fig2 = app.add_subcommand("figure2", "edge profiles normalized at y = 0");
  common(fig2);
  CLI::App* scan = app.add_subcommand("scan", "edge convergence scans and k-pair comparisons");
  common(scan);
  scan->add_option("--kind", kind, "edge or kpairs")->check(CLI::IsMember({"edge", "kpairs"}));
  scan->add_option("--n", n_text, "comma-separated N list");
  scan->add_option("--k", k, "number of pairs (kpairs)")->check(CLI::Range(1, 4));
  scan->add_option("--samples", samples, "Monte Carlo samples per comparison");
  scan->add_option("--y", y, "edge coordinate (edge)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  RunConfig cfg;
  for (int i = 1; i < argc; ++i) cfg.command_line += (i > 1 ? " " : "") + std::string(argv[i]);
  try {
    cfg.classes = parse_classes(cls);
    if (!(samples >= 1.0) || samples != std::floor(samples) || samples > 1e12)
      throw std::invalid_argument("--samples must be a positive integer");
    cfg.samples = static_cast<std::uint64_t>(samples);
    cfg.seed = seed;
    cfg.max_n = max_n;
    cfg.k = k;
    cfg.y = y;
    cfg.out = out_path;
    cfg.format = fmt == "json" ? Format::json : Format::csv;
    if (*verify) cfg.command = Command::verify;
    if (*fig1) cfg.command = Command::figure1;
    if (*fig2) cfg.command = Command::figure2;
    if (*scan) {
      cfg.command = Command::scan;
      cfg.scan_kind = kind == "kpairs" ? ScanKind::kpairs : ScanKind::edge;
      if (scan->count("--n") > 0)
        cfg.n_list = parse_n_list(n_text);
      else
        cfg.n_list = cfg.scan_kind == ScanKind::edge ? std::vector<int>{100, 400, 1600} : std::vector<int>{4};
    }
  } catch (const std::exception& e) {
    err << "rmt: " << e.what() << '\n';
    return kUsage;
  }

  Sink sink(cfg.out, out);
  if (!sink.ok()) {
    err << "rmt: cannot open '" << cfg.out << "' for writing\n";
    return kFailed;
  }
  int code = kOk;
  try {
    switch (cfg.command) {
      case Command::verify: code = cmd_verify(cfg, sink.stream()); break;
      case Command::figure1: code = cmd_figure1(cfg, sink.stream()); break;
      case Command::figure2: code = cmd_figure2(cfg, sink.stream()); break;
      case Command::scan: code = cmd_scan(cfg, sink.stream()); break;
    }
  } catch (const std::exception& e) {
    err << "rmt: " << e.what() << '\n';
    return kFailed;
  }
  sink.stream().flush();
  if (!sink.ok()) {
    err << "rmt: write to '" << cfg.out << "' failed\n";
    return kFailed;
  }
  return code;
}

}  // namespace rmt::cli
