#include "rmt/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rmt/charpoly.hpp"
#include "rmt/ensembles.hpp"

namespace rmt {

void Moments::push(Complex x, Complex y) {
  ++n;
  const double inv = 1.0 / static_cast<double>(n);
  const Complex dx = x - mean_x;
  const Complex dy = y - mean_y;
  mean_x += dx * inv;
  mean_y += dy * inv;
  m2_x += std::real((x - mean_x) * std::conj(dx));
  m2_y += std::real((y - mean_y) * std::conj(dy));
  c_xy += (x - mean_x) * std::conj(dy);
}

void Moments::push_weight(double w) {
  w1 += w;
  w2 += w * w;
}

Moments Moments::merge(const Moments& a, const Moments& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  Moments r;
  r.n = a.n + b.n;
  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n), nt = static_cast<double>(r.n);
  const Complex dx = b.mean_x - a.mean_x;
  const Complex dy = b.mean_y - a.mean_y;
  r.mean_x = a.mean_x + dx * (nb / nt);
  r.mean_y = a.mean_y + dy * (nb / nt);
  const double f = na * nb / nt;
  r.m2_x = a.m2_x + b.m2_x + std::norm(dx) * f;
  r.m2_y = a.m2_y + b.m2_y + std::norm(dy) * f;
  r.c_xy = a.c_xy + b.c_xy + dx * std::conj(dy) * f;
  r.w1 = a.w1 + b.w1;
  r.w2 = a.w2 + b.w2;
  return r;
}

namespace {

Moments tree_reduce(const std::vector<Moments>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return Moments::merge(tree_reduce(parts, lo, mid), tree_reduce(parts, mid, hi));
}

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

}  // namespace

McEstimate finalize(const Moments& m, bool ratio, RngStream seed, std::string tag) {
  McEstimate e;
  e.moments = m;
  e.ratio = ratio;
  e.seed = seed;
  e.tag = std::move(tag);
  e.n_samples = m.n;
  if (m.n == 0) return e;
  const double n = static_cast<double>(m.n);
  const double dof = m.n > 1 ? n - 1.0 : 1.0;
  if (!ratio) {
    e.mean = m.mean_x;
    e.std_error = std::sqrt(m.m2_x / dof / n);
  } else {
    if (m.mean_y == Complex(0.0)) throw std::domain_error("ratio estimate with zero denominator mean");
    const Complex r = m.mean_x / m.mean_y;
    e.mean = r;
    // Var(x - r y) / (n |<y>|^2)
    const double var = (m.m2_x + std::norm(r) * m.m2_y - 2.0 * std::real(std::conj(r) * m.c_xy)) / dof;
    e.std_error = std::sqrt(std::max(var, 0.0) / n) / std::abs(m.mean_y);
  }
  if (m.w2 > 0.0) e.ess_fraction = m.w1 * m.w1 / (n * m.w2);
  return e;
}

McEstimate merge(const std::vector<McEstimate>& estimates) {
  if (estimates.empty()) throw std::invalid_argument("merge: empty list");
  if (estimates.size() == 1) return estimates.front();
  std::vector<Moments> parts;
  for (const auto& e : estimates) {
    if (e.tag != estimates.front().tag || e.ratio != estimates.front().ratio)
      throw std::invalid_argument("merge: estimates belong to different queries");
    parts.push_back(e.moments);
  }
  McEstimate out = finalize(tree_reduce(parts, 0, parts.size()), estimates.front().ratio,
                            estimates.front().seed, estimates.front().tag);
  for (const auto& e : estimates) out.warnings.insert(out.warnings.end(), e.warnings.begin(), e.warnings.end());
  return out;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RMT_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

// Checkpoint: header lines identifying the run, then one line per finished chunk.
std::string checkpoint_header(const std::string& tag, std::uint64_t n, RngStream rng, const McOptions& opt) {
  std::ostringstream os;
  os << "rmt-checkpoint 1\n"
     << "tag " << tag << "\n"
     << "plan " << rng.seed << ' ' << rng.stream_id << ' ' << opt.first_chunk << ' ' << opt.chunk_size << ' '
     << n << "\n";
  return os.str();
}

void write_checkpoint(const std::string& path, const std::string& header, const std::vector<Moments>& parts,
                      const std::vector<char>& done) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + tmp);
    out << header;
    for (std::size_t c = 0; c < parts.size(); ++c) {
      if (!done[c]) continue;
      const Moments& m = parts[c];
      out << c << ' ' << m.n << ' ' << hex(m.mean_x.real()) << ' ' << hex(m.mean_x.imag()) << ' '
          << hex(m.mean_y.real()) << ' ' << hex(m.mean_y.imag()) << ' ' << hex(m.m2_x) << ' ' << hex(m.m2_y) << ' '
          << hex(m.c_xy.real()) << ' ' << hex(m.c_xy.imag()) << ' ' << hex(m.w1) << ' ' << hex(m.w2) << '\n';
    }
  }
  std::filesystem::rename(tmp, path);
}

void read_checkpoint(const std::string& path, const std::string& header, std::vector<Moments>& parts,
                     std::vector<char>& done) {
  std::ifstream in(path);
  if (!in) return;
  std::string expected_line, line;
  std::istringstream hs(header);
  while (std::getline(hs, expected_line)) {
    if (!std::getline(in, line) || line != expected_line) return;  // different run: ignore
  }
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::size_t c;
    std::uint64_t cnt;
    std::string f[10];
    if (!(ls >> c >> cnt)) continue;
    bool ok = true;
    for (auto& s : f) ok = ok && static_cast<bool>(ls >> s);
    if (!ok || c >= parts.size()) continue;
    auto d = [&](int i) { return std::strtod(f[i].c_str(), nullptr); };
    Moments m;
    m.n = cnt;
    m.mean_x = {d(0), d(1)};
    m.mean_y = {d(2), d(3)};
    m.m2_x = d(4);
    m.m2_y = d(5);
    m.c_xy = {d(6), d(7)};
    m.w1 = d(8);
    m.w2 = d(9);
    parts[c] = m;
    done[c] = 1;
  }
}

}  // namespace

Moments run_chunks(std::uint64_t n, RngStream rng, const McOptions& opt, const std::string& tag,
                   const ChunkKernel& kernel) {
  if (n == 0) throw std::invalid_argument("Monte Carlo run needs at least one sample");
  if (opt.chunk_size == 0) throw std::invalid_argument("chunk_size must be positive");
  const std::uint64_t n_chunks = (n + opt.chunk_size - 1) / opt.chunk_size;
  if (n_chunks + opt.first_chunk > 0xFFFFFFFFull) throw std::invalid_argument("too many chunks for one stream");
  std::vector<Moments> parts(n_chunks);
  std::vector<char> done(n_chunks, 0);

  const bool ckpt = !opt.checkpoint_path.empty();
  const std::string header = ckpt ? checkpoint_header(tag, n, rng, opt) : std::string();
  if (ckpt) read_checkpoint(opt.checkpoint_path, header, parts, done);
  const std::uint64_t flush_every =
      std::max<std::uint64_t>(1, opt.checkpoint_every / opt.chunk_size);

  std::atomic<std::uint64_t> next{0};
  std::mutex mu;
  std::uint64_t finished_since_flush = 0;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      if (done[c]) continue;
      const std::uint64_t first = c * opt.chunk_size;
      const std::uint64_t count = std::min<std::uint64_t>(opt.chunk_size, n - first);
      Moments acc;
      try {
        Philox gen(rng, static_cast<std::uint32_t>(opt.first_chunk + c));
        kernel(gen, count, acc);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks);
        return;
      }
      std::lock_guard<std::mutex> lock(mu);
      parts[c] = acc;
      done[c] = 1;
      if (ckpt && ++finished_since_flush >= flush_every) {
        write_checkpoint(opt.checkpoint_path, header, parts, done);
        finished_since_flush = 0;
      }
    }
  };

  const int threads = static_cast<int>(std::min<std::uint64_t>(resolve_threads(opt.threads), n_chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  if (ckpt) write_checkpoint(opt.checkpoint_path, header, parts, done);
  return tree_reduce(parts, 0, parts.size());
}

Complex log_det(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("log_det: matrix is not square");
  Eigen::PartialPivLU<CMatrix> lu(m);
  Complex l = 0.0;
  const auto& u = lu.matrixLU();
  for (Eigen::Index i = 0; i < u.rows(); ++i) l += std::log(u(i, i));
  if (lu.permutationP().determinant() < 0) l += Complex(0.0, std::numbers::pi);
  return l;
}

namespace {

std::string describe(const CharPolyQuery& q) {
  std::ostringstream os;
  os << "charpoly class=" << class_name(q.cls) << " N=" << q.n << " k=" << q.k << " mode=" << static_cast<int>(q.mode)
     << " shared=" << q.shared_samples;
  for (std::size_t j = 0; j < q.z.size(); ++j)
    os << " z" << j << '=' << hex(q.z[j].real()) << ',' << hex(q.z[j].imag()) << " w" << j << '='
       << hex(q.w_star[j].real()) << ',' << hex(q.w_star[j].imag());
  if (q.z0) os << " z0=" << hex(q.z0->real()) << ',' << hex(q.z0->imag());
  return os.str();
}

}  // namespace

McEstimate estimate_charpoly(const CharPolyQuery& q, std::uint64_t n, RngStream rng, const McOptions& opt) {
  if (q.n < 1 || q.k < 1) throw std::invalid_argument("estimate_charpoly: N and k must be positive");
  if (static_cast<int>(q.z.size()) != q.k || static_cast<int>(q.w_star.size()) != q.k)
    throw std::invalid_argument("estimate_charpoly: Z and W* must have k entries");
  const bool dnk = q.mode == NormMode::dnk_normalized;
  if (dnk && !q.z0) throw std::invalid_argument("estimate_charpoly: dnk_normalized mode requires z0");

  const int d = matrix_dim(q.cls, q.n);
  const double s = scale(q.cls);
  double log_ref = 0.0;
  Complex den_point = 0.0;
  if (q.mode == NormMode::origin_normalized) log_ref = q.k * log_dn_origin(q.cls, q.n);
  if (dnk) {
    den_point = std::sqrt(static_cast<double>(d)) * s * *q.z0;
    // Common scale for numerator and denominator; cancels in the ratio.
    log_ref = q.k * dn_pair(q.cls, q.n, std::norm(den_point)).log_scale;
  }

  const ChunkKernel kernel = [&](Philox& gen, std::uint64_t count, Moments& acc) {
    const CMatrix eye = CMatrix::Identity(d, d);
    for (std::uint64_t i = 0; i < count; ++i) {
      const CMatrix j = sample(q.cls, q.n, gen).entries;
      Complex l = 0.0;
      for (int a = 0; a < q.k; ++a) {
        l += log_det(q.z[a] * eye - j);
        l += std::conj(log_det(std::conj(q.w_star[a]) * eye - j));
      }
      l -= log_ref;
      if (!dnk) {
        if (l.real() > 700.0)
          throw std::overflow_error("estimate_charpoly: sample outside double range; use a normalized mode");
        acc.push(std::exp(l));
      } else {
        const CMatrix jd = q.shared_samples ? j : sample(q.cls, q.n, gen).entries;
        const double ld = 2.0 * q.k * log_det(den_point * eye - jd).real() - log_ref;
        acc.push(std::exp(l), std::exp(ld));
      }
    }
  };
  const std::string tag = describe(q);
  const Moments m = run_chunks(n, rng, opt, tag, kernel);
  return finalize(m, dnk, rng, tag);
}

}  // namespace rmt
