#include "pawf/channel.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pawf {

namespace {

using cdouble = std::complex<double>;

void check_dims(int n_r, int n_t) {
  if (n_r < 1 || n_t < 1)
    throw std::invalid_argument("channel dimensions must be at least 1x1");
}

Eigen::VectorXcd gaussian_vector(std::mt19937_64& rng, int n, double component_std) {
  std::normal_distribution<double> normal(0.0, component_std);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = cdouble(re, im);
  }
  return v;
}

std::string format_entry(const cdouble& z) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g:%.17g", z.real(), z.imag());
  return buf;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line, int column,
                             const std::string& what) {
  std::ostringstream os;
  os << path.string() << ":" << line;
  if (column > 0) os << ":" << column;
  os << ": " << what;
  throw std::runtime_error(os.str());
}

double parse_double(const std::string& tok, const std::filesystem::path& path,
                    int line, int column) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE)
    parse_fail(path, line, column, "malformed number '" + tok + "'");
  if (!std::isfinite(v))
    parse_fail(path, line, column, "non-finite entry '" + tok + "'");
  return v;
}

} // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t purpose, std::uint64_t index) {
  return splitmix64((base ^ purpose) + index);
}

ChannelMatrix generate(const ChannelSpec& spec) {
  check_dims(spec.n_r, spec.n_t);
  std::mt19937_64 rng(spec.seed);

  if (spec.kind == ChannelKind::Rayleigh) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ChannelMatrix h(spec.n_r, spec.n_t);
    for (int r = 0; r < spec.n_r; ++r)
      for (int c = 0; c < spec.n_t; ++c) {
        const double re = normal(rng);
        const double im = normal(rng);
        h(r, c) = cdouble(re, im);
      }
    return h;
  }

  const int max_rank = std::min(spec.n_r, spec.n_t);
  if (spec.n_paths < 0 || spec.n_paths > max_rank)
    throw std::invalid_argument("n_paths must lie in [0, min(n_r, n_t)]");
  ChannelMatrix h = ChannelMatrix::Zero(spec.n_r, spec.n_t);
  if (spec.n_paths == 0) return h; // deep fade
  const double gain_std =
      std::sqrt(static_cast<double>(spec.n_r) * spec.n_t / spec.n_paths / 2.0);
  std::normal_distribution<double> gain_normal(0.0, gain_std);
  for (int l = 0; l < spec.n_paths; ++l) {
    Eigen::VectorXcd a = gaussian_vector(rng, spec.n_r, std::sqrt(0.5));
    Eigen::VectorXcd b = gaussian_vector(rng, spec.n_t, std::sqrt(0.5));
    a.normalize();
    b.normalize();
    const double re = gain_normal(rng);
    const double im = gain_normal(rng);
    h += cdouble(re, im) * a * b.adjoint();
  }
  return h;
}

void write_channel(const ChannelMatrix& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "# rows=" << h.rows() << " cols=" << h.cols() << "\n";
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      if (c) out << ",";
      out << format_entry(h(r, c));
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

ChannelMatrix read_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");

  std::string header;
  if (!std::getline(in, header)) parse_fail(path, 1, 0, "empty file");
  long rows = -1, cols = -1;
  if (std::sscanf(header.c_str(), "# rows=%ld cols=%ld", &rows, &cols) != 2 ||
      rows < 1 || cols < 1)
    parse_fail(path, 1, 0, "malformed header, expected '# rows=<N_R> cols=<N_T>'");

  ChannelMatrix h(rows, cols);
  std::string line;
  long r = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.peek() == EOF) break; // trailing newline
    if (r >= rows)
      parse_fail(path, line_no, 0, "more data rows than the header's rows=" +
                                       std::to_string(rows));
    std::stringstream ss(line);
    std::string token;
    long c = 0;
    while (std::getline(ss, token, ',')) {
      if (c >= cols)
        parse_fail(path, line_no, static_cast<int>(c + 1),
                   "row has more than cols=" + std::to_string(cols) + " entries");
      const auto sep = token.find(':');
      if (sep == std::string::npos)
        parse_fail(path, line_no, static_cast<int>(c + 1),
                   "entry '" + token + "' is not of the form re:im");
      const double re = parse_double(token.substr(0, sep), path, line_no,
                                     static_cast<int>(c + 1));
      const double im = parse_double(token.substr(sep + 1), path, line_no,
                                     static_cast<int>(c + 1));
      h(r, c) = cdouble(re, im);
      ++c;
    }
    if (c != cols)
      parse_fail(path, line_no, static_cast<int>(c),
                 "row has " + std::to_string(c) + " entries, expected " +
                     std::to_string(cols));
    ++r;
  }
  if (r != rows)
    parse_fail(path, line_no, 0,
               "file has " + std::to_string(r) + " data rows, header says " +
                   std::to_string(rows));
  return h;
}

} // namespace pawf
