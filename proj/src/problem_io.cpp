#include "dal/problem_io.hpp"

#include "dal/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <system_error>
#include <utility>

namespace dal {
namespace {

constexpr std::array<char, 4> kMagic{'D', 'A', 'L', 'P'};

template <class T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return value;
}

template <class T>
void put(std::ostream& out, T value) {
  const T le = to_little(value);
  out.write(reinterpret_cast<const char*>(&le), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T raw{};
  in.read(reinterpret_cast<char*>(&raw), sizeof(T));
  return to_little(raw);
}

void put_doubles(std::ostream& out, const double* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < count; ++i) put(out, data[i]);
  }
}

void get_doubles(std::istream& in, double* data, std::size_t count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < count; ++i) data[i] = to_little(data[i]);
  }
}

}  // namespace

void write_problem(const std::filesystem::path& path, const GeneratedProblem& gp) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  const ProblemInstance& p = gp.problem;
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kProblemFormatVersion);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(p.rows()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(p.cols()));
  put<double>(out, p.lambda());
  put_doubles(out, p.design().data(), static_cast<std::size_t>(p.design().size()));
  put_doubles(out, p.observations().data(), static_cast<std::size_t>(p.rows()));
  put_doubles(out, gp.true_coeffs.data(), static_cast<std::size_t>(gp.true_coeffs.size()));
  out.flush();
  if (!out) throw FormatError("write to '" + path.string() + "' failed");
}

GeneratedProblem read_problem(const std::filesystem::path& path) {
  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) throw FormatError("cannot stat '" + path.string() + "': " + ec.message());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  if (file_size < kProblemHeaderBytes) throw FormatError("'" + path.string() + "' is too short for a header");

  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (magic != kMagic) throw FormatError("'" + path.string() + "' is not a DALP problem file");
  const auto version = get<std::uint32_t>(in);
  if (version != kProblemFormatVersion) {
    throw FormatError("unsupported problem file version " + std::to_string(version));
  }
  const auto m = get<std::uint64_t>(in);
  const auto n = get<std::uint64_t>(in);
  const auto lambda = get<double>(in);
  if (!in) throw FormatError("truncated header in '" + path.string() + "'");
  if (m == 0 || n == 0) throw FormatError("problem file declares an empty design matrix");

  constexpr std::uint64_t kMaxEntries = std::numeric_limits<std::uint64_t>::max() / 16;
  if (m > kMaxEntries / n) throw FormatError("problem file dimensions overflow");
  const std::uint64_t payload = 8 * (m * n + m + n);
  if (file_size != kProblemHeaderBytes + payload) {
    throw FormatError("'" + path.string() + "' has " + std::to_string(file_size) + " bytes, expected " +
                      std::to_string(kProblemHeaderBytes + payload));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw FormatError("problem file has invalid lambda");

  Matrix a(static_cast<Index>(m), static_cast<Index>(n));
  Vector b(static_cast<Index>(m));
  Vector w0(static_cast<Index>(n));
  get_doubles(in, a.data(), m * n);
  get_doubles(in, b.data(), m);
  get_doubles(in, w0.data(), n);
  if (!in) throw FormatError("truncated payload in '" + path.string() + "'");
  return GeneratedProblem{ProblemInstance(std::move(a), std::move(b), lambda), std::move(w0), 0};
}

void write_problem_csv(const std::filesystem::path& path, const GeneratedProblem& gp) {
  const ProblemInstance& p = gp.problem;
  if (static_cast<std::int64_t>(p.rows()) * p.cols() > kMaxCsvEntries) {
    throw ArgumentError("CSV export is limited to " + std::to_string(kMaxCsvEntries) + " design entries");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "kind,row,col,value\n";
  out << "lambda,,," << num(p.lambda()) << '\n';
  for (Index j = 0; j < p.cols(); ++j) {
    for (Index i = 0; i < p.rows(); ++i) out << "A," << i << ',' << j << ',' << num(p.design()(i, j)) << '\n';
  }
  for (Index i = 0; i < p.rows(); ++i) out << "b," << i << ",," << num(p.observations()(i)) << '\n';
  for (Index j = 0; j < gp.true_coeffs.size(); ++j) out << "w0,," << j << ',' << num(gp.true_coeffs(j)) << '\n';
  out.flush();
  if (!out) throw FormatError("write to '" + path.string() + "' failed");
}

}  // namespace dal
