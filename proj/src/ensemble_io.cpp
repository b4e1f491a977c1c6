#include "gpb/ensemble_io.h"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpb {
namespace {

static_assert(std::endian::native == std::endian::little, "binary ensemble format assumes a little-endian host");

template <class T>
void put(std::ofstream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw std::runtime_error("truncated binary ensemble");
  return value;
}

std::ofstream open_out(const std::filesystem::path& file, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(file, mode | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
  return os;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const PathEnsemble& ensemble, const std::filesystem::path& file) {
  std::ofstream os = open_out(file);
  const RowMatrix& p = ensemble.paths();
  std::string line;
  for (Eigen::Index m = 0; m < p.rows(); ++m) {
    line.clear();
    for (Eigen::Index i = 0; i < p.cols(); ++i) {
      if (i > 0) line += ',';
      line += format_double(p(m, i));
    }
    line += '\n';
    os << line;
  }
}

void write_binary(const PathEnsemble& ensemble, const std::filesystem::path& file) {
  std::ofstream os = open_out(file, std::ios::out | std::ios::binary);
  const RowMatrix& p = ensemble.paths();
  os.write(kBinaryMagic, 4);
  put<std::uint32_t>(os, kBinaryVersion);
  put<std::uint64_t>(os, static_cast<std::uint64_t>(p.rows()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(p.cols()));
  os.write(reinterpret_cast<const char*>(p.data()), static_cast<std::streamsize>(p.size() * sizeof(double)));
}

void write_sidecar(const PathEnsemble& ensemble, const std::filesystem::path& file) {
  std::ofstream os = open_out(file);
  os << ensemble.provenance().dump(2) << '\n';
}

RowMatrix read_binary(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kBinaryMagic, 4) != 0) throw std::runtime_error("bad magic in " + file.string());
  const auto version = get<std::uint32_t>(is);
  if (version != kBinaryVersion) throw std::runtime_error("unsupported binary ensemble version");
  const auto rows = get<std::uint64_t>(is);
  const auto cols = get<std::uint64_t>(is);
  RowMatrix p(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  is.read(reinterpret_cast<char*>(p.data()), static_cast<std::streamsize>(rows * cols * sizeof(double)));
  if (!is) throw std::runtime_error("truncated binary ensemble");
  return p;
}

RowMatrix read_csv(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw std::runtime_error("cannot open " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size()) throw std::runtime_error("ragged csv");
    rows.push_back(std::move(row));
  }
  RowMatrix p(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return p;
}

}  // namespace gpb
