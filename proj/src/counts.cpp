#include "qkdlink/counts.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qkdlink {

namespace {

int parse_state_label(const std::string& s) {
  for (int i = 0; i < 6; ++i)
    if (s == state_label(i)) return i;
  throw std::runtime_error("count matrix CSV: bad state label '" + s + "'");
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::uint64_t CountMatrix::total_detected() const {
  std::uint64_t t = 0;
  for (const auto& row : m)
    for (auto v : row) t += v;
  return t;
}

std::uint64_t CountMatrix::total_emitted() const {
  std::uint64_t t = 0;
  for (auto v : emitted) t += v;
  return t;
}

std::uint64_t CountMatrix::row_sum(int prep) const {
  std::uint64_t t = 0;
  for (auto v : m[prep]) t += v;
  return t;
}

std::uint64_t CountMatrix::col_sum(int det) const {
  std::uint64_t t = 0;
  for (const auto& row : m) t += row[det];
  return t;
}

std::uint64_t CountMatrix::sifted_count() const {
  const int zp = state_index(Basis::Z, Sign::plus);
  const int zm = state_index(Basis::Z, Sign::minus);
  return m[zp][zp] + m[zp][zm] + m[zm][zp] + m[zm][zm];
}

double CountMatrix::transmission(double mean_photon_number) const {
  const double photons =
      mean_photon_number * static_cast<double>(total_emitted());
  if (photons <= 0.0) return 0.0;
  return static_cast<double>(total_detected()) / photons;
}

CountMatrix& CountMatrix::merge(const CountMatrix& other) {
  for (int a = 0; a < 6; ++a) {
    emitted[a] += other.emitted[a];
    background[a] += other.background[a];
    for (int b = 0; b < 6; ++b) m[a][b] += other.m[a][b];
  }
  return *this;
}

double ExpectedRates::total_detected() const {
  double t = 0.0;
  for (const auto& row : m)
    for (auto v : row) t += v;
  return t;
}

void write_count_matrix_csv(std::ostream& os, const CountMatrix& counts) {
  os << "duration_s," << counts.duration_s << "\n";
  for (int a = 0; a < 6; ++a)
    os << "emitted," << state_label(a) << "," << counts.emitted[a] << "\n";
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      os << "count," << state_label(a) << "," << state_label(b) << ","
         << counts.m[a][b] << "\n";
  for (int b = 0; b < 6; ++b)
    os << "background," << state_label(b) << "," << counts.background[b]
       << "\n";
}

void write_count_matrix_csv(const std::string& path, const CountMatrix& counts,
                            const std::string& comment) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  if (!comment.empty()) os << "# " << comment << "\n";
  write_count_matrix_csv(os, counts);
}

CountMatrix read_count_matrix_csv(std::istream& is) {
  CountMatrix counts;
  bool have_duration = false;
  int rows_seen = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv_line(line);
    if (f[0] == "duration_s" && f.size() == 2) {
      counts.duration_s = std::stod(f[1]);
      have_duration = true;
    } else if (f[0] == "emitted" && f.size() == 3) {
      counts.emitted[parse_state_label(f[1])] = std::stoull(f[2]);
      ++rows_seen;
    } else if (f[0] == "count" && f.size() == 4) {
      counts.m[parse_state_label(f[1])][parse_state_label(f[2])] =
          std::stoull(f[3]);
      ++rows_seen;
    } else if (f[0] == "background" && f.size() == 3) {
      counts.background[parse_state_label(f[1])] = std::stoull(f[2]);
      ++rows_seen;
    } else {
      throw std::runtime_error("count matrix CSV: bad row '" + line + "'");
    }
  }
  if (!have_duration || rows_seen != 48)
    throw std::runtime_error("count matrix CSV: incomplete file");
  return counts;
}

CountMatrix read_count_matrix_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_count_matrix_csv(is);
}

}  // namespace qkdlink
