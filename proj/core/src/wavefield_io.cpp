#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>

#include "backflow/errors.hpp"
#include "backflow/wavefield.hpp"
#include "io_format.hpp"

namespace backflow {

namespace {

void put_f64(std::ostream& out, double value) {
  auto bits = std::bit_cast<std::uint64_t>(value);
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  out.write(bytes.data(), bytes.size());
}

double get_f64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw Error("binary wavefield dump is truncated");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_csv(std::ostream& out, const WaveField& field) {
  out << "x,re,im,density\n";
  std::string line;
  for (std::size_t i = 0; i < field.amplitudes.size(); ++i) {
    const Complex a = field.amplitudes[i];
    line.clear();
    detail::append_number(line, field.grid.x(i));
    line += ',';
    detail::append_number(line, a.real());
    line += ',';
    detail::append_number(line, a.imag());
    line += ',';
    detail::append_number(line, std::norm(a));
    line += '\n';
    out << line;
  }
}

void write_binary(std::ostream& out, const WaveField& field) {
  put_f64(out, static_cast<double>(field.grid.n_points()));
  put_f64(out, field.grid.spacing());
  put_f64(out, field.grid.center());
  put_f64(out, field.time);
  for (const Complex& a : field.amplitudes) {
    put_f64(out, a.real());
    put_f64(out, a.imag());
  }
}

WaveField read_binary(std::istream& in) {
  const double n = get_f64(in);
  const double spacing = get_f64(in);
  const double center = get_f64(in);
  const double time = get_f64(in);
  if (!(n >= 3.0) || n != std::floor(n) || n > 1e12) throw Error("binary wavefield dump has a bad point count");
  const auto points = static_cast<std::size_t>(n);
  WaveField field{Grid(center, 0.5 * spacing * static_cast<double>(points - 1), points),
                  std::vector<Complex>(points), time};
  for (Complex& a : field.amplitudes) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    a = Complex(re, im);
  }
  return field;
}

}  // namespace backflow
