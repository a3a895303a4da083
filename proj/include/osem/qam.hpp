#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace osem::qam {

using cplx = std::complex<double>;

// Square M-QAM with a per-axis reflected Gray code. The first half of each
// symbol's bits selects the I level, the second half the Q level, most
// significant bit first. Axis levels are enumerated in descending order, so
// each 16-QAM axis maps
//
//   00 -> +3   01 -> +1   11 -> -1   10 -> -3   (integer units, spacing 2)
//
// and the whole constellation is scaled to unit average symbol energy.
// Distance ties in hard decisions resolve to the smaller level index, i.e.
// toward the more positive level.
struct Constellation {
  int order = 16;
  int bits_per_symbol = 4;
  int side = 4;  // levels per axis
  int bits_per_axis = 2;
  double scale = 1.0;  // multiplies integer levels

  static Constellation make(int m) {
    if (m != 4 && m != 16 && m != 64)
      throw std::invalid_argument("qam: unsupported constellation size " + std::to_string(m));
    Constellation c;
    c.order = m;
    c.bits_per_symbol = 2;
    while ((1 << c.bits_per_symbol) < m) ++c.bits_per_symbol;
    c.bits_per_axis = c.bits_per_symbol / 2;
    c.side = 1 << c.bits_per_axis;
    // mean energy of {..,-3,-1,+1,+3,..} per axis is (side^2 - 1)/3
    c.scale = 1.0 / std::sqrt(2.0 * (static_cast<double>(c.side) * c.side - 1.0) / 3.0);
    return c;
  }
};

inline unsigned gray_encode(unsigned i) { return i ^ (i >> 1); }

inline unsigned gray_decode(unsigned g) {
  unsigned b = 0;
  for (; g != 0; g >>= 1) b ^= g;
  return b;
}

// Level in integer units for an axis bit group; index 0 is the most positive.
inline int axis_level_units(const Constellation& c, unsigned bits_value) {
  const unsigned idx = gray_decode(bits_value);
  return (c.side - 1) - 2 * static_cast<int>(idx);
}

// Nearest level index for a received axis value in integer units. Exact
// midpoints go to the smaller index.
inline int quantize_axis(const Constellation& c, double units) {
  const double t = (static_cast<double>(c.side - 1) - units) / 2.0;
  long i = static_cast<long>(std::ceil(t - 0.5));
  if (i < 0) i = 0;
  if (i > c.side - 1) i = c.side - 1;
  return static_cast<int>(i);
}

inline std::vector<cplx> map_bits(std::span<const std::uint8_t> bits, int m) {
  const Constellation c = Constellation::make(m);
  if (bits.size() % static_cast<std::size_t>(c.bits_per_symbol) != 0)
    throw std::invalid_argument("qam: bit count not divisible by bits per symbol");
  const std::size_t count = bits.size() / c.bits_per_symbol;
  std::vector<cplx> out(count);
  for (std::size_t s = 0; s < count; ++s) {
    const std::uint8_t* p = bits.data() + s * c.bits_per_symbol;
    unsigned vi = 0;
    unsigned vq = 0;
    for (int b = 0; b < c.bits_per_axis; ++b) {
      vi = (vi << 1) | (p[b] & 1u);
      vq = (vq << 1) | (p[c.bits_per_axis + b] & 1u);
    }
    out[s] = cplx{static_cast<double>(axis_level_units(c, vi)),
                  static_cast<double>(axis_level_units(c, vq))} *
             c.scale;
  }
  return out;
}

struct HardDecision {
  cplx point;
  unsigned i_bits;  // axis bit groups, MSB first
  unsigned q_bits;
};

inline HardDecision decide_symbol(const Constellation& c, cplx y) {
  const int ii = quantize_axis(c, y.real() / c.scale);
  const int qi = quantize_axis(c, y.imag() / c.scale);
  HardDecision d;
  d.point = cplx{static_cast<double>((c.side - 1) - 2 * ii),
                 static_cast<double>((c.side - 1) - 2 * qi)} *
            c.scale;
  d.i_bits = gray_encode(static_cast<unsigned>(ii));
  d.q_bits = gray_encode(static_cast<unsigned>(qi));
  return d;
}

inline void append_bits(const Constellation& c, const HardDecision& d, std::vector<std::uint8_t>& out) {
  for (int b = c.bits_per_axis - 1; b >= 0; --b) out.push_back((d.i_bits >> b) & 1u);
  for (int b = c.bits_per_axis - 1; b >= 0; --b) out.push_back((d.q_bits >> b) & 1u);
}

// Hard demapper; inverse of map_bits in the noiseless case.
inline std::vector<std::uint8_t> demap(std::span<const cplx> symbols, int m) {
  const Constellation c = Constellation::make(m);
  std::vector<std::uint8_t> bits;
  bits.reserve(symbols.size() * c.bits_per_symbol);
  for (const cplx y : symbols) append_bits(c, decide_symbol(c, y), bits);
  return bits;
}

}  // namespace osem::qam
