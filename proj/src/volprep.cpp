#include "cooccur/volprep.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace cooccur::volprep {

namespace {

// Cubic B-spline prefilter pole and gain (direct B-spline transform).
constexpr double kPole = -0.26794919243112270647;  // sqrt(3) - 2
constexpr double kGain = 6.0;                      // (1 - p)(1 - 1/p)

// Mirror reflection without edge repeat: ..., s[2], s[1], s[0], s[1], ...
std::size_t mirror_index(long long i, std::size_t n) {
  if (n == 1) return 0;
  const long long period = 2 * (static_cast<long long>(n) - 1);
  long long m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<long long>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

double initial_causal(const std::vector<double>& s) {
  const std::size_t n = s.size();
  const std::size_t horizon = static_cast<std::size_t>(
      std::ceil(std::log(std::numeric_limits<double>::epsilon()) /
                std::log(std::abs(kPole))));
  if (horizon < n) {
    double zk = kPole;
    double sum = s[0];
    for (std::size_t k = 1; k < horizon; ++k) {
      sum += zk * s[k];
      zk *= kPole;
    }
    return sum;
  }
  // Short signal: exact sum over the full mirror period.
  double zk = kPole;
  const double iz = 1.0 / kPole;
  double z2n = std::pow(kPole, static_cast<double>(n - 1));
  double sum = s[0] + z2n * s[n - 1];
  z2n *= z2n * iz;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    sum += (zk + z2n) * s[k];
    zk *= kPole;
    z2n *= iz;
  }
  return sum / (1.0 - std::pow(kPole, static_cast<double>(2 * n - 2)));
}

// In-place direct B-spline transform of one line (Unser's recursive
// filter, mirror boundaries).
void prefilter_line(std::vector<double>& line) {
  const std::size_t n = line.size();
  if (n == 1) return;
  for (auto& v : line) v *= kGain;
  line[0] = initial_causal(line);
  for (std::size_t k = 1; k < n; ++k) line[k] += kPole * line[k - 1];
  line[n - 1] = (kPole / (kPole * kPole - 1.0)) *
                (line[n - 1] + kPole * line[n - 2]);
  for (std::size_t k = n - 1; k-- > 0;)
    line[k] = kPole * (line[k + 1] - line[k]);
}

// Cubic B-spline value at fractional position x from prefiltered
// coefficients.
double evaluate_line(const std::vector<double>& coeff, double x) {
  const std::size_t n = coeff.size();
  if (n == 1) return coeff[0];
  const double fl = std::floor(x);
  const auto base = static_cast<long long>(fl);
  const double t = x - fl;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double w0 = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
  const double w1 = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
  const double w2 = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
  const double w3 = t3 / 6.0;
  return w0 * coeff[mirror_index(base - 1, n)] +
         w1 * coeff[mirror_index(base, n)] +
         w2 * coeff[mirror_index(base + 1, n)] +
         w3 * coeff[mirror_index(base + 2, n)];
}

uint32_t output_length(uint32_t n, double spacing, double target) {
  const double extent = static_cast<double>(n) * spacing;
  const auto len = static_cast<uint32_t>(std::floor(extent / target + 0.5));
  return std::max(len, 1u);
}

// Resample along one axis (0 = x, 1 = y, 2 = z), other axes untouched.
Volume resample_axis(const Volume& v, int axis, double target) {
  const uint32_t n_in = v.dims[axis];
  const uint32_t n_out =
      output_length(n_in, v.spacing[axis], target);
  const double step = target / v.spacing[axis];

  Volume out;
  out.dims = v.dims;
  out.dims[axis] = n_out;
  out.spacing = v.spacing;
  out.spacing[axis] = static_cast<float>(target);
  out.voxels.resize(out.voxel_count());

  const std::array<std::size_t, 3> in_stride = {
      1, v.dims[0], static_cast<std::size_t>(v.dims[0]) * v.dims[1]};
  const std::array<std::size_t, 3> out_stride = {
      1, out.dims[0], static_cast<std::size_t>(out.dims[0]) * out.dims[1]};

  const int a1 = (axis + 1) % 3;
  const int a2 = (axis + 2) % 3;
  std::vector<double> line(n_in);
  for (uint32_t j2 = 0; j2 < v.dims[a2]; ++j2) {
    for (uint32_t j1 = 0; j1 < v.dims[a1]; ++j1) {
      const std::size_t in_base = j1 * in_stride[a1] + j2 * in_stride[a2];
      const std::size_t out_base = j1 * out_stride[a1] + j2 * out_stride[a2];
      for (uint32_t k = 0; k < n_in; ++k)
        line[k] = v.voxels[in_base + k * in_stride[axis]];
      prefilter_line(line);
      for (uint32_t k = 0; k < n_out; ++k) {
        const double x = static_cast<double>(k) * step;
        out.voxels[out_base + k * out_stride[axis]] =
            static_cast<float>(evaluate_line(line, x));
      }
    }
  }
  return out;
}

}  // namespace

void Volume::validate() const {
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0)
    throw ValidationError("volume dimensions must be positive");
  if (voxels.size() != voxel_count())
    throw ValidationError("voxel count does not match dimensions");
  for (float s : spacing) {
    if (!(s > 0.f) || !std::isfinite(s))
      throw ValidationError("voxel spacing must be positive and finite");
  }
  for (float v : voxels) {
    if (!std::isfinite(v)) throw ValidationError("non-finite voxel value");
  }
}

Volume resample(const Volume& v, double target_spacing_mm) {
  v.validate();
  if (!(target_spacing_mm > 0.0))
    throw ValidationError("target spacing must be positive");
  Volume out = resample_axis(v, 0, target_spacing_mm);
  out = resample_axis(out, 1, target_spacing_mm);
  out = resample_axis(out, 2, target_spacing_mm);
  return out;
}

Volume clip_normalize(const Volume& v) {
  v.validate();
  Volume out = v;
  for (auto& x : out.voxels) {
    x = static_cast<float>(std::clamp(static_cast<double>(x), kClipLowHU,
                                      kClipHighHU));
  }
  double sum = 0.0;
  for (float x : out.voxels) sum += x;
  const double n = static_cast<double>(out.voxels.size());
  const double mean = sum / n;
  double sq = 0.0;
  for (float x : out.voxels) {
    const double d = x - mean;
    sq += d * d;
  }
  const double sd = std::sqrt(sq / n);
  if (sd < 1e-8) {
    std::fill(out.voxels.begin(), out.voxels.end(), 0.f);
    return out;
  }
  for (auto& x : out.voxels) x = static_cast<float>((x - mean) / sd);
  return out;
}

namespace {

constexpr char kMagic[4] = {'R', 'V', 'L', '1'};

void put_u32(std::string& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_f32(std::string& buf, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(buf, bits);
}

uint32_t get_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

float get_f32(const unsigned char* p) {
  const uint32_t bits = get_u32(p);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

Volume read_rvol(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path);
  if (data.size() < 28 || std::memcmp(data.data(), kMagic, 4) != 0)
    throw IoError(path + " is not an RVOL file");
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  Volume v;
  for (int i = 0; i < 3; ++i) v.dims[i] = get_u32(p + 4 + 4 * i);
  for (int i = 0; i < 3; ++i) v.spacing[i] = get_f32(p + 16 + 4 * i);
  const unsigned __int128 wide = static_cast<unsigned __int128>(v.dims[0]) *
                                 v.dims[1] * v.dims[2];
  if ((data.size() - 28) % 4 != 0 || wide != (data.size() - 28) / 4)
    throw IoError(path + ": size mismatch against header dimensions");
  const std::size_t count = static_cast<std::size_t>(wide);
  v.voxels.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    v.voxels[i] = get_f32(p + 28 + 4 * i);
  v.validate();
  return v;
}

void write_rvol(const Volume& v, const std::string& path) {
  v.validate();
  std::string buf;
  buf.reserve(28 + 4 * v.voxels.size());
  buf.append(kMagic, 4);
  for (uint32_t d : v.dims) put_u32(buf, d);
  for (float s : v.spacing) put_f32(buf, s);
  for (float x : v.voxels) put_f32(buf, x);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace cooccur::volprep
