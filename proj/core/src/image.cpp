#include "nnsr/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nnsr/rng.hpp"

namespace nnsr {

namespace {

constexpr std::uint64_t kTagImageOutliers = 0x40;
constexpr std::uint64_t kTagImageMask = 0x50;
constexpr std::uint64_t kTagSaltPepper = 0x60;

[[noreturn]] void fail(const std::string& what, std::size_t offset) {
  throw FormatError("pnm: " + what + " at byte offset " +
                    std::to_string(offset));
}

// Cursor over the raw file bytes; keeps offsets exact for error messages.
struct ByteCursor {
  const std::vector<unsigned char>& data;
  std::size_t pos = 0;

  bool eof() const { return pos >= data.size(); }
  unsigned char peek() const { return data[pos]; }

  void skip_space_and_comments() {
    while (!eof()) {
      const unsigned char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' ||
                 c == '\f' || c == '\v') {
        ++pos;
      } else {
        break;
      }
    }
  }

  long parse_uint(const char* what) {
    skip_space_and_comments();
    if (eof()) fail(std::string("missing ") + what, pos);
    if (peek() < '0' || peek() > '9') {
      fail(std::string("expected digit for ") + what, pos);
    }
    long value = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      value = value * 10 + (peek() - '0');
      if (value > 1000000000L) fail(std::string(what) + " out of range", pos);
      ++pos;
    }
    return value;
  }
};

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("pnm: cannot open " + path.string());
  std::vector<unsigned char> data(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

std::vector<std::uint64_t> sample_without_replacement(std::uint64_t total,
                                                      std::uint64_t count,
                                                      Rng& rng) {
  std::vector<std::uint64_t> idx(total);
  for (std::uint64_t i = 0; i < total; ++i) idx[i] = i;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint64_t j = i + rng.below(total - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace

ImagePlane read_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> data = slurp(path);
  if (data.empty()) fail("empty file", 0);
  ByteCursor cur{data};

  if (data.size() < 2) fail("truncated magic", 0);
  const char m0 = static_cast<char>(data[0]);
  const char m1 = static_cast<char>(data[1]);
  if (m0 != 'P' || (m1 != '5' && m1 != '6')) fail("unsupported magic", 0);
  const bool color = (m1 == '6');
  cur.pos = 2;

  const long width = cur.parse_uint("width");
  const long height = cur.parse_uint("height");
  const long maxval = cur.parse_uint("maxval");
  if (width < 1 || height < 1) fail("dimensions must be positive", cur.pos);
  if (maxval < 1 || maxval > 65535) fail("maxval out of range", cur.pos);
  if (cur.eof()) fail("missing payload separator", cur.pos);
  {
    const unsigned char c = cur.peek();
    if (!(c == ' ' || c == '\t' || c == '\r' || c == '\n')) {
      fail("expected single whitespace before payload", cur.pos);
    }
    ++cur.pos;
  }

  const int bytes_per_sample = maxval > 255 ? 2 : 1;
  const std::size_t samples_per_pixel = color ? 3 : 1;
  const std::size_t need = static_cast<std::size_t>(width) *
                           static_cast<std::size_t>(height) *
                           samples_per_pixel *
                           static_cast<std::size_t>(bytes_per_sample);
  if (data.size() - cur.pos < need) {
    fail("truncated payload (need " + std::to_string(need) + " bytes, have " +
             std::to_string(data.size() - cur.pos) + ")",
         cur.pos);
  }

  ImagePlane plane;
  plane.width = width;
  plane.height = height;
  plane.source_depth = bytes_per_sample == 2 ? 16 : 8;
  plane.pixels.resize(static_cast<std::size_t>(width) *
                      static_cast<std::size_t>(height));

  const double scale = 1.0 / static_cast<double>(maxval);
  std::size_t p = cur.pos;
  auto next_sample = [&]() {
    if (bytes_per_sample == 2) {
      const double v = static_cast<double>(data[p]) * 256.0 +
                       static_cast<double>(data[p + 1]);
      p += 2;
      return v;
    }
    return static_cast<double>(data[p++]);
  };
  for (std::size_t i = 0; i < plane.pixels.size(); ++i) {
    if (color) {
      const double r = next_sample();
      const double g = next_sample();
      const double b = next_sample();
      plane.pixels[i] = (0.299 * r + 0.587 * g + 0.114 * b) * scale;
    } else {
      plane.pixels[i] = next_sample() * scale;
    }
  }
  // Rec.601 luma of in-range samples stays within [0,1] up to round-off
  for (double& v : plane.pixels) v = std::clamp(v, 0.0, 1.0);
  return plane;
}

void write_image(const ImagePlane& plane, const std::filesystem::path& path) {
  if (plane.width < 1 || plane.height < 1 ||
      plane.pixels.size() != static_cast<std::size_t>(plane.width) *
                                 static_cast<std::size_t>(plane.height)) {
    throw ShapeError("write_image: inconsistent plane dimensions");
  }
  const bool wide = plane.source_depth > 8;
  const long maxval = wide ? 65535 : 255;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("pnm: cannot open " + path.string() +
                              " for writing");
  out << "P5\n" << plane.width << " " << plane.height << "\n" << maxval
      << "\n";
  for (const double v : plane.pixels) {
    const double c = std::clamp(v, 0.0, 1.0);
    const long q = std::lround(c * static_cast<double>(maxval));
    if (wide) {
      out.put(static_cast<char>((q >> 8) & 0xFF));
      out.put(static_cast<char>(q & 0xFF));
    } else {
      out.put(static_cast<char>(q & 0xFF));
    }
  }
  if (!out) throw FormatError("pnm: write failed for " + path.string());
}

Matrix to_matrix(const ImagePlane& plane) {
  Matrix a(plane.height, plane.width);
  for (Index i = 0; i < plane.height; ++i)
    for (Index j = 0; j < plane.width; ++j) a(i, j) = plane.at(i, j);
  return a;
}

ImagePlane from_matrix(const Matrix& a, int source_depth, bool clamp) {
  ImagePlane plane;
  plane.width = a.cols();
  plane.height = a.rows();
  plane.source_depth = source_depth;
  plane.pixels.resize(static_cast<std::size_t>(a.size()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      plane.at(i, j) = clamp ? std::clamp(v, 0.0, 1.0) : v;
    }
  }
  return plane;
}

void DegradeSpec::validate() const {
  if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("DegradeSpec: gamma must be in (0,1]");
  if (mask_kind == MaskKind::stripe) {
    if (stripe_period < 1 || stripe_width < 0 || stripe_width >= stripe_period) {
      throw std::invalid_argument("DegradeSpec: need 0 <= stripe_width < stripe_period");
    }
  }
  if (!(outlier_frac >= 0 && outlier_frac <= 1)) throw std::invalid_argument("DegradeSpec: outlier_frac must be in [0,1]");
  if (!(outlier_mag >= 0)) throw std::invalid_argument("DegradeSpec: outlier_mag must be >= 0");
}

Degraded degrade(const ImagePlane& plane, const DegradeSpec& spec) {
  spec.validate();
  Matrix x = to_matrix(plane);
  const std::uint64_t total = static_cast<std::uint64_t>(x.size());
  const std::uint64_t count = static_cast<std::uint64_t>(
      std::llround(spec.outlier_frac * static_cast<double>(total)));
  if (count > 0) {
    Rng rng(Rng::derive(spec.seed, kTagImageOutliers));
    const std::vector<std::uint64_t> idx =
        sample_without_replacement(total, count, rng);
    for (const std::uint64_t k : idx) {
      const Index i = static_cast<Index>(k / static_cast<std::uint64_t>(x.cols()));
      const Index j = static_cast<Index>(k % static_cast<std::uint64_t>(x.cols()));
      x(i, j) += rng.uniform(-spec.outlier_mag, spec.outlier_mag);
    }
  }

  ObservationMask::Flags flags(x.rows(), x.cols());
  if (spec.mask_kind == MaskKind::random) {
    Rng rng(Rng::derive(spec.seed, kTagImageMask));
    for (Index i = 0; i < x.rows(); ++i)
      for (Index j = 0; j < x.cols(); ++j)
        flags(i, j) = rng.uniform01() < spec.gamma;
  } else {
    for (Index j = 0; j < x.cols(); ++j) {
      const bool missing = (j % spec.stripe_period) < spec.stripe_width;
      for (Index i = 0; i < x.rows(); ++i) flags(i, j) = !missing;
    }
  }
  return Degraded{std::move(x), ObservationMask(std::move(flags))};
}

double psnr(const ImagePlane& reference, const ImagePlane& test, double peak) {
  if (reference.width != test.width || reference.height != test.height) {
    throw ShapeError("psnr: image dimensions disagree");
  }
  if (!(peak > 0)) throw std::invalid_argument("psnr: peak must be > 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < reference.pixels.size(); ++i) {
    const double d = reference.pixels[i] - test.pixels[i];
    acc += d * d;
  }
  const double mse = acc / static_cast<double>(reference.pixels.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const ImagePlane& reference, const ImagePlane& test,
            double dynamic_range) {
  if (reference.width != test.width || reference.height != test.height) {
    throw ShapeError("ssim: image dimensions disagree");
  }
  if (!(dynamic_range > 0)) {
    throw std::invalid_argument("ssim: dynamic range must be > 0");
  }
  constexpr Index kWindow = 11;
  constexpr double kGaussStd = 1.5;
  if (reference.width < kWindow || reference.height < kWindow) {
    throw ShapeError("ssim: image smaller than the 11x11 window");
  }

  double window[kWindow][kWindow];
  double wsum = 0.0;
  for (Index a = 0; a < kWindow; ++a) {
    for (Index b = 0; b < kWindow; ++b) {
      const double di = static_cast<double>(a - kWindow / 2);
      const double dj = static_cast<double>(b - kWindow / 2);
      window[a][b] = std::exp(-(di * di + dj * dj) / (2.0 * kGaussStd * kGaussStd));
      wsum += window[a][b];
    }
  }
  for (auto& row : window)
    for (double& w : row) w /= wsum;

  const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
  const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);

  double total = 0.0;
  std::size_t windows = 0;
  for (Index i = 0; i + kWindow <= reference.height; ++i) {
    for (Index j = 0; j + kWindow <= reference.width; ++j) {
      double mx = 0, my = 0, xx = 0, yy = 0, xy = 0;
      for (Index a = 0; a < kWindow; ++a) {
        for (Index b = 0; b < kWindow; ++b) {
          const double w = window[a][b];
          const double px = reference.at(i + a, j + b);
          const double py = test.at(i + a, j + b);
          mx += w * px;
          my += w * py;
          xx += w * px * px;
          yy += w * py * py;
          xy += w * px * py;
        }
      }
      const double vx = xx - mx * mx;
      const double vy = yy - my * my;
      const double cov = xy - mx * my;
      const double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
      const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
      total += num / den;
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

Matrix msi_stack(const std::vector<ImagePlane>& bands) {
  if (bands.empty()) throw ShapeError("msi_stack: no bands");
  const Index w = bands.front().width;
  const Index h = bands.front().height;
  for (const ImagePlane& band : bands) {
    if (band.width != w || band.height != h) {
      throw ShapeError("msi_stack: band dimensions disagree");
    }
  }
  Matrix out(w * h, static_cast<Index>(bands.size()));
  for (Index b = 0; b < out.cols(); ++b) {
    const ImagePlane& band = bands[static_cast<std::size_t>(b)];
    for (Index j = 0; j < w; ++j)
      for (Index i = 0; i < h; ++i) out(j * h + i, b) = band.at(i, j);
  }
  return out;
}

std::vector<ImagePlane> msi_unstack(const Matrix& stacked, Index width,
                                    Index height) {
  if (stacked.rows() != width * height) {
    throw ShapeError("msi_unstack: row count does not equal width*height");
  }
  std::vector<ImagePlane> bands(static_cast<std::size_t>(stacked.cols()));
  for (Index b = 0; b < stacked.cols(); ++b) {
    ImagePlane& band = bands[static_cast<std::size_t>(b)];
    band.width = width;
    band.height = height;
    band.pixels.resize(static_cast<std::size_t>(width * height));
    for (Index j = 0; j < width; ++j)
      for (Index i = 0; i < height; ++i) band.at(i, j) = stacked(j * height + i, b);
  }
  return bands;
}

Matrix salt_pepper(const Matrix& x, double density, std::uint64_t seed) {
  if (!(density >= 0 && density <= 1)) {
    throw std::invalid_argument("salt_pepper: density must be in [0,1]");
  }
  Matrix out = x;
  const std::uint64_t total = static_cast<std::uint64_t>(x.size());
  const std::uint64_t count = static_cast<std::uint64_t>(
      std::llround(density * static_cast<double>(total)));
  if (count == 0) return out;
  const double salt = x.maxCoeff();
  Rng rng(Rng::derive(seed, kTagSaltPepper));
  const std::vector<std::uint64_t> idx =
      sample_without_replacement(total, count, rng);
  for (const std::uint64_t k : idx) {
    const Index i = static_cast<Index>(k / static_cast<std::uint64_t>(x.cols()));
    const Index j = static_cast<Index>(k % static_cast<std::uint64_t>(x.cols()));
    out(i, j) = rng.coin() ? salt : 0.0;
  }
  return out;
}

double salt_pepper_density_for_snr_db(double snr_db) {
  return std::pow(10.0, -snr_db / 10.0);
}

}  // namespace nnsr
