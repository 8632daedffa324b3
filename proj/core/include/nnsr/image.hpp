#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nnsr/matrix.hpp"

namespace nnsr {

/// Grayscale raster with pixels normalized to [0, 1], remembering the
/// source bit depth (8 or 16) for round-trip quantization.
struct ImagePlane {
  Index width = 0;
  Index height = 0;
  std::vector<double> pixels;  // row-major, height*width values in [0, 1]
  int source_depth = 8;        // bits per sample of the source file

  double& at(Index row, Index col) { return pixels[row * width + col]; }
  double at(Index row, Index col) const { return pixels[row * width + col]; }
};

/// Reads a binary PGM (P5, 8- or 16-bit) or a binary PPM (P6), converting
/// color to grayscale with Rec.601 luma (0.299 R + 0.587 G + 0.114 B).
/// Malformed input raises FormatError naming the byte offset.
ImagePlane read_image(const std::filesystem::path& path);

/// Writes a binary PGM at the plane's source depth, clamping pixels to
/// [0, 1] before quantization. write(read(x)) reproduces the pixel values
/// to within one quantization step.
void write_image(const ImagePlane& plane, const std::filesystem::path& path);

/// height-by-width matrix view of the pixels.
Matrix to_matrix(const ImagePlane& plane);

/// Plane from a height-by-width matrix; clamps to [0, 1] when asked
/// (recovered matrices are only clamped at metric/export time).
ImagePlane from_matrix(const Matrix& a, int source_depth = 8, bool clamp = true);

enum class MaskKind { random, stripe };

/// Degradation protocol: a fraction of pixels gets uniform outliers in
/// [-outlier_mag, outlier_mag] (values may leave [0, 1]; not clamped), then
/// either a Bernoulli(gamma) random mask or deterministic vertical stripes
/// (columns c with c % stripe_period < stripe_width are missing).
struct DegradeSpec {
  MaskKind mask_kind = MaskKind::random;
  double gamma = 0.8;      // observed fraction for random masks
  Index stripe_width = 4;  // missing columns per period, < stripe_period
  Index stripe_period = 16;
  double outlier_frac = 0.2;
  double outlier_mag = 2.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Degraded {
  Matrix x;  // corrupted image as a matrix (all entries, pre-projection)
  ObservationMask mask;
};

Degraded degrade(const ImagePlane& plane, const DegradeSpec& spec);

/// 10 log10(peak^2 / MSE); +infinity for identical images.
double psnr(const ImagePlane& reference, const ImagePlane& test, double peak);

/// Mean local SSIM with the standard 11x11 Gaussian window (std 1.5),
/// K1 = 0.01, K2 = 0.03, computed over windows fully inside the image.
/// Throws ShapeError when either dimension is below the window size.
double ssim(const ImagePlane& reference, const ImagePlane& test,
            double dynamic_range);

/// Stacks B equally-sized bands into a (width*height) x B matrix; column b
/// is the column-major vectorization of band b (entry (row i, col j) lands
/// at index j*height + i).
Matrix msi_stack(const std::vector<ImagePlane>& bands);

/// Inverse of msi_stack; the round trip is exact.
std::vector<ImagePlane> msi_unstack(const Matrix& stacked, Index width,
                                    Index height);

/// Sets round(density*count) entries, chosen uniformly without replacement,
/// to 0 (pepper) or the per-matrix maximum (salt) with equal probability.
Matrix salt_pepper(const Matrix& x, double density, std::uint64_t seed);

/// Impulse-noise density for a linear signal-to-noise ratio given in dB:
/// density = 1/SNR with SNR = 10^(snr_db/10).
double salt_pepper_density_for_snr_db(double snr_db);

}  // namespace nnsr
