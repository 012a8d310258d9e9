#pragma once

#include <complex>

#include "resire/geometry.hpp"
#include "resire/grid.hpp"

namespace resire {

using Complex = std::complex<double>;

/// Centered spectra: zero frequency sits at center_index(n) on every axis.
using Spectrum3 = Array3<Complex>;
using Spectrum2 = Array2<Complex>;

// Normalization: forward transforms are unnormalized (the zero-frequency
// coefficient equals the sum of the input), inverse transforms carry 1/N.
// Centering is done with index shifts around plain FFTs, never with phase ramps.

[[nodiscard]] Spectrum3 fft3_centered(const Volume& v);
[[nodiscard]] Spectrum3 fft3_centered(const Array3<Complex>& v);
[[nodiscard]] Array3<Complex> ifft3_centered(const Spectrum3& s);

[[nodiscard]] Spectrum2 fft2_centered(const Projection& p);
[[nodiscard]] Array2<Complex> ifft2_centered_complex(const Spectrum2& s);

/// Real part of the centered inverse 2D transform; the imaginary residue is dropped.
[[nodiscard]] Projection ifft2_centered(const Spectrum2& s);

/// Unnormalized forward / 1/N-normalized inverse 1D transform of each row of
/// `rows` (x fastest), in place. Not centered; used by the ramp filter.
void fft_rows(Array2<Complex>& rows, bool inverse);

/// Samples the central plane of `s` perpendicular to the rotated z axis.
///
/// Output pixel (kx, ky) (cycles/sample, each axis normalized by its own extent)
/// reads the 3D spectrum at R * (kx, ky, 0) with trilinear interpolation.
/// Frequencies beyond the grid read as zero. On even axes the grid is closed at
/// +n/2 by periodicity so the sampled plane keeps the Hermitian symmetry of a
/// real object; the Nyquist row and column of the output are averaged with their
/// periodic aliases for the same reason.
[[nodiscard]] Spectrum2 extract_central_slice(const Spectrum3& s, const RotationMatrix& r);

/// Trilinear sample of a centered spectrum at fractional array coordinates.
[[nodiscard]] Complex sample_trilinear(const Spectrum3& s, double gx, double gy, double gz);

} // namespace resire
