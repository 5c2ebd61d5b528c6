#include "ffedge/fft.hpp"

#include "ffedge/errors.hpp"

#include <cmath>
#include <utility>

namespace ffedge {

namespace {

// (vr, vi) = (xr, xi) * (wr, wi)
inline void cmul(double& vr, double& vi, const double& xr, const double& xi, const double& wr, const double& wi) {
  vr = xr * wr - xi * wi;
  vi = xr * wi + xi * wr;
}

inline void cmul(Real& vr, Real& vi, const Real& xr, const Real& xi, const Real& wr, const Real& wi) {
  mpfr_fmms(vr.backend().data(), xr.backend().data(), wr.backend().data(), xi.backend().data(), wi.backend().data(),
            MPFR_RNDN);
  mpfr_fmma(vi.backend().data(), xr.backend().data(), wi.backend().data(), xi.backend().data(), wr.backend().data(),
            MPFR_RNDN);
}

inline void butterfly(double& ur, double& ui, double& xr, double& xi, const double& vr, const double& vi) {
  xr = ur - vr;
  xi = ui - vi;
  ur += vr;
  ui += vi;
}

inline void butterfly(Real& ur, Real& ui, Real& xr, Real& xi, const Real& vr, const Real& vi) {
  mpfr_sub(xr.backend().data(), ur.backend().data(), vr.backend().data(), MPFR_RNDN);
  mpfr_sub(xi.backend().data(), ui.backend().data(), vi.backend().data(), MPFR_RNDN);
  mpfr_add(ur.backend().data(), ur.backend().data(), vr.backend().data(), MPFR_RNDN);
  mpfr_add(ui.backend().data(), ui.backend().data(), vi.backend().data(), MPFR_RNDN);
}

template <class T>
T two_pi();

template <>
double two_pi<double>() {
  return 2 * M_PI;
}

template <>
Real two_pi<Real>() {
  return 2 * pi_real();
}

}  // namespace

template <class T>
Fft<T>::Fft(std::size_t M) : M_(M), cos_(M), sin_(M) {
  using std::cos;
  using std::sin;
  if (M == 0 || (M & (M - 1)) != 0) throw ConfigError("Fft: length must be a power of two");
  const T tp = two_pi<T>();
  for (std::size_t k = 0; k < M; ++k) {
    const T th = tp * T(static_cast<double>(k)) / T(static_cast<double>(M));
    cos_[k] = cos(th);
    sin_[k] = sin(th);
  }
}

template <class T>
void Fft<T>::run(std::vector<T>& re, std::vector<T>& im, bool inverse) const {
  const std::size_t M = M_;
  if (re.size() != M || im.size() != M) throw ConfigError("Fft: input length mismatch");
  for (std::size_t i = 1, j = 0; i < M; ++i) {
    std::size_t bit = M >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  T vr = 0, vi = 0;
  for (std::size_t len = 2; len <= M; len <<= 1) {
    const std::size_t stride = M / len;
    for (std::size_t i = 0; i < M; i += len)
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::size_t e = inverse ? k * stride : (M - k * stride) % M;
        cmul(vr, vi, re[i + k + len / 2], im[i + k + len / 2], cos_[e], sin_[e]);
        butterfly(re[i + k], im[i + k], re[i + k + len / 2], im[i + k + len / 2], vr, vi);
      }
  }
}

template <class T>
void Fft<T>::multiply(std::vector<T>& re, std::vector<T>& im, const std::vector<T>& fr,
                      const std::vector<T>& fi) const {
  T vr = 0, vi = 0;
  for (std::size_t a = 0; a < M_; ++a) {
    cmul(vr, vi, re[a], im[a], fr[a], fi[a]);
    std::swap(re[a], vr);
    std::swap(im[a], vi);
  }
}

template class Fft<double>;
template class Fft<Real>;

}  // namespace ffedge
