#pragma once

#include <cmath>
#include <complex>

namespace ffedge {

// Arithmetic-only complex number usable with any real type, including mpfr.
template <class T>
struct Cplx {
  T re{};
  T im{};

  Cplx() = default;
  Cplx(T r) : re(std::move(r)), im(0) {}
  Cplx(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  Cplx& operator+=(const Cplx& o) { re += o.re; im += o.im; return *this; }
  Cplx& operator-=(const Cplx& o) { re -= o.re; im -= o.im; return *this; }
  Cplx& operator*=(const Cplx& o) {
    T r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Cplx& operator*=(const T& s) { re *= s; im *= s; return *this; }
  Cplx& operator/=(const Cplx& o) {
    T d = o.re * o.re + o.im * o.im;
    T r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }
  Cplx& operator/=(const T& s) { re /= s; im /= s; return *this; }

  friend Cplx operator+(Cplx a, const Cplx& b) { return a += b; }
  friend Cplx operator-(Cplx a, const Cplx& b) { return a -= b; }
  friend Cplx operator*(Cplx a, const Cplx& b) { return a *= b; }
  friend Cplx operator*(Cplx a, const T& s) { return a *= s; }
  friend Cplx operator*(const T& s, Cplx a) { return a *= s; }
  friend Cplx operator/(Cplx a, const Cplx& b) { return a /= b; }
  friend Cplx operator/(Cplx a, const T& s) { return a /= s; }
  friend Cplx operator-(const Cplx& a) { return Cplx(-a.re, -a.im); }
};

template <class T>
Cplx<T> conj(const Cplx<T>& z) { return Cplx<T>(z.re, -z.im); }

template <class T>
T norm2(const Cplx<T>& z) { return z.re * z.re + z.im * z.im; }

template <class T>
T abs(const Cplx<T>& z) {
  using std::sqrt;
  return sqrt(norm2(z));
}

// e^{i theta}
template <class T>
Cplx<T> unit(const T& theta) {
  using std::cos;
  using std::sin;
  return Cplx<T>(cos(theta), sin(theta));
}

template <class T>
Cplx<T> from_std(const std::complex<double>& z) { return Cplx<T>(T(z.real()), T(z.imag())); }

template <class T>
std::complex<double> to_std(const Cplx<T>& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

}  // namespace ffedge
